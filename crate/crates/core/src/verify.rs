//! Built-in self-checks: the worked examples and structural identities the
//! library is expected to reproduce, each run exactly.

use std::thread;

use crate::coeffring::{bernoulli, binomial, factorial, int, CoeffElem, MzvTable, Rational};
use crate::decomp::{alpha, diffeq_expand, length_one, EmzvIndex, Engine};
use crate::derlie::{
    annihilator_in, build_d_derivation, eps_apply, eps_images, find_relations_among, fourier_membership,
    free_lie_dim, to_e0_basis, uu_dual_membership, LieExpr, LieVec,
};
use crate::eisalg::{eisenstein_qexp, epoly_mul, epoly_to_qexp, iei_qexp, shuffle_words, EPoly, EWord};
use crate::linalg::{rref, RatMatrix};
use crate::ncalg::{build_ainf, build_phi, build_t, build_ytilde, extract_gamma, NCSeries, NCWord};
use crate::qseries::QTSeries;

/// Outcome of one check: `Ok(())` on success, a message otherwise.
pub type CheckResult = Result<(), String>;

pub struct Check {
    pub id: &'static str,
    pub title: &'static str,
    run: fn(&Engine) -> CheckResult,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> CheckResult {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: crate::Error) -> String {
    format!("{}: {e}", e.name())
}

fn idx(s: &str) -> EmzvIndex {
    EmzvIndex::parse(s).expect("literal index")
}

fn ep(s: &str) -> EPoly {
    EPoly::parse(s).expect("literal polynomial")
}

fn decomp(e: &Engine, s: &str) -> Result<EPoly, String> {
    e.decompose(&idx(s)).map(|d| d.epoly).map_err(err)
}

fn expect_decomp(e: &Engine, s: &str, expected: &str) -> CheckResult {
    let got = decomp(e, s)?;
    ensure(got == ep(expected), || format!("I{}: got {got}, expected {expected}", idx(s)))
}

/// `(-1)^k2 (2 pi i)^2/2 B_k1 B_k2/(k1! k2!)`, or 0 for `k1 = k2 = 1`.
fn gamma_two(k1: u32, k2: u32) -> CoeffElem {
    if k1 == 1 && k2 == 1 {
        return CoeffElem::zero();
    }
    let sign = if k2.is_multiple_of(2) { int(1) } else { int(-1) };
    let r = sign * bernoulli(k1 as usize) * bernoulli(k2 as usize)
        / Rational::from_integer(factorial(k1) * factorial(k2))
        / int(2);
    CoeffElem::pi_power(2).scale(&r)
}

fn length_one_check(e: &Engine) -> CheckResult {
    for k in 0..=12u32 {
        let got = decomp(e, &k.to_string())?;
        let expected = if k % 2 == 1 {
            EPoly::zero()
        } else {
            EPoly::constant(CoeffElem::pi_power(1).scale(&(bernoulli(k as usize) / Rational::from_integer(factorial(k)))))
        };
        ensure(got == expected, || format!("I({k}) = {got}"))?;
    }
    Ok(())
}

fn length_two_check(e: &Engine) -> CheckResult {
    let beta = |i: i64, j: i64| -> CoeffElem {
        if j < 0 || j % 2 == 1 {
            CoeffElem::zero()
        } else {
            length_one(j as u32).scale(&alpha(i))
        }
    };
    for k1 in 0..=6i64 {
        for k2 in 0..=6 - k1 {
            let mut p = EPoly::constant(gamma_two(k1 as u32, k2 as u32));
            let mut add = |w: i64, c: CoeffElem| {
                if w % 2 == 0 {
                    p = p.add(&EPoly::word(&[w as u32], c));
                }
            };
            add(k1 + 1, -beta(k1 + 1, k2));
            add(k2 + 1, beta(k2 + 1, k1));
            add(k1 + k2 + 1, beta(k1 + k2 + 1, 0).scale(&if k2 % 2 == 0 { int(-1) } else { int(1) }));
            for m in 0..=k1 + 1 {
                add(k1 - m + 1, beta(k1 - m + 1, m + k2).scale(&binomial(k2 + m - 1, m)));
            }
            for m in 0..=k2 + 1 {
                add(k2 - m + 1, -beta(k2 - m + 1, m + k1).scale(&binomial(k1 + m - 1, m)));
            }
            let got = decomp(e, &format!("{k1},{k2}"))?;
            ensure(got == p, || format!("I({k1},{k2}) = {got}, closed form {p}"))?;
        }
    }
    Ok(())
}

fn worked_decompositions(e: &Engine) -> CheckResult {
    expect_decomp(e, "3,0", "-pi*e(4) - 1/240*pi*e(0)")?;
    expect_decomp(e, "2,0,0", "1/72*pi^3 - 2*pi*e(0,4) - 1/120*pi*e(0,0)")?;
    expect_decomp(e, "0,2,0", "1/72*pi^3 + 4*pi*e(0,4) + 1/60*pi*e(0,0)")?;
    expect_decomp(e, "0,0,2", "1/72*pi^3 - 2*pi*e(0,4) - 1/120*pi*e(0,0)")?;
    expect_decomp(e, "0,1,0,0", "-3*pi*z3 + 6*pi*e(0,0,4) + 1/40*pi*e(0,0,0)")?;
    let g = e.gamma(&idx("0,1,0,0")).map_err(err)?;
    ensure(g == CoeffElem::parse("-3*pi*z3").unwrap(), || format!("gamma(0,1,0,0) = {g}"))
}

fn cross_path(e: &Engine) -> CheckResult {
    let g = e.gseries_decompose(4, 5).map_err(err)?;
    for (i, p) in &g {
        let d = e.decompose(i).map_err(err)?.epoly;
        ensure(&d == p, || format!("{i}: recursion {d}, generating series {p}"))?;
    }
    Ok(())
}

fn diffeq_check(e: &Engine) -> CheckResult {
    let n = 20;
    for i in EmzvIndex::all(3, 5) {
        let lhs = e.emzv_qexp(&i, n).map_err(err)?.ddt();
        let mut rhs = QTSeries::zero(n);
        for t in diffeq_expand(&i) {
            let f = e.emzv_qexp(&t.sub_index, n).map_err(err)?;
            let eis = eisenstein_qexp(t.eis_weight, n).scale(&t.coeff).to_coeff();
            rhs = rhs.add(&eis.mul_in(&f, e.table()).map_err(err)?);
        }
        ensure(lhs == rhs, || format!("{i}: d/dT = {lhs}, right-hand side {rhs}"))?;
    }
    Ok(())
}

fn fourier_check(e: &Engine) -> CheckResult {
    for i in EmzvIndex::all(4, 5) {
        let x = e.decompose(&i).map_err(err)?.epoly;
        let s = e.emzv_qexp(&i, 20).map_err(err)?;
        ensure(s.is_t_free(), || format!("{i} has T"))?;
        let (_, r) = to_e0_basis(&x);
        ensure(r.is_zero() == fourier_membership(&x, 20), || format!("{i}: criteria disagree"))?;
    }
    // deterministic pseudo-random polynomials
    let mut state = 0x2545f4914f6cdd1du64;
    let mut next = move |m: u64| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state % m
    };
    for _ in 0..100 {
        let mut x = EPoly::zero();
        for _ in 0..next(5) {
            let w: Vec<u32> = (0..next(4)).map(|_| [0, 4, 6][next(3) as usize]).collect();
            x.add_term(EWord::new(w).unwrap(), &CoeffElem::from_int(next(7) as i64 - 3));
        }
        let (_, r) = to_e0_basis(&x);
        ensure(r.is_zero() == fourier_membership(&x, 8), || format!("{x}: criteria disagree"))?;
    }
    Ok(())
}

fn shuffle_check(e: &Engine) -> CheckResult {
    let n = 20;
    let letters = [0u32, 2, 4, 6, 8];
    let words = |len: usize| -> Vec<Vec<u32>> {
        (0..letters.len().pow(len as u32))
            .map(|mut m| {
                (0..len)
                    .map(|_| {
                        let l = letters[m % letters.len()];
                        m /= letters.len();
                        l
                    })
                    .collect()
            })
            .collect()
    };
    for (lu, lv) in [(1, 1), (1, 2), (1, 3), (2, 2)] {
        for u in words(lu) {
            for v in words(lv) {
                let lhs = iei_qexp(&u, n).mul(&iei_qexp(&v, n)).to_coeff();
                let rhs = epoly_to_qexp(&shuffle_words(&EWord::new(u.clone()).unwrap(), &EWord::new(v.clone()).unwrap()), n);
                ensure(lhs == rhs, || format!("E{u:?} E{v:?}"))?;
            }
        }
    }
    for k1 in 0..=4u32 {
        for k2 in 0..=4 - k1 {
            let a = decomp(e, &k1.to_string())?;
            let b = decomp(e, &k2.to_string())?;
            let prod = epoly_mul(&a, &b, e.table()).map_err(err)?;
            let sum = decomp(e, &format!("{k1},{k2}"))?.add(&decomp(e, &format!("{k2},{k1}"))?);
            ensure(prod == sum, || format!("psi(I({k1})) psi(I({k2})) = {prod}, shuffle {sum}"))?;
        }
    }
    Ok(())
}

fn derivation_check(_: &Engine) -> CheckResult {
    let dl = 16;
    let (x0, y0) = eps_images(0);
    ensure(x0 == NCSeries::b(1) && y0.is_zero(), || "eps_0 is not y d/dx".into())?;
    // both sides are derivations, so agreement on the generators is enough
    let t = NCSeries::<Rational>::word(NCWord::parse("ab").unwrap(), int(1), dl)
        .sub(&NCSeries::word(NCWord::parse("ba").unwrap(), int(1), dl))
        .unwrap();
    let e2 = crate::derlie::EpsOperator::new(2, false).map_err(err)?;
    for g in [NCSeries::a(dl), NCSeries::b(dl)] {
        ensure(e2.apply_series(&g) == t.bracket(&g).unwrap().neg(), || "eps_2 != -ad([x,y])".into())?;
    }
    let xy = LieVec::x(dl).bracket(&LieVec::y(dl));
    for k in 0..=6 {
        ensure(eps_apply(2 * k, &xy).map_err(err)?.is_zero(), || format!("eps_{}([x,y]) != 0", 2 * k))?;
    }
    let one = vec![int(1)];
    for k in 0..=5u32 {
        let c = vec![LieExpr::bracket(LieExpr::Letter(2 * k), LieExpr::Letter(2))];
        for d in [dl, dl + 2] {
            let r = find_relations_among(&c, d).map_err(err)?;
            ensure(r.kernel == vec![one.clone()], || format!("[eps_{},eps_2]: {:?}", 2 * k, r.kernel))?;
        }
    }
    let c = vec![LieExpr::parse("[e10,e4]").unwrap(), LieExpr::parse("[e8,e6]").unwrap()];
    for d in [dl, dl + 2] {
        let r = find_relations_among(&c, d).map_err(err)?;
        ensure(r.kernel == vec![vec![int(1), int(-3)]], || format!("weight 14: {:?}", r.kernel))?;
    }
    let dims: Vec<usize> = (1..=8).map(free_lie_dim).collect();
    ensure(dims == [2, 1, 2, 3, 6, 9, 18, 30], || format!("free Lie dimensions {dims:?}"))
}

fn image_check(e: &Engine) -> CheckResult {
    for i in EmzvIndex::all(4, 5) {
        let x = e.decompose(&i).map_err(err)?.epoly.without_constant();
        let m = uu_dual_membership(&x, 16).map_err(err)?;
        ensure(m.values().all(|b| *b), || format!("{i}: not in the dual image {m:?}"))?;
        ensure(fourier_membership(&x, 20), || format!("{i}: not Fourier"))?;
    }
    let words: Vec<EWord> = [[10, 4], [4, 10], [8, 6], [6, 8]].iter().map(|w| EWord::new(w.to_vec()).unwrap()).collect();
    let ann = annihilator_in(&words, 16).map_err(err)?;
    ensure(ann.len() == 3, || format!("W intersection has dimension {}", ann.len()))?;
    let expected: Vec<Vec<Rational>> =
        [[1, 1, 0, 0], [0, 0, 1, 1], [3, 0, 1, 0]].iter().map(|r| r.iter().map(|&n| int(n)).collect()).collect();
    let rank = |rows: Vec<Vec<Rational>>| rref(&RatMatrix::from_rows(rows).unwrap()).2;
    ensure(rank([ann.clone(), expected.clone()].concat()) == 3 && rank(expected) == 3, || {
        "W intersection differs from span{e10 sh e4, e8 sh e6, 3 e10e4 + e8e6}".into()
    })
}

fn constant_term_check(e: &Engine) -> CheckResult {
    let n = 8;
    let table = e.table();
    let phi = build_phi(&NCSeries::a(n), &NCSeries::b(n), n, table).map_err(err)?;
    ensure(phi.is_group_like(table).map_err(err)?, || "Phi is not group-like".into())?;
    let d = build_d_derivation(n).map_err(err)?;
    let ainf = build_ainf(n, table).map_err(err)?;
    ensure(d.apply(&build_t(n)).is_zero(), || "D(t) != 0".into())?;
    ensure(d.apply(&build_ytilde(n)).is_zero(), || "D(y~) != 0".into())?;
    ensure(d.apply(&ainf).is_zero(), || "D(A_inf) != 0".into())?;
    let g = extract_gamma(&[2, 0, 0], &ainf).map_err(err)?;
    ensure(g == CoeffElem::pi_power(3).scale(&Rational::new(1.into(), 72.into())), || format!("gamma(2,0,0) = {g}"))?;
    for k1 in 0..=6u32 {
        for k2 in 0..=6 - k1 {
            let g = extract_gamma(&[k1, k2], &ainf).map_err(err)?;
            ensure(g == gamma_two(k1, k2), || format!("gamma({k1},{k2}) = {g}"))?;
        }
    }
    Ok(())
}

fn qexp_example(e: &Engine) -> CheckResult {
    let s = e.emzv_qexp(&idx("3,0"), 4).map_err(err)?;
    let pi = CoeffElem::pi_power(1);
    let mut expected = QTSeries::zero(4);
    for (m, c) in [(1, Rational::from_integer(1.into())), (2, Rational::new(9.into(), 2.into())), (3, Rational::new(28.into(), 3.into()))] {
        expected.add_term(m, 0, &pi.scale(&c));
    }
    ensure(s == expected, || format!("I(3,0) = {s}"))?;
    ensure(e.emzv_qexp(&idx("1,1"), 8).map_err(err)?.is_zero(), || "I(1,1) != 0".into())
}

fn emzv_relations(e: &Engine) -> CheckResult {
    let r = e.find_emzv_relations(&[idx("2,0,0"), idx("0,0,2")], &[]).map_err(err)?;
    ensure(r == vec![vec![int(1), int(-1)]], || format!("reflection: {r:?}"))?;
    let r = e.find_emzv_relations(&[idx("1")], &[]).map_err(err)?;
    ensure(r == vec![vec![int(1)]], || format!("I(1): {r:?}"))?;
    for k1 in 0..=6u32 {
        for k2 in (0..=6 - k1).filter(|k2| (k1 + k2) % 2 == 0) {
            let p = decomp(e, &format!("{k1},{k2}"))?;
            ensure(p.without_constant().is_zero(), || format!("I({k1},{k2}) is not constant"))?;
        }
    }
    Ok(())
}

fn membership_examples(_: &Engine) -> CheckResult {
    let all = |s: &str| uu_dual_membership(&ep(s), 16).map(|m| m.values().all(|b| *b)).map_err(err);
    ensure(!all("e(2,4) - e(4,2)")?, || "e2e4 - e4e2 accepted".into())?;
    ensure(all("e(2,4) + e(4,2)")?, || "e2 sh e4 rejected".into())?;
    ensure(all("3*e(10,4) + e(8,6)")?, || "3 e10e4 + e8e6 rejected".into())?;
    let (e0, r) = to_e0_basis(&ep("-2*e(0,4) - 1/120*e(0,0)"));
    ensure(r.is_zero() && e0.len() == 1, || "E0 rewrite of -2 e0e4 - e0e0/120".into())?;
    let (_, r) = to_e0_basis(&ep("6*e(0,0,4) + 1/40*e(0,0,0)"));
    ensure(r.is_zero(), || "E0 rewrite of 6 e0e0e4 + e0e0e0/40".into())?;
    ensure(!fourier_membership(&ep("e(0)"), 8), || "e0 accepted as Fourier".into())
}

/// Every check, in a fixed order. The first ten are the acceptance criteria.
pub fn checks() -> Vec<Check> {
    vec![
        Check { id: "1", title: "length-one values", run: length_one_check },
        Check { id: "2", title: "length-two closed form", run: length_two_check },
        Check { id: "3", title: "worked decompositions", run: worked_decompositions },
        Check { id: "4", title: "recursion = generating series", run: cross_path },
        Check { id: "5", title: "differential equation", run: diffeq_check },
        Check { id: "6", title: "Fourier property", run: fourier_check },
        Check { id: "7", title: "shuffle identities", run: shuffle_check },
        Check { id: "8", title: "derivation algebra", run: derivation_check },
        Check { id: "9", title: "image constraints", run: image_check },
        Check { id: "10", title: "associator and constant terms", run: constant_term_check },
        Check { id: "qexp", title: "q-expansions of I(3,0), I(1,1)", run: qexp_example },
        Check { id: "relations", title: "reflection, I(1) = 0, length parity", run: emzv_relations },
        Check { id: "membership", title: "dual-image and E0 examples", run: membership_examples },
    ]
}

/// Runs the checks on worker threads; results come back in registry order.
pub fn run(table: &MzvTable, only: Option<&[String]>) -> Vec<Outcome> {
    let engine = Engine::new(table.clone());
    let selected: Vec<Check> =
        checks().into_iter().filter(|c| only.is_none_or(|ids| ids.iter().any(|i| i == c.id))).collect();
    thread::scope(|s| {
        let handles: Vec<_> = selected.iter().map(|c| s.spawn(|| (c.run)(&engine))).collect();
        selected
            .iter()
            .zip(handles)
            .map(|(c, h)| {
                let r = h.join().unwrap_or_else(|_| Err("check panicked".into()));
                Outcome { id: c.id, title: c.title, passed: r.is_ok(), detail: r.err().unwrap_or_default() }
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_checks_pass() {
        let ids: Vec<String> = ["1", "2", "3", "qexp", "relations", "membership"].iter().map(|s| s.to_string()).collect();
        for o in run(&MzvTable::shipped(), Some(&ids)) {
            assert!(o.passed, "{} {}: {}", o.id, o.title, o.detail);
        }
    }

    #[test]
    fn gamma_two_table() {
        assert!(gamma_two(1, 1).is_zero());
        assert_eq!(gamma_two(2, 2), CoeffElem::parse("1/288*pi^2").unwrap());
        assert_eq!(gamma_two(0, 2), CoeffElem::parse("1/24*pi^2").unwrap());
    }
}
