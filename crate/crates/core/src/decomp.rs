//! Decomposition of A-elliptic MZVs `I(k_1, ..., k_n)` into iterated
//! Eisenstein integrals, along two independent routes: the recursion in the
//! length from the tau-differential equation, and the action of the
//! derivations `eps~_2k` on the constant-term series `A_inf`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::coeffring::{bernoulli, binomial, factorial, int, CoeffElem, MzvMonomial, MzvTable, Rational};
use crate::derlie::EpsOperator;
use crate::eisalg::{epoly_to_qexp, EPoly, EWord};
use crate::linalg::{kernel_basis, primitive_vector, RatMatrix};
use crate::ncalg::{build_ainf, extract_gamma, gamma_basis, index_degree, NCSeries};
use crate::qseries::{QTSeries, DEFAULT_ORDER};
use crate::Error;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EmzvIndex(Vec<u32>);

impl EmzvIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        EmzvIndex(entries)
    }

    /// Parses `"0,1,0,0"`; the empty string is the empty index.
    pub fn parse(s: &str) -> crate::Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.trim().is_empty() {
            return Ok(EmzvIndex(vec![]));
        }
        s.split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad index entry {p:?}"))))
            .collect::<crate::Result<_>>()
            .map(EmzvIndex)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Degree of the matching coefficient of `A_inf`: `sum (k_i + 1)`.
    pub fn degree(&self) -> usize {
        index_degree(&self.0)
    }

    /// All indices with length `<= max_len` and weight `<= max_wt`.
    pub fn all(max_len: usize, max_wt: u32) -> Vec<EmzvIndex> {
        let mut out = vec![EmzvIndex(vec![])];
        let mut frontier = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for idx in &frontier {
                let w: u32 = idx.iter().sum();
                for k in 0..=max_wt - w {
                    let mut v: Vec<u32> = idx.clone();
                    v.push(k);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned().map(EmzvIndex));
            frontier = next;
        }
        out
    }
}

impl fmt::Display for EmzvIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for EmzvIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `coeff * E_{eis_weight} * I(sub)`, one term of the right-hand side of
/// `(1/2 pi i) d/dtau I(idx)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffTerm {
    pub eis_weight: u32,
    pub sub_index: EmzvIndex,
    pub coeff: Rational,
}

/// `alpha_0 = -1`, `alpha_1 = 0`, `alpha_n = 2/(n-2)!`.
pub fn alpha(n: i64) -> Rational {
    match n {
        0 => -Rational::one(),
        1 => Rational::zero(),
        n if n >= 2 => Rational::new(2.into(), factorial(n as u32 - 2)),
        _ => Rational::zero(),
    }
}

/// The terms of the differential equation, like terms combined; odd
/// Eisenstein weights and vanishing `alpha` are dropped.
pub fn diffeq_expand(idx: &EmzvIndex) -> Vec<DiffTerm> {
    let k: Vec<i64> = idx.0.iter().map(|&x| x as i64).collect();
    let n = k.len();
    let mut acc: BTreeMap<(u32, Vec<u32>), Rational> = BTreeMap::new();
    let mut push = |w: i64, sub: Vec<i64>, c: Rational| {
        if w < 0 || w % 2 == 1 || c.is_zero() {
            return;
        }
        let c = c * alpha(w);
        if c.is_zero() {
            return;
        }
        let sub = sub.into_iter().map(|x| x as u32).collect();
        *acc.entry((w as u32, sub)).or_default() += c;
    };
    if n == 0 {
        return vec![];
    }
    push(k[0] + 1, k[1..].to_vec(), Rational::one());
    push(k[n - 1] + 1, k[..n - 1].to_vec(), -Rational::one());
    for i in 1..n {
        let (kp, ki) = (k[i - 1], k[i]);
        let with = |mid: i64| [&k[..i - 1], &[mid], &k[i + 1..]].concat();
        let sign = if ki % 2 == 0 { int(1) } else { int(-1) };
        push(kp + ki + 1, with(0), sign);
        for m in 0..=kp + 1 {
            push(kp - m + 1, with(m + ki), -binomial(ki + m - 1, m));
        }
        for m in 0..=ki + 1 {
            push(ki - m + 1, with(m + kp), binomial(kp + m - 1, m));
        }
    }
    acc.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((w, sub), coeff)| DiffTerm { eis_weight: w, sub_index: EmzvIndex(sub), coeff })
        .collect()
}

/// `psi(I(idx))` together with its constant term.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub index: EmzvIndex,
    pub epoly: EPoly,
    pub gamma: CoeffElem,
    /// Degree of `A_inf` used for the constant terms.
    pub nc_degree: usize,
}

/// Holds the MZV table and caches `A_inf` and finished decompositions.
pub struct Engine {
    table: MzvTable,
    order: usize,
    ainf: Mutex<Option<Arc<NCSeries>>>,
    memo: Mutex<HashMap<EmzvIndex, EPoly>>,
}

impl Engine {
    pub fn new(table: MzvTable) -> Self {
        Engine { table, order: DEFAULT_ORDER, ainf: Mutex::new(None), memo: Mutex::new(HashMap::new()) }
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn table(&self) -> &MzvTable {
        &self.table
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `A_inf` truncated at degree `>= degree`, reusing a larger cached one.
    pub fn ainf(&self, degree: usize) -> crate::Result<Arc<NCSeries>> {
        let mut slot = self.ainf.lock().unwrap();
        if let Some(a) = slot.as_ref().filter(|a| a.maxdeg() >= degree) {
            return Ok(a.clone());
        }
        let a = Arc::new(build_ainf(degree.max(1), &self.table)?);
        *slot = Some(a.clone());
        Ok(a)
    }

    /// The constant term `lim_{tau -> i oo} I(idx)`.
    pub fn gamma(&self, idx: &EmzvIndex) -> crate::Result<CoeffElem> {
        if idx.len() >= 2 {
            self.check_bounds(idx.degree())?;
        }
        match idx.len() {
            0 => Ok(CoeffElem::one()),
            1 => Ok(self.psi(idx)?.constant_term()),
            _ => extract_gamma(idx.entries(), &*self.ainf(idx.degree())?),
        }
    }

    pub fn decompose(&self, idx: &EmzvIndex) -> crate::Result<Decomposition> {
        let epoly = self.psi(idx)?;
        Ok(Decomposition { index: idx.clone(), gamma: epoly.constant_term(), epoly, nc_degree: idx.degree() })
    }

    /// The constants of `I(idx)` involve MZVs up to weight `degree - 1`;
    /// the table must reach that far even when no symbol ends up needed.
    fn check_bounds(&self, degree: usize) -> crate::Result<()> {
        let needed = degree.saturating_sub(1) as u32;
        if needed > self.table.max_weight() {
            return Err(Error::TableOverflow { needed, max_weight: self.table.max_weight() });
        }
        Ok(())
    }

    fn psi(&self, idx: &EmzvIndex) -> crate::Result<EPoly> {
        match idx.entries() {
            [] => {}
            // closed form, independent of the table
            [k] if *k > LENGTH_ONE_LIMIT => {
                return Err(Error::TableOverflow { needed: *k, max_weight: LENGTH_ONE_LIMIT });
            }
            [_] => {}
            _ => self.check_bounds(idx.degree())?,
        }
        if let Some(p) = self.memo.lock().unwrap().get(idx) {
            return Ok(p.clone());
        }
        let p = match idx.entries() {
            [] => EPoly::one(),
            [k] => EPoly::constant(length_one(*k)),
            _ => {
                let mut p = EPoly::constant(self.gamma(idx)?);
                for t in diffeq_expand(idx) {
                    p = p.add(&integrate_term(&t, &self.psi(&t.sub_index)?));
                }
                p
            }
        };
        self.memo.lock().unwrap().insert(idx.clone(), p.clone());
        Ok(p)
    }

    /// q-expansion of `I(idx)`; any surviving `T` is an error.
    pub fn emzv_qexp(&self, idx: &EmzvIndex, order: usize) -> crate::Result<QTSeries> {
        let s = epoly_to_qexp(&self.psi(idx)?, order);
        if !s.is_t_free() {
            return Err(Error::FourierViolation(format!("{idx} has T-terms: {}", s.t_part())));
        }
        Ok(s)
    }

    /// Rational relations `sum_i v_i I(idx_i) + sum_j w_j c_j = 0`, where the
    /// `c_j` are extra constants adjoined as further columns.
    pub fn find_emzv_relations(&self, indices: &[EmzvIndex], adjoin: &[CoeffElem]) -> crate::Result<Vec<Vec<Rational>>> {
        let mut cols: Vec<EPoly> = Vec::new();
        for idx in indices {
            cols.push(self.psi(idx)?);
        }
        cols.extend(adjoin.iter().map(|c| EPoly::constant(c.clone())));
        if cols.is_empty() {
            return Ok(vec![]);
        }
        let mut rows: BTreeMap<(EWord, MzvMonomial), Vec<Rational>> = BTreeMap::new();
        for (j, p) in cols.iter().enumerate() {
            for (key, c) in crate::eisalg::coordinates(p) {
                rows.entry(key).or_insert_with(|| vec![Rational::zero(); cols.len()])[j] = c;
            }
        }
        if rows.is_empty() {
            return Ok((0..cols.len())
                .map(|j| (0..cols.len()).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect())
                .collect());
        }
        Ok(kernel_basis(&RatMatrix::from_rows(rows.into_values().collect())?).iter().map(|v| primitive_vector(v)).collect())
    }

    /// `psi` for every index with length `<= max_len` and weight `<= max_wt`,
    /// read off from `sum_w e_w (eps~_w A_inf)`.
    pub fn gseries_decompose(&self, max_len: usize, max_wt: u32) -> crate::Result<BTreeMap<EmzvIndex, EPoly>> {
        let degree = max_len + max_wt as usize;
        self.check_bounds(degree)?;
        let ainf = self.ainf(degree)?.truncate(degree);
        let ops: Vec<EpsOperator> =
            (0..degree as u32).step_by(2).map(|k| EpsOperator::new(k, true)).collect::<crate::Result<_>>()?;
        let mut out: BTreeMap<EmzvIndex, EPoly> =
            EmzvIndex::all(max_len, max_wt).into_iter().map(|i| (i, EPoly::zero())).collect();
        // word e_{k_1} ... e_{k_n} carries eps~_{k_1} o ... o eps~_{k_n} (A_inf)
        let mut stack = vec![(Vec::<u32>::new(), ainf)];
        while let Some((word, s)) = stack.pop() {
            let w = EWord::new(word.clone()).expect("even letters");
            for d in 1..=degree {
                let part = s.degree_part(d);
                if part.is_zero() {
                    continue;
                }
                for (idx, g) in gamma_basis(d).gammas(&part)? {
                    if let Some(p) = out.get_mut(&EmzvIndex(idx)) {
                        p.add_term(w.clone(), &g);
                    }
                }
            }
            if let Some(p) = out.get_mut(&EmzvIndex(vec![])) {
                p.add_term(w.clone(), &s.constant());
            }
            for op in &ops {
                let next = op.apply_series(&s);
                if !next.is_zero() {
                    let mut nw = vec![op.index()];
                    nw.extend(&word);
                    stack.push((nw, next));
                }
            }
        }
        Ok(out)
    }
}

/// Largest `k` for which `I(k)` is evaluated.
pub const LENGTH_ONE_LIMIT: u32 = 64;

/// `psi(I(k)) = 2 pi i B_k / k!` (zero for odd `k`).
pub fn length_one(k: u32) -> CoeffElem {
    if k % 2 == 1 {
        return CoeffElem::zero();
    }
    CoeffElem::pi_power(1).scale(&(bernoulli(k as usize) / Rational::from_integer(factorial(k))))
}

/// A primitive of `coeff * E_l * F` in the iterated-integral convention
/// `d/dT E(l w) = -E_l E(w)`, so `F = psi(sub)` becomes `-coeff * e_l F`.
pub fn integrate_term(t: &DiffTerm, sub: &EPoly) -> EPoly {
    sub.prepend(t.eis_weight).scale(&-t.coeff.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rat;

    fn engine() -> Engine {
        Engine::new(MzvTable::shipped())
    }

    fn idx(s: &str) -> EmzvIndex {
        EmzvIndex::parse(s).unwrap()
    }

    fn ep(s: &str) -> EPoly {
        EPoly::parse(s).unwrap()
    }

    #[test]
    fn index_parsing() {
        assert_eq!(idx("0,1,0,0").entries(), &[0, 1, 0, 0]);
        assert_eq!(idx("(2,0,0)").to_string(), "(2,0,0)");
        assert!(idx("").is_empty());
        assert!(EmzvIndex::parse("1,x").is_err());
        assert_eq!(EmzvIndex::all(2, 1).len(), 1 + 2 + 3);
    }

    #[test]
    fn diffeq_examples() {
        let t = diffeq_expand(&idx("2,0,0"));
        assert_eq!(t, vec![DiffTerm { eis_weight: 0, sub_index: idx("3,0"), coeff: int(-2) }]);
        // I(0,2,0) - I(2,0,0) through E_0 = -1; equals I(0,2,0) - I(0,0,2) by reflection
        let t = diffeq_expand(&idx("0,1,0,0"));
        assert_eq!(
            t,
            vec![
                DiffTerm { eis_weight: 0, sub_index: idx("0,2,0"), coeff: int(-1) },
                DiffTerm { eis_weight: 0, sub_index: idx("2,0,0"), coeff: int(1) },
            ]
        );
        for k in 0..6 {
            assert!(diffeq_expand(&EmzvIndex::new(vec![k])).is_empty());
        }
    }

    #[test]
    fn length_one_values() {
        let e = engine();
        assert_eq!(e.decompose(&idx("2")).unwrap().epoly, ep("1/12*pi"));
        assert!(e.decompose(&idx("3")).unwrap().epoly.is_zero());
        assert_eq!(e.decompose(&idx("0")).unwrap().epoly, ep("pi"));
        assert_eq!(e.decompose(&idx("")).unwrap().epoly, EPoly::one());
    }

    #[test]
    fn worked_decompositions() {
        let e = engine();
        assert_eq!(e.decompose(&idx("3,0")).unwrap().epoly, ep("-pi*e(4) - 1/240*pi*e(0)"));
        assert_eq!(
            e.decompose(&idx("2,0,0")).unwrap().epoly,
            ep("1/72*pi^3 - 2*pi*e(0,4) - 1/120*pi*e(0,0)")
        );
        assert_eq!(e.decompose(&idx("0,2,0")).unwrap().epoly, ep("1/72*pi^3 + 4*pi*e(0,4) + 1/60*pi*e(0,0)"));
        assert_eq!(e.decompose(&idx("0,0,2")).unwrap().epoly, e.decompose(&idx("2,0,0")).unwrap().epoly);
        let d = e.decompose(&idx("0,1,0,0")).unwrap();
        assert_eq!(d.epoly, ep("-3*pi*z3 + 6*pi*e(0,0,4) + 1/40*pi*e(0,0,0)"));
        assert_eq!(d.gamma, CoeffElem::parse("-3*pi*z3").unwrap());
    }

    #[test]
    fn qexp_examples() {
        let e = engine();
        let s = e.emzv_qexp(&idx("3,0"), 4).unwrap();
        let pi = CoeffElem::pi_power(1);
        let mut expected = QTSeries::zero(4);
        for (m, c) in [(1, rat(1, 1)), (2, rat(9, 2)), (3, rat(28, 3))] {
            expected.add_term(m, 0, &pi.scale(&c));
        }
        assert_eq!(s, expected);
        assert!(e.emzv_qexp(&idx("1,1"), 6).unwrap().is_zero());
        assert_eq!(e.emzv_qexp(&idx("4"), 6).unwrap(), QTSeries::constant(length_one(4), 6));
    }

    #[test]
    fn relations() {
        let e = engine();
        let r = e.find_emzv_relations(&[idx("2,0,0"), idx("0,0,2")], &[]).unwrap();
        assert_eq!(r, vec![vec![int(1), int(-1)]]);
        assert_eq!(e.find_emzv_relations(&[idx("1")], &[]).unwrap(), vec![vec![int(1)]]);
        let r = e
            .find_emzv_relations(&[idx("0,4"), idx("4,0"), idx("2,2")], &[CoeffElem::pi_power(2)])
            .unwrap();
        assert_eq!(r.len(), 3);
        // each one alone is a rational multiple of pi^2
        for i in ["0,4", "4,0", "2,2"] {
            let r = e.find_emzv_relations(&[idx(i)], &[CoeffElem::pi_power(2)]).unwrap();
            assert_eq!(r.len(), 1);
            assert!(r[0].iter().all(|c| !c.is_zero()), "{i}");
        }
    }

    #[test]
    fn length_parity() {
        let e = engine();
        for k1 in 0..=6u32 {
            for k2 in 0..=6 - k1 {
                if (k1 + k2) % 2 == 0 {
                    let p = e.decompose(&EmzvIndex::new(vec![k1, k2])).unwrap().epoly;
                    assert!(p.without_constant().is_zero(), "({k1},{k2})");
                }
            }
        }
    }

    fn beta(i: i64, j: i64) -> CoeffElem {
        if j % 2 == 1 || j < 0 {
            return CoeffElem::zero();
        }
        length_one(j as u32).scale(&alpha(i))
    }

    #[test]
    fn length_two_closed_form() {
        let e = engine();
        for k1 in 0..=6i64 {
            for k2 in 0..=6 - k1 {
                let i = EmzvIndex::new(vec![k1 as u32, k2 as u32]);
                let mut p = EPoly::constant(e.gamma(&i).unwrap());
                let mut add = |w: i64, c: CoeffElem| {
                    if w % 2 == 0 {
                        p = p.add(&EPoly::word(&[w as u32], c));
                    }
                };
                add(k1 + 1, -beta(k1 + 1, k2));
                add(k2 + 1, beta(k2 + 1, k1));
                let sign = if k2 % 2 == 0 { int(-1) } else { int(1) };
                add(k1 + k2 + 1, beta(k1 + k2 + 1, 0).scale(&sign));
                for m in 0..=k1 + 1 {
                    add(k1 - m + 1, beta(k1 - m + 1, m + k2).scale(&binomial(k2 + m - 1, m)));
                }
                for m in 0..=k2 + 1 {
                    add(k2 - m + 1, -beta(k2 - m + 1, m + k1).scale(&binomial(k1 + m - 1, m)));
                }
                assert_eq!(e.decompose(&i).unwrap().epoly, p, "{i}");
            }
        }
    }

    #[test]
    fn two_paths_agree() {
        let e = engine();
        let g = e.gseries_decompose(3, 3).unwrap();
        for (i, p) in &g {
            assert_eq!(&e.decompose(i).unwrap().epoly, p, "{i}");
        }
    }

    #[test]
    fn index_beyond_table() {
        let e = engine();
        assert!(matches!(e.decompose(&idx("9999")), Err(Error::TableOverflow { needed: 9999, .. })));
        assert!(e.decompose(&idx("12")).is_ok());
        assert!(matches!(e.decompose(&idx("4,4")), Err(Error::TableOverflow { needed: 9, .. })));
        assert!(e.gseries_decompose(5, 5).is_err());
    }

    #[test]
    fn table_too_small() {
        let doc = "version = 1\nmax_weight = 2\n[single_zeta]\n\"2\" = \"-1/24*pi^2\"\n[convergent_words]\nAB = \"-1/24*pi^2\"\n";
        let e = Engine::new(MzvTable::parse(doc).unwrap());
        assert!(e.decompose(&idx("1,0")).is_ok());
        assert!(matches!(e.decompose(&idx("0,1,0,0")), Err(Error::TableOverflow { needed: 4, max_weight: 2 })));
    }
}
