use std::collections::HashMap;

use super::{ad_pow, BinWord, NCSeries};
use crate::coeffring::{bernoulli, factorial, CoeffElem, MzvTable, Rational};
use crate::Error;

/// Shuffle-regularized MZVs of arbitrary binary words (`Z(A) = Z(B) = 0`),
/// memoized per instance.
pub struct Regularizer<'t> {
    table: &'t MzvTable,
    memo: HashMap<BinWord, CoeffElem>,
}

impl<'t> Regularizer<'t> {
    pub fn new(table: &'t MzvTable) -> Self {
        Regularizer { table, memo: HashMap::new() }
    }

    pub fn value(&mut self, w: &BinWord) -> crate::Result<CoeffElem> {
        if let Some(v) = self.memo.get(w) {
            return Ok(v.clone());
        }
        let v = self.compute(w)?;
        self.memo.insert(w.clone(), v.clone());
        Ok(v)
    }

    fn compute(&mut self, w: &BinWord) -> crate::Result<CoeffElem> {
        let l = w.letters();
        if l.is_empty() {
            return Ok(CoeffElem::one());
        }
        if l.iter().all(|&x| x) || l.iter().all(|&x| !x) {
            return Ok(CoeffElem::zero());
        }
        if w.len() as u32 > self.table.max_weight() {
            return Err(Error::TableOverflow { needed: w.len() as u32, max_weight: self.table.max_weight() });
        }
        if l[0] {
            // w = B^r v:  r Z(w) = -sum over the other ways of shuffling one B into v
            let r = l.iter().take_while(|&&x| x).count();
            let v = &l[r..];
            let mut acc = CoeffElem::zero();
            for i in 1..=v.len() {
                let mut u = vec![true; r - 1];
                u.extend_from_slice(&v[..i]);
                u.push(true);
                u.extend_from_slice(&v[i..]);
                acc += &self.value(&BinWord::new(u))?;
            }
            return Ok(acc.scale(&-crate::rat(1, r as i64)));
        }
        if !l[l.len() - 1] {
            // w = v A^s
            let s = l.iter().rev().take_while(|&&x| !x).count();
            let v = &l[..l.len() - s];
            let mut acc = CoeffElem::zero();
            for i in 0..v.len() {
                let mut u = v[..i].to_vec();
                u.push(false);
                u.extend_from_slice(&v[i..]);
                u.extend(std::iter::repeat_n(false, s - 1));
                acc += &self.value(&BinWord::new(u))?;
            }
            return Ok(acc.scale(&-crate::rat(1, s as i64)));
        }
        self.table.convergent(w)
    }
}

pub fn shuffle_regularize(w: &BinWord, table: &MzvTable) -> crate::Result<CoeffElem> {
    Regularizer::new(table).value(w)
}

/// `t = -[a,b]`.
pub fn build_t(maxdeg: usize) -> NCSeries<Rational> {
    ad_pow::<Rational>(1, maxdeg).neg()
}

/// `-sum_{n<D} B_n/n! ad^n(a)(b)`.
pub fn build_ytilde(maxdeg: usize) -> NCSeries<Rational> {
    let mut s = NCSeries::zero(maxdeg);
    for n in 0..maxdeg {
        let c = -bernoulli(n) / Rational::from_integer(factorial(n as u32));
        for (w, r) in ad_pow::<Rational>(n, maxdeg).iter() {
            s.add_term(*w, &(r * &c));
        }
    }
    s
}

/// `Phi(X, Y) = sum_w (-1)^{#B} Z(w) w(X, Y)` with `A -> X`, `B -> Y`;
/// with this choice `Phi = 1 - zeta(2) [X, Y] + ...`.
pub fn build_phi(x: &NCSeries, y: &NCSeries, maxdeg: usize, table: &MzvTable) -> crate::Result<NCSeries> {
    if !x.constant().is_zero() || !y.constant().is_zero() {
        return Err(Error::PreconditionViolated("associator arguments need zero constant term".into()));
    }
    let (x, y) = (x.truncate(maxdeg), y.truncate(maxdeg));
    let mut out = NCSeries::one(maxdeg);
    let (Some(dx), Some(dy)) = (x.min_degree(), y.min_degree()) else {
        // Phi(X, 0) = Phi(0, Y) = 1 since Z(A^n) = Z(B^n) = 0
        return Ok(out);
    };
    let mut reg = Regularizer::new(table);
    // depth-first over words, carrying the substituted product
    let mut stack = vec![(Vec::<bool>::new(), NCSeries::one(maxdeg), 0usize)];
    while let Some((word, prod, deg)) = stack.pop() {
        if !word.is_empty() {
            let w = BinWord::new(word.clone());
            let z = reg.value(&w)?;
            if !z.is_zero() {
                let z = if w.count_b() % 2 == 1 { -z } else { z };
                out = out.add(&prod.scale_by(&z))?;
            }
        }
        for (letter, s, d) in [(false, &x, dx), (true, &y, dy)] {
            if deg + d <= maxdeg {
                let mut next = word.clone();
                next.push(letter);
                stack.push((next, prod.mul(s)?, deg + d));
            }
        }
    }
    Ok(out)
}

/// `e^{pi i t} Phi(y~, t) e^{2 pi i y~} Phi(y~, t)^{-1}` with `2 pi i = pi`.
pub fn build_ainf(maxdeg: usize, table: &MzvTable) -> crate::Result<NCSeries> {
    if maxdeg == 0 {
        return Err(Error::PreconditionViolated("A_inf needs degree >= 1".into()));
    }
    // the degree-d part involves MZVs of weight up to d - 1
    if maxdeg as u32 > table.max_weight() + 1 {
        return Err(Error::TableOverflow { needed: maxdeg as u32 - 1, max_weight: table.max_weight() });
    }
    let t = build_t(maxdeg).to_coeff();
    let yt = build_ytilde(maxdeg).to_coeff();
    let phi = build_phi(&yt, &t, maxdeg, table)?;
    let half_pi = CoeffElem::pi_power(1).scale(&crate::rat(1, 2));
    let left = t.scale_by(&half_pi).exp()?;
    let mid = yt.scale_by(&CoeffElem::pi_power(1)).exp()?;
    let a = left.mul(&phi)?.mul(&mid)?.mul(&phi.inv()?)?;
    a.normalize(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{int, rat};
    use crate::ncalg::NCWord;

    fn bw(s: &str) -> BinWord {
        BinWord::parse(s).unwrap()
    }

    #[test]
    fn regularization_examples() {
        let t = MzvTable::shipped();
        assert!(shuffle_regularize(&bw("A"), &t).unwrap().is_zero());
        assert!(shuffle_regularize(&bw("B"), &t).unwrap().is_zero());
        assert_eq!(shuffle_regularize(&bw("AB"), &t).unwrap(), t.zeta(2).unwrap());
        // B sh AB = BAB + 2 ABB, and Z(B) = 0
        let bab = shuffle_regularize(&bw("BAB"), &t).unwrap();
        let abb = shuffle_regularize(&bw("ABB"), &t).unwrap();
        assert!((&bab + &abb.scale(&int(2))).is_zero());
        assert_eq!(abb, t.zeta(3).unwrap());
        // AB sh A = 2 AAB + ABA
        let aba = shuffle_regularize(&bw("ABA"), &t).unwrap();
        let aab = shuffle_regularize(&bw("AAB"), &t).unwrap();
        assert!((&aba + &aab.scale(&int(2))).is_zero());
    }

    #[test]
    fn regularization_is_shuffle_character() {
        let t = MzvTable::shipped();
        let mut reg = Regularizer::new(&t);
        let words: Vec<BinWord> = (1..=3)
            .flat_map(|n| (0..1u32 << n).map(move |m| BinWord::new((0..n).map(|i| (m >> i) & 1 == 1).collect())))
            .collect();
        for u in &words {
            for v in &words {
                if u.len() + v.len() > 6 {
                    continue;
                }
                let mut sum = CoeffElem::zero();
                for s in shuffles(u.letters(), v.letters()) {
                    sum += &reg.value(&BinWord::new(s)).unwrap();
                }
                let prod = &reg.value(u).unwrap() * &reg.value(v).unwrap();
                assert_eq!(sum, prod, "{u} sh {v}");
            }
        }
    }

    fn shuffles(u: &[bool], v: &[bool]) -> Vec<Vec<bool>> {
        if u.is_empty() || v.is_empty() {
            return vec![[u, v].concat()];
        }
        let mut out = Vec::new();
        for mut s in shuffles(&u[1..], v) {
            s.insert(0, u[0]);
            out.push(s);
        }
        for mut s in shuffles(u, &v[1..]) {
            s.insert(0, v[0]);
            out.push(s);
        }
        out
    }

    #[test]
    fn ytilde_low_degrees() {
        let y = build_ytilde(3);
        let b = NCSeries::<Rational>::b(3);
        assert_eq!(y.degree_part(1), b.neg());
        assert_eq!(y.degree_part(2), ad_pow::<Rational>(1, 3).scale(&rat(1, 2)));
        assert_eq!(y.degree_part(3), ad_pow::<Rational>(2, 3).scale(&rat(-1, 12)));
    }

    #[test]
    fn phi_low_degree() {
        let t = MzvTable::shipped();
        let (a, b) = (NCSeries::a(4), NCSeries::b(4));
        let phi = build_phi(&a, &b, 4, &t).unwrap();
        assert_eq!(phi.constant(), CoeffElem::one());
        let ab = phi.coeff(NCWord::parse("ab").unwrap());
        let ba = phi.coeff(NCWord::parse("ba").unwrap());
        assert_eq!(&ab - &ba, -t.zeta(2).unwrap().scale(&int(2)));
        assert_eq!(build_phi(&NCSeries::zero(4), &NCSeries::zero(4), 4, &t).unwrap(), NCSeries::one(4));
        assert!(phi.is_group_like(&t).unwrap());
    }

    #[test]
    fn ainf_low_degree() {
        let t = MzvTable::shipped();
        let a = build_ainf(3, &t).unwrap();
        assert_eq!(a.constant(), CoeffElem::one());
        assert_eq!(a.coeff(NCWord::B), -CoeffElem::pi_power(1));
        assert_eq!(a.coeff(NCWord::A), CoeffElem::zero());
    }
}
