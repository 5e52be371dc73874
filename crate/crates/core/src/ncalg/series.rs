use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use super::NCWord;
use crate::coeffring::{binomial, int, Coeff, CoeffElem, MzvTable, Rational};
use crate::Error;

/// Noncommutative series in `a`, `b`, truncated above degree `maxdeg`.
#[derive(Clone, PartialEq)]
pub struct NCSeries<C: Coeff = CoeffElem> {
    maxdeg: usize,
    coeffs: BTreeMap<NCWord, C>,
}

impl<C: Coeff> NCSeries<C> {
    pub fn zero(maxdeg: usize) -> Self {
        assert!(maxdeg <= super::MAX_WORD_LEN, "degree bound {maxdeg} too large");
        NCSeries { maxdeg, coeffs: BTreeMap::new() }
    }

    pub fn one(maxdeg: usize) -> Self {
        Self::word(NCWord::EMPTY, C::unit(), maxdeg)
    }

    pub fn word(w: NCWord, c: C, maxdeg: usize) -> Self {
        let mut s = Self::zero(maxdeg);
        s.add_term(w, &c);
        s
    }

    pub fn a(maxdeg: usize) -> Self {
        Self::word(NCWord::A, C::unit(), maxdeg)
    }

    pub fn b(maxdeg: usize) -> Self {
        Self::word(NCWord::B, C::unit(), maxdeg)
    }

    pub fn maxdeg(&self) -> usize {
        self.maxdeg
    }

    pub fn coeff(&self, w: NCWord) -> C {
        self.coeffs.get(&w).cloned().unwrap_or_else(C::nil)
    }

    pub fn constant(&self) -> C {
        self.coeff(NCWord::EMPTY)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NCWord, &C)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest degree present.
    pub fn min_degree(&self) -> Option<usize> {
        self.coeffs.keys().next().map(|w| w.len())
    }

    pub fn add_term(&mut self, w: NCWord, c: &C) {
        if w.len() > self.maxdeg || c.is_nil() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                e.get_mut().add_ref(c);
                if e.get().is_nil() {
                    e.remove();
                }
            }
        }
    }

    /// The homogeneous part of degree `d`.
    pub fn degree_part(&self, d: usize) -> Self {
        let mut s = Self::zero(self.maxdeg);
        for (w, c) in self.coeffs.range(NCWord::from_bits(d, 0)..) {
            if w.len() != d {
                break;
            }
            s.add_term(*w, c);
        }
        s
    }

    pub fn truncate(&self, maxdeg: usize) -> Self {
        let mut s = Self::zero(maxdeg);
        for (w, c) in &self.coeffs {
            s.add_term(*w, c);
        }
        s
    }

    fn check(&self, other: &Self) -> crate::Result<()> {
        if self.maxdeg != other.maxdeg {
            return Err(Error::DegreeMismatch(self.maxdeg, other.maxdeg));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> crate::Result<Self> {
        self.check(other)?;
        let mut s = self.clone();
        for (w, c) in &other.coeffs {
            s.add_term(*w, c);
        }
        Ok(s)
    }

    pub fn sub(&self, other: &Self) -> crate::Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg_ref())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map(|c| c.scale(r))
    }

    /// Multiplies every coefficient by the scalar `c`.
    pub fn scale_by(&self, c: &C) -> Self {
        self.map(|x| x.mul_ref(c))
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> NCSeries<D> {
        let mut s = NCSeries::zero(self.maxdeg);
        for (w, c) in &self.coeffs {
            s.add_term(*w, &f(c));
        }
        s
    }

    /// Concatenation product truncated at `maxdeg`.
    pub fn mul(&self, other: &Self) -> crate::Result<Self> {
        self.check(other)?;
        let mut by_deg: Vec<Vec<(&NCWord, &C)>> = vec![Vec::new(); self.maxdeg + 1];
        for (w, c) in &other.coeffs {
            by_deg[w.len()].push((w, c));
        }
        let mut s = Self::zero(self.maxdeg);
        for (u, a) in &self.coeffs {
            for bucket in &by_deg[..=self.maxdeg - u.len()] {
                for (v, b) in bucket {
                    s.add_term(u.concat(**v), &a.mul_ref(b));
                }
            }
        }
        Ok(s)
    }

    /// `[x, y] = xy - yx`.
    pub fn bracket(&self, other: &Self) -> crate::Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// `sum x^n / n!`; needs zero constant term.
    pub fn exp(&self) -> crate::Result<Self> {
        if !self.constant().is_nil() {
            return Err(Error::PreconditionViolated("exp needs a series without constant term".into()));
        }
        let mut out = Self::one(self.maxdeg);
        let mut term = Self::one(self.maxdeg);
        for n in 1..=self.maxdeg {
            term = term.mul(self)?.scale(&crate::rat(1, n as i64));
            if term.is_zero() {
                break;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// `sum (1 - x)^n`; needs constant term 1.
    pub fn inv(&self) -> crate::Result<Self> {
        if self.constant() != C::unit() {
            return Err(Error::PreconditionViolated("inverse needs constant term 1".into()));
        }
        let y = Self::one(self.maxdeg).sub(self)?;
        let mut out = Self::one(self.maxdeg);
        let mut term = Self::one(self.maxdeg);
        for _ in 1..=self.maxdeg {
            term = term.mul(&y)?;
            if term.is_zero() {
                break;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Deconcatenation-dual coproduct with both letters primitive:
    /// `w` maps to the sum over all ways of splitting its letters into two
    /// complementary subsequences.
    pub fn coproduct(&self) -> BTreeMap<(NCWord, NCWord), C> {
        let mut out: BTreeMap<(NCWord, NCWord), C> = BTreeMap::new();
        for (w, c) in &self.coeffs {
            let n = w.len();
            for mask in 0..1u64 << n {
                let (mut l, mut r) = (NCWord::EMPTY, NCWord::EMPTY);
                for i in 0..n {
                    let letter = if w.letter(i) { NCWord::B } else { NCWord::A };
                    if (mask >> i) & 1 == 1 {
                        l = l.concat(letter);
                    } else {
                        r = r.concat(letter);
                    }
                }
                out.entry((l, r)).or_insert_with(C::nil).add_ref(c);
            }
        }
        out.retain(|_, c| !c.is_nil());
        out
    }

    /// `self (x) self`, truncated at total degree `maxdeg`.
    pub fn tensor_square(&self) -> BTreeMap<(NCWord, NCWord), C> {
        let mut out = BTreeMap::new();
        for (u, a) in &self.coeffs {
            for (v, b) in &self.coeffs {
                if u.len() + v.len() <= self.maxdeg {
                    let c = a.mul_ref(b);
                    if !c.is_nil() {
                        out.insert((*u, *v), c);
                    }
                }
            }
        }
        out
    }
}

impl NCSeries<CoeffElem> {
    pub fn normalize(&self, table: &MzvTable) -> crate::Result<Self> {
        let mut s = Self::zero(self.maxdeg);
        for (w, c) in &self.coeffs {
            s.add_term(*w, &table.normalize(c)?);
        }
        Ok(s)
    }

    /// `Delta(x) = x (x) x` up to `maxdeg`, with products reduced in the table.
    pub fn is_group_like(&self, table: &MzvTable) -> crate::Result<bool> {
        let lhs = self.coproduct();
        let rhs = self.tensor_square();
        let keys: std::collections::BTreeSet<_> = lhs.keys().chain(rhs.keys()).collect();
        for k in keys {
            let l = table.normalize(&lhs.get(k).cloned().unwrap_or_default())?;
            let r = table.normalize(&rhs.get(k).cloned().unwrap_or_default())?;
            if l != r {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl NCSeries<Rational> {
    pub fn to_coeff(&self) -> NCSeries<CoeffElem> {
        self.map(|r| CoeffElem::from_rational(r.clone()))
    }
}

/// `ad^k(a)(b) = sum_j (-1)^j C(k,j) a^{k-j} b a^j`.
pub fn ad_pow<C: Coeff>(k: usize, maxdeg: usize) -> NCSeries<C> {
    let mut s = NCSeries::zero(maxdeg);
    for j in 0..=k {
        let w = NCWord::from_bits(k + 1, 1u64 << j);
        let c = binomial(k as i64, j as i64) * if j % 2 == 0 { int(1) } else { int(-1) };
        s.add_term(w, &C::from_rational(c));
    }
    s
}

/// Whether `x` is a Lie element in each degree, tested with the Dynkin
/// idempotent: a homogeneous `x` of degree `n` is Lie iff
/// `sum c_w [w_1,[w_2,...,w_n]] = n x`.
pub fn is_lie<C: Coeff>(x: &NCSeries<C>) -> bool {
    let n = x.maxdeg;
    let mut dynkin = NCSeries::<C>::zero(n);
    let mut expected = NCSeries::<C>::zero(n);
    for (w, c) in x.iter() {
        let d = w.len();
        if d == 0 {
            return false;
        }
        // right-normed bracket of the letters, expanded
        let mut acc = NCSeries::<Rational>::word(NCWord::from_bits(1, w.letter(d - 1) as u64), Rational::one(), n);
        for i in (0..d - 1).rev() {
            let l = NCSeries::<Rational>::word(NCWord::from_bits(1, w.letter(i) as u64), Rational::one(), n);
            acc = l.bracket(&acc).expect("same degree bound");
        }
        for (v, r) in acc.iter() {
            dynkin.add_term(*v, &c.scale(r));
        }
        expected.add_term(*w, &c.scale(&int(d as i64)));
    }
    dynkin == expected
}

impl<C: Coeff + fmt::Display> fmt::Display for NCSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{w}")?;
        }
        Ok(())
    }
}

impl<C: Coeff + fmt::Display> fmt::Debug for NCSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rat;

    type S = NCSeries<Rational>;

    fn w(s: &str) -> NCWord {
        NCWord::parse(s).unwrap()
    }

    #[test]
    fn products() {
        let (a, b) = (S::a(4), S::b(4));
        assert_eq!(a.mul(&b).unwrap(), S::word(w("ab"), int(1), 4));
        let one = S::one(4);
        let p = one.add(&a).unwrap().mul(&one.sub(&a).unwrap()).unwrap();
        assert_eq!(p, one.sub(&S::word(w("aa"), int(1), 4)).unwrap());
        let br = a.bracket(&b).unwrap();
        assert_eq!(br, S::word(w("ab"), int(1), 4).sub(&S::word(w("ba"), int(1), 4)).unwrap());
        assert!(matches!(a.mul(&S::b(3)), Err(Error::DegreeMismatch(4, 3))));
    }

    #[test]
    fn exp_inv() {
        assert_eq!(S::zero(3).exp().unwrap(), S::one(3));
        assert_eq!(S::one(3).inv().unwrap(), S::one(3));
        let e = S::a(2).exp().unwrap();
        let expect = S::one(2).add(&S::a(2)).unwrap().add(&S::word(w("aa"), rat(1, 2), 2)).unwrap();
        assert_eq!(e, expect);
        assert!(matches!(S::one(2).exp(), Err(Error::PreconditionViolated(_))));
        assert!(matches!(S::a(2).inv(), Err(Error::PreconditionViolated(_))));
        let x = S::a(5).add(&S::b(5).bracket(&S::a(5)).unwrap()).unwrap().scale(&rat(3, 2));
        assert_eq!(x.exp().unwrap().mul(&x.neg().exp().unwrap()).unwrap(), S::one(5));
        let g = S::one(5).add(&x).unwrap();
        assert_eq!(g.inv().unwrap().mul(&g).unwrap(), S::one(5));
    }

    #[test]
    fn ad_pow_examples() {
        assert_eq!(ad_pow::<Rational>(0, 3), S::b(3));
        assert_eq!(ad_pow::<Rational>(1, 3), S::a(3).bracket(&S::b(3)).unwrap());
        let expect = S::word(w("aab"), int(1), 3)
            .add(&S::word(w("aba"), int(-2), 3))
            .unwrap()
            .add(&S::word(w("baa"), int(1), 3))
            .unwrap();
        assert_eq!(ad_pow::<Rational>(2, 3), expect);
    }

    #[test]
    fn ad_pow_is_lie() {
        for k in 0..6 {
            assert!(is_lie(&ad_pow::<Rational>(k, 6)));
        }
        assert!(!is_lie(&S::word(w("ab"), int(1), 6)));
    }

    #[test]
    fn exp_of_lie_is_group_like() {
        let t = MzvTable::shipped();
        let x = ad_pow::<Rational>(1, 6).add(&S::a(6)).unwrap().to_coeff();
        assert!(x.exp().unwrap().is_group_like(&t).unwrap());
        assert!(!S::one(6).add(&S::word(w("ab"), int(1), 6)).unwrap().to_coeff().is_group_like(&t).unwrap());
    }
}
