//! The free Lie algebra on `x < y` in the Lyndon basis. Words are stored as
//! [`NCWord`]s with `x = a`, `y = b`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::Zero;

use crate::coeffring::{int, Rational};
use crate::ncalg::{NCSeries, NCWord};
use crate::Error;

/// Whether `w` is strictly smaller than each of its proper suffixes.
pub fn is_lyndon<T: Ord>(w: &[T]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Split point of the standard factorization `w = u v`, `v` the longest
/// proper Lyndon suffix. `None` for letters.
pub fn standard_split<T: Ord>(w: &[T]) -> Option<usize> {
    (1..w.len()).find(|&i| is_lyndon(&w[i..]))
}

fn letters(w: NCWord) -> Vec<bool> {
    (0..w.len()).map(|i| w.letter(i)).collect()
}

/// Lyndon words of length `n`, increasing.
pub fn lyndon_words(n: usize) -> Arc<Vec<NCWord>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<Vec<NCWord>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.read().unwrap().get(&n) {
        return v.clone();
    }
    let v: Arc<Vec<NCWord>> = Arc::new(NCWord::all(n).filter(|w| is_lyndon(&letters(*w))).collect());
    cache.write().unwrap().insert(n, v.clone());
    v
}

/// Dimension of the degree-`n` part of the free Lie algebra on two letters.
pub fn free_lie_dim(n: usize) -> usize {
    lyndon_words(n).len()
}

/// The bracketed Lyndon polynomial `P_w`, expanded (integer coefficients);
/// `P_w = w + larger words`.
pub fn lyndon_poly(w: NCWord) -> Arc<BTreeMap<NCWord, i64>> {
    type Cache = RwLock<HashMap<NCWord, Arc<BTreeMap<NCWord, i64>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.read().unwrap().get(&w) {
        return p.clone();
    }
    let p = match standard_split(&letters(w)) {
        None => Arc::new(BTreeMap::from([(w, 1)])),
        Some(i) => {
            let (u, v) = w.split(i);
            let (pu, pv) = (lyndon_poly(u), lyndon_poly(v));
            let mut out = BTreeMap::new();
            for (s, t, sign) in [(&pu, &pv, 1), (&pv, &pu, -1)] {
                for (x, c) in s.iter() {
                    for (y, d) in t.iter() {
                        *out.entry(x.concat(*y)).or_insert(0) += sign * c * d;
                    }
                }
            }
            out.retain(|_, c| *c != 0);
            Arc::new(out)
        }
    };
    cache.write().unwrap().insert(w, p.clone());
    p
}

/// An element of the free Lie algebra, as Lyndon coordinates, truncated
/// above degree `maxdeg`.
#[derive(Clone, PartialEq, Eq)]
pub struct LieVec {
    maxdeg: usize,
    coeffs: BTreeMap<NCWord, Rational>,
}

impl LieVec {
    pub fn zero(maxdeg: usize) -> Self {
        LieVec { maxdeg, coeffs: BTreeMap::new() }
    }

    /// The basis element `P_w`; fails unless `w` is Lyndon.
    pub fn basis(w: NCWord, maxdeg: usize) -> crate::Result<Self> {
        if !is_lyndon(&letters(w)) {
            return Err(Error::PreconditionViolated(format!("{w} is not a Lyndon word")));
        }
        let mut v = Self::zero(maxdeg);
        v.add_term(w, &int(1));
        Ok(v)
    }

    pub fn x(maxdeg: usize) -> Self {
        Self::basis(NCWord::A, maxdeg).expect("letter")
    }

    pub fn y(maxdeg: usize) -> Self {
        Self::basis(NCWord::B, maxdeg).expect("letter")
    }

    pub fn maxdeg(&self) -> usize {
        self.maxdeg
    }

    pub fn coeff(&self, w: NCWord) -> Rational {
        self.coeffs.get(&w).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NCWord, &Rational)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degrees carrying a nonzero component.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.coeffs.keys().map(|w| w.len()).collect();
        d.dedup();
        d
    }

    pub fn degree_part(&self, d: usize) -> Self {
        LieVec {
            maxdeg: self.maxdeg,
            coeffs: self.coeffs.iter().filter(|(w, _)| w.len() == d).map(|(w, c)| (*w, c.clone())).collect(),
        }
    }

    /// Coordinates of the degree-`d` part along [`lyndon_words`]`(d)`.
    pub fn component(&self, d: usize) -> Vec<Rational> {
        lyndon_words(d).iter().map(|w| self.coeff(*w)).collect()
    }

    pub fn add_term(&mut self, w: NCWord, c: &Rational) {
        if w.len() > self.maxdeg || c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(w).or_default();
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&w);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = LieVec { maxdeg: self.maxdeg.min(other.maxdeg), coeffs: BTreeMap::new() };
        for (w, c) in self.iter().chain(other.iter()) {
            out.add_term(*w, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&int(-1))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = Self::zero(self.maxdeg);
        for (w, c) in self.iter() {
            out.add_term(*w, &(c * r));
        }
        out
    }

    /// Expansion in the tensor algebra.
    pub fn to_assoc(&self) -> NCSeries<Rational> {
        let mut s = NCSeries::zero(self.maxdeg);
        for (w, c) in self.iter() {
            for (v, n) in lyndon_poly(*w).iter() {
                s.add_term(*v, &(c * int(*n)));
            }
        }
        s
    }

    /// Lyndon coordinates of a Lie polynomial; fails if `s` is not Lie.
    pub fn from_assoc(s: &NCSeries<Rational>) -> crate::Result<Self> {
        let mut rest: BTreeMap<NCWord, Rational> = s.iter().map(|(w, c)| (*w, c.clone())).collect();
        let mut out = Self::zero(s.maxdeg());
        while let Some((w, c)) = rest.pop_first() {
            if !is_lyndon(&letters(w)) {
                return Err(Error::PreconditionViolated(format!("not a Lie element (leading word {w})")));
            }
            for (v, n) in lyndon_poly(w).iter() {
                if *v == w {
                    continue;
                }
                let e = rest.entry(*v).or_default();
                *e -= &c * int(*n);
                if e.is_zero() {
                    rest.remove(v);
                }
            }
            out.add_term(w, &c);
        }
        Ok(out)
    }

    /// `[self, other]`, dropping degrees above the smaller bound.
    pub fn bracket(&self, other: &Self) -> Self {
        let maxdeg = self.maxdeg.min(other.maxdeg);
        let (a, b) = (self.to_assoc().truncate(maxdeg), other.to_assoc().truncate(maxdeg));
        let c = a.bracket(&b).expect("same degree bound");
        Self::from_assoc(&c).expect("brackets are Lie")
    }
}

impl fmt::Display for LieVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .iter()
            .map(|(w, c)| {
                let w = w.to_string().replace('a', "x").replace('b', "y");
                format!("{c}*P({w})")
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for LieVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
