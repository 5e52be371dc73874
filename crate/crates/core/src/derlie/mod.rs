//! The derivations `eps_2k` of the free Lie algebra on `x, y`, relations
//! among their brackets, the dual-image membership test and the Fourier
//! subspace.
//!
//! When acting on associator data the generators are identified with the
//! series letters, `x = a`, `y = b`.

mod fourier;
mod lie;
mod relations;

use std::fmt;

use num_traits::{One, Zero};

pub use fourier::{fourier_membership, to_e0_basis};
pub use lie::{free_lie_dim, is_lyndon, lyndon_poly, lyndon_words, standard_split, LieVec};
pub use relations::{
    annihilator_in, find_lie_relations, find_relations_among, lie_relations, lyndon_candidates, uu_dual_membership,
    RelationSet,
};

use crate::coeffring::{bernoulli, factorial, int, Coeff, Rational};
use crate::eisalg::EWord;
use crate::linalg::RatMatrix;
use crate::ncalg::{ad_pow, Derivation, NCSeries};
use crate::Error;

/// `eps_2k(x) = ad^2k(x)(y)` and
/// `eps_2k(y) = sum_{j<k} (-1)^j [ad^j(x)(y), ad^{2k-1-j}(x)(y)]`,
/// expanded in degree `2k + 1`.
pub fn eps_images(k2: u32) -> (NCSeries<Rational>, NCSeries<Rational>) {
    let d = k2 as usize + 1;
    let x_img = ad_pow::<Rational>(k2 as usize, d);
    let mut y_img = NCSeries::zero(d);
    for j in 0..(k2 / 2) as usize {
        let term = ad_pow::<Rational>(j, d).bracket(&ad_pow(k2 as usize - 1 - j, d)).expect("same bound");
        let term = if j % 2 == 0 { term } else { term.neg() };
        y_img = y_img.add(&term).expect("same bound");
    }
    (x_img, y_img)
}

/// `eps~_2k = eps_2k * tilde_factor(2k)`: `2/(2k-2)!` for `k > 0`, `-1` for `k = 0`.
pub fn tilde_factor(k2: u32) -> Rational {
    if k2 == 0 {
        -Rational::one()
    } else {
        Rational::new(int(2).to_integer(), factorial(k2 - 2))
    }
}

/// One derivation `eps_2k` (or its tilde normalization).
#[derive(Clone, Debug)]
pub struct EpsOperator {
    k2: u32,
    tilde: bool,
    derivation: Derivation,
}

impl EpsOperator {
    pub fn new(k2: u32, tilde: bool) -> crate::Result<Self> {
        if k2 % 2 == 1 {
            return Err(Error::PreconditionViolated(format!("eps index {k2} must be even")));
        }
        let (x_img, y_img) = eps_images(k2);
        let mut derivation = Derivation::new(&x_img, &y_img);
        if tilde {
            derivation = Derivation::zero().add_scaled(&derivation, &tilde_factor(k2));
        }
        Ok(EpsOperator { k2, tilde, derivation })
    }

    pub fn index(&self) -> u32 {
        self.k2
    }

    pub fn is_tilde(&self) -> bool {
        self.tilde
    }

    pub fn derivation(&self) -> &Derivation {
        &self.derivation
    }

    pub fn apply_series<C: Coeff>(&self, x: &NCSeries<C>) -> NCSeries<C> {
        self.derivation.apply(x)
    }

    /// Fails if some component of `v` would be pushed above `v.maxdeg()`.
    pub fn apply(&self, v: &LieVec) -> crate::Result<LieVec> {
        if let Some(&d) = v.degrees().last() {
            if d + self.k2 as usize > v.maxdeg() {
                return Err(Error::TruncationOverflow { needed: d + self.k2 as usize, bound: v.maxdeg() });
            }
        }
        LieVec::from_assoc(&self.derivation.apply(&v.to_assoc()))
    }

    /// Matrix from the degree-`d` Lyndon basis to the degree-`d + 2k` one.
    pub fn block(&self, d: usize) -> crate::Result<RatMatrix> {
        let target = d + self.k2 as usize;
        let src = lyndon_words(d);
        let dst = lyndon_words(target);
        let mut m = RatMatrix::zeros(dst.len(), src.len());
        for (j, w) in src.iter().enumerate() {
            let img = self.apply(&LieVec::basis(*w, target)?)?;
            for (i, v) in dst.iter().enumerate() {
                m.set(i, j, img.coeff(*v));
            }
        }
        Ok(m)
    }
}

pub fn eps_apply(k2: u32, v: &LieVec) -> crate::Result<LieVec> {
    EpsOperator::new(k2, false)?.apply(v)
}

/// `eps_{k_1} o ... o eps_{k_n}` for the word `(k_1, ..., k_n)`; the last
/// letter acts first.
#[derive(Clone, Debug)]
pub struct WordOperator {
    ops: Vec<EpsOperator>,
}

impl WordOperator {
    pub fn apply_series<C: Coeff>(&self, x: &NCSeries<C>) -> NCSeries<C> {
        self.ops.iter().rev().fold(x.clone(), |acc, op| op.apply_series(&acc))
    }

    pub fn apply(&self, v: &LieVec) -> crate::Result<LieVec> {
        self.ops.iter().rev().try_fold(v.clone(), |acc, op| op.apply(&acc))
    }
}

pub fn word_operator(w: &EWord, lie_degree: usize, tilde: bool) -> crate::Result<WordOperator> {
    let needed = w.letter_sum() as usize + 1;
    if !w.is_empty() && needed > lie_degree {
        return Err(Error::TruncationOverflow { needed, bound: lie_degree });
    }
    let ops = w.letters().iter().map(|&k| EpsOperator::new(k, tilde)).collect::<crate::Result<_>>()?;
    Ok(WordOperator { ops })
}

/// `D = eps~_0 + sum_{k>=1} B_2k/(4k) eps~_2k`, keeping the terms that act
/// nontrivially below degree `lie_degree`.
pub fn build_d_derivation(lie_degree: usize) -> crate::Result<Derivation> {
    if lie_degree == 0 {
        return Err(Error::PreconditionViolated("D needs a positive degree bound".into()));
    }
    let mut d = EpsOperator::new(0, true)?.derivation().clone();
    let mut k2 = 2;
    while (k2 as usize) < lie_degree {
        let c = bernoulli(k2 as usize) / int(2 * k2 as i64);
        d = d.add_scaled(EpsOperator::new(k2, true)?.derivation(), &c);
        k2 += 2;
    }
    Ok(d)
}

/// A formal bracket of letters `e_2k`, standing for the same bracket of
/// the `eps_2k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LieExpr {
    Letter(u32),
    Bracket(Box<LieExpr>, Box<LieExpr>),
}

impl LieExpr {
    pub fn bracket(a: LieExpr, b: LieExpr) -> Self {
        LieExpr::Bracket(Box::new(a), Box::new(b))
    }

    /// Standard bracketing of a Lyndon word in the letters.
    pub fn from_lyndon(w: &[u32]) -> Self {
        match standard_split(w) {
            None => LieExpr::Letter(w[0]),
            Some(i) => LieExpr::bracket(Self::from_lyndon(&w[..i]), Self::from_lyndon(&w[i..])),
        }
    }

    /// Parses `e4` or `[X,Y]`.
    pub fn parse(s: &str) -> crate::Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad Lie expression {s:?}"));
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let mut depth = 0i32;
            for (i, ch) in inner.char_indices() {
                match ch {
                    '[' => depth += 1,
                    ']' => depth -= 1,
                    ',' if depth == 0 => {
                        return Ok(LieExpr::bracket(Self::parse(&inner[..i])?, Self::parse(&inner[i + 1..])?));
                    }
                    _ => {}
                }
            }
            return Err(bad());
        }
        let k: u32 = s.strip_prefix('e').ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if k % 2 == 1 {
            return Err(bad());
        }
        Ok(LieExpr::Letter(k))
    }

    pub fn weight(&self) -> u32 {
        match self {
            LieExpr::Letter(k) => *k,
            LieExpr::Bracket(a, b) => a.weight() + b.weight(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            LieExpr::Letter(_) => 1,
            LieExpr::Bracket(a, b) => a.depth() + b.depth(),
        }
    }

    /// Expansion as a combination of words in the tensor algebra on the letters.
    pub fn expand(&self) -> Vec<(EWord, Rational)> {
        match self {
            LieExpr::Letter(k) => vec![(EWord::new(vec![*k]).expect("even letter"), Rational::one())],
            LieExpr::Bracket(a, b) => {
                let (ea, eb) = (a.expand(), b.expand());
                let mut out = std::collections::BTreeMap::<EWord, Rational>::new();
                for (u, c) in &ea {
                    for (v, d) in &eb {
                        *out.entry(u.concat(v)).or_default() += c * d;
                        *out.entry(v.concat(u)).or_default() -= c * d;
                    }
                }
                out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
            }
        }
    }

    /// The derivation this bracket evaluates to (plain `eps`), exact on
    /// the generators.
    pub fn derivation(&self) -> crate::Result<Derivation> {
        match self {
            LieExpr::Letter(k) => Ok(EpsOperator::new(*k, false)?.derivation().clone()),
            LieExpr::Bracket(a, b) => {
                let d = self.weight() as usize + 1;
                let (da, db) = (a.derivation()?, b.derivation()?);
                let x = NCSeries::<Rational>::a(d);
                let y = NCSeries::<Rational>::b(d);
                let xi = da.commutator_apply(&db, &x)?;
                let yi = da.commutator_apply(&db, &y)?;
                Ok(Derivation::new(&xi, &yi))
            }
        }
    }
}

impl fmt::Display for LieExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieExpr::Letter(k) => write!(f, "e{k}"),
            LieExpr::Bracket(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}
