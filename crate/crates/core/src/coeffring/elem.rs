use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{render_rational, Rational};

/// A named multiple zeta value basis element, e.g. `z3` or `z3_5`.
///
/// The name encodes the weight: `z` followed by positive integers joined by
/// `_`, whose sum is the weight.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MzvSymbol {
    weight: u32,
    name: Arc<str>,
}

impl MzvSymbol {
    /// Builds a symbol from its name, deriving the weight from it.
    pub fn parse(name: &str) -> Option<Self> {
        let rest = name.strip_prefix('z')?;
        let mut weight = 0u32;
        for part in rest.split('_') {
            if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) || part.starts_with('0') {
                return None;
            }
            weight = weight.checked_add(part.parse().ok()?)?;
        }
        Some(MzvSymbol { weight, name: Arc::from(name) })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }
}

impl fmt::Debug for MzvSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// `pi^k * s_1 * ... * s_r` with the symbols sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MzvMonomial {
    symbols: Vec<MzvSymbol>,
    pi_power: u32,
}

impl MzvMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(pi_power: u32, mut symbols: Vec<MzvSymbol>) -> Self {
        symbols.sort();
        MzvMonomial { symbols, pi_power }
    }

    pub fn pi_power(&self) -> u32 {
        self.pi_power
    }

    pub fn symbols(&self) -> &[MzvSymbol] {
        &self.symbols
    }

    pub fn symbol_weight(&self) -> u32 {
        self.symbols.iter().map(MzvSymbol::weight).sum()
    }

    pub fn weight(&self) -> u32 {
        self.pi_power + self.symbol_weight()
    }

    pub fn is_one(&self) -> bool {
        self.pi_power == 0 && self.symbols.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut symbols = Vec::with_capacity(self.symbols.len() + other.symbols.len());
        // merge of two sorted lists
        let (mut i, mut j) = (0, 0);
        while i < self.symbols.len() && j < other.symbols.len() {
            if self.symbols[i] <= other.symbols[j] {
                symbols.push(self.symbols[i].clone());
                i += 1;
            } else {
                symbols.push(other.symbols[j].clone());
                j += 1;
            }
        }
        symbols.extend_from_slice(&self.symbols[i..]);
        symbols.extend_from_slice(&other.symbols[j..]);
        MzvMonomial { symbols, pi_power: self.pi_power + other.pi_power }
    }

    pub(crate) fn without(&self, i: usize, j: usize) -> Self {
        let symbols = self
            .symbols
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i && *k != j)
            .map(|(_, s)| s.clone())
            .collect();
        MzvMonomial { symbols, pi_power: self.pi_power }
    }
}

impl fmt::Display for MzvMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.pi_power {
            0 => {}
            1 => parts.push("pi".to_string()),
            k => parts.push(format!("pi^{k}")),
        }
        let mut i = 0;
        while i < self.symbols.len() {
            let mut j = i;
            while j < self.symbols.len() && self.symbols[j] == self.symbols[i] {
                j += 1;
            }
            let name = self.symbols[i].name();
            if j - i == 1 {
                parts.push(name.to_string());
            } else {
                parts.push(format!("{name}^{}", j - i));
            }
            i = j;
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

impl fmt::Debug for MzvMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Element of `Q[pi, symbols]`: a finite map from monomials to nonzero
/// rationals.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CoeffElem {
    terms: BTreeMap<MzvMonomial, Rational>,
}

impl CoeffElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::monomial(MzvMonomial::one(), r)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(super::int(n))
    }

    pub fn monomial(m: MzvMonomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        CoeffElem { terms }
    }

    /// `pi^k`, where `pi` stands for `2*pi*i`.
    pub fn pi_power(k: u32) -> Self {
        Self::monomial(MzvMonomial::new(k, Vec::new()), Rational::one())
    }

    pub fn symbol(s: MzvSymbol) -> Self {
        Self::monomial(MzvMonomial::new(0, vec![s]), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MzvMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &MzvMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The rational part if this is a plain rational number.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: MzvMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        CoeffElem { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect() }
    }

    /// Multiplies every monomial by `pi^k`.
    pub fn mul_pi(&self, k: u32) -> Self {
        CoeffElem {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (MzvMonomial::new(m.pi_power + k, m.symbols.clone()), c.clone()))
                .collect(),
        }
    }

    /// The set of weights present, in increasing order.
    pub fn weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.terms.keys().map(MzvMonomial::weight).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    /// The homogeneous component of weight `w`.
    pub fn weight_part(&self, w: u32) -> Self {
        CoeffElem {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() == w)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn parse(s: &str) -> crate::Result<Self> {
        super::parse_coeff(s)
    }
}

impl fmt::Display for CoeffElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c < &Rational::zero();
            let abs = if negative { -c } else { c.clone() };
            if i == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                f.write_str(&render_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", render_rational(&abs))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CoeffElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoeffElem({self})")
    }
}

impl AddAssign<&CoeffElem> for CoeffElem {
    fn add_assign(&mut self, rhs: &CoeffElem) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&CoeffElem> for CoeffElem {
    fn sub_assign(&mut self, rhs: &CoeffElem) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add<&CoeffElem> for &CoeffElem {
    type Output = CoeffElem;
    fn add(self, rhs: &CoeffElem) -> CoeffElem {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&CoeffElem> for &CoeffElem {
    type Output = CoeffElem;
    fn sub(self, rhs: &CoeffElem) -> CoeffElem {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for CoeffElem {
    type Output = CoeffElem;
    fn add(mut self, rhs: CoeffElem) -> CoeffElem {
        self += &rhs;
        self
    }
}

impl Sub for CoeffElem {
    type Output = CoeffElem;
    fn sub(mut self, rhs: CoeffElem) -> CoeffElem {
        self -= &rhs;
        self
    }
}

impl Neg for &CoeffElem {
    type Output = CoeffElem;
    fn neg(self) -> CoeffElem {
        CoeffElem { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for CoeffElem {
    type Output = CoeffElem;
    fn neg(self) -> CoeffElem {
        -&self
    }
}

/// Free product: monomials multiply without any table reduction.
impl Mul<&CoeffElem> for &CoeffElem {
    type Output = CoeffElem;
    fn mul(self, rhs: &CoeffElem) -> CoeffElem {
        let mut out = CoeffElem::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for CoeffElem {
    type Output = CoeffElem;
    fn mul(self, rhs: CoeffElem) -> CoeffElem {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rat;

    fn z(n: &str) -> CoeffElem {
        CoeffElem::symbol(MzvSymbol::parse(n).unwrap())
    }

    #[test]
    fn symbol_weights() {
        assert_eq!(MzvSymbol::parse("z3").unwrap().weight(), 3);
        assert_eq!(MzvSymbol::parse("z3_5").unwrap().weight(), 8);
        assert!(MzvSymbol::parse("x3").is_none());
        assert!(MzvSymbol::parse("z").is_none());
        assert!(MzvSymbol::parse("z3_").is_none());
    }

    #[test]
    fn free_products() {
        let z3 = z("z3");
        let sq = &z3 * &z3;
        assert_eq!(sq.to_string(), "z3^2");
        assert_eq!((&CoeffElem::pi_power(2) * &CoeffElem::pi_power(2)).to_string(), "pi^4");
        assert_eq!((&z3 * &z("z5")).to_string(), "z3*z5");
    }

    #[test]
    fn display_signs() {
        let x = CoeffElem::pi_power(1).scale(&rat(-3, 1)) + z("z3").scale(&rat(1, 2))
            + CoeffElem::from_rational(rat(-691, 2730));
        assert_eq!(x.to_string(), "-691/2730 - 3*pi + 1/2*z3");
        assert_eq!(CoeffElem::zero().to_string(), "0");
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = z("z5");
        assert!((&x - &x).is_zero());
    }
}
