use std::collections::BTreeMap;

use super::{NCSeries, NCWord};
use crate::coeffring::{Coeff, Rational};

/// A derivation of the tensor algebra on `a`, `b`, given by the images of
/// the two letters (rational polynomials).
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    images: [BTreeMap<NCWord, Rational>; 2],
}

impl Derivation {
    pub fn new(a_image: &NCSeries<Rational>, b_image: &NCSeries<Rational>) -> Self {
        let collect = |s: &NCSeries<Rational>| s.iter().map(|(w, c)| (*w, c.clone())).collect();
        Derivation { images: [collect(a_image), collect(b_image)] }
    }

    pub fn zero() -> Self {
        Derivation { images: [BTreeMap::new(), BTreeMap::new()] }
    }

    pub fn image(&self, letter_b: bool, maxdeg: usize) -> NCSeries<Rational> {
        let mut s = NCSeries::zero(maxdeg);
        for (w, c) in &self.images[letter_b as usize] {
            s.add_term(*w, c);
        }
        s
    }

    /// `self + r * other`.
    pub fn add_scaled(&self, other: &Derivation, r: &Rational) -> Self {
        let mut out = self.clone();
        for (mine, theirs) in out.images.iter_mut().zip(&other.images) {
            for (w, c) in theirs {
                let e = mine.entry(*w).or_default();
                *e += c * r;
            }
            mine.retain(|_, c| !num_traits::Zero::is_zero(c));
        }
        out
    }

    /// Applies the derivation letter by letter, truncating at `x.maxdeg()`.
    pub fn apply<C: Coeff>(&self, x: &NCSeries<C>) -> NCSeries<C> {
        let maxdeg = x.maxdeg();
        let mut out = NCSeries::zero(maxdeg);
        for (w, c) in x.iter() {
            let n = w.len();
            for i in 0..n {
                let img = &self.images[w.letter(i) as usize];
                let (pre, rest) = w.split(i);
                let (_, post) = rest.split(1);
                for (v, r) in img {
                    if n - 1 + v.len() > maxdeg {
                        continue;
                    }
                    out.add_term(pre.concat(*v).concat(post), &c.scale(r));
                }
            }
        }
        out
    }

    /// Composition `self o other` evaluated on a series.
    pub fn commutator_apply<C: Coeff>(&self, other: &Derivation, x: &NCSeries<C>) -> crate::Result<NCSeries<C>> {
        self.apply(&other.apply(x)).sub(&other.apply(&self.apply(x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::int;
    use crate::ncalg::ad_pow;

    #[test]
    fn leibniz_on_products() {
        // d(a) = b, d(b) = 0
        let d = Derivation::new(&NCSeries::b(4), &NCSeries::zero(4));
        let ab = NCSeries::<Rational>::word(NCWord::parse("ab").unwrap(), int(1), 4);
        assert_eq!(d.apply(&ab), NCSeries::word(NCWord::parse("bb").unwrap(), int(1), 4));
        let x = ad_pow::<Rational>(1, 4);
        let y = NCSeries::<Rational>::a(4).add(&NCSeries::b(4)).unwrap();
        let lhs = d.apply(&x.mul(&y).unwrap());
        let rhs = d.apply(&x).mul(&y).unwrap().add(&x.mul(&d.apply(&y)).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
