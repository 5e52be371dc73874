//! The Fourier subspace, spanned by the `E0(w)`:
//! `E0(..., 2k) = E(..., 2k) - B_2k/(4k) E(..., 0)` for `k > 0`, and
//! `E0(..., 0) = 0`.

use std::collections::BTreeMap;

use crate::coeffring::{bernoulli, int, CoeffElem};
use crate::eisalg::{epoly_to_qexp, EPoly, EWord};

/// Rewrites `x = sum c_w E0(w) + residual`, with the residual supported on
/// words ending in `0`. The empty word counts as `E0` of itself.
pub fn to_e0_basis(x: &EPoly) -> (BTreeMap<EWord, CoeffElem>, EPoly) {
    let mut e0 = BTreeMap::new();
    let mut residual = EPoly::zero();
    for (w, c) in x.iter() {
        match w.letters().last() {
            None => {
                e0.insert(w.clone(), c.clone());
            }
            Some(0) => residual.add_term(w.clone(), c),
            Some(&k2) => {
                e0.insert(w.clone(), c.clone());
                let mut v = w.letters().to_vec();
                *v.last_mut().unwrap() = 0;
                let r = bernoulli(k2 as usize) / int(2 * k2 as i64);
                residual.add_term(EWord::new(v).unwrap(), &c.scale(&r));
            }
        }
    }
    (e0, residual)
}

/// Whether the q-expansion of `x` to `order` terms is free of `T`.
pub fn fourier_membership(x: &EPoly, order: usize) -> bool {
    epoly_to_qexp(x, order).is_t_free()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rat;
    use proptest::prelude::*;

    fn ep(s: &str) -> EPoly {
        EPoly::parse(s).unwrap()
    }

    #[test]
    fn examples() {
        let (e0, r) = to_e0_basis(&ep("-2*e(0,4) - 1/120*e(0,0)"));
        assert!(r.is_zero());
        assert_eq!(e0, BTreeMap::from([(EWord::new(vec![0, 4]).unwrap(), CoeffElem::from_int(-2))]));
        let (e0, r) = to_e0_basis(&ep("6*e(0,0,4) + 1/40*e(0,0,0)"));
        assert!(r.is_zero());
        assert_eq!(e0.len(), 1);
        let (_, r) = to_e0_basis(&ep("e(0,4)"));
        assert_eq!(r, EPoly::word(&[0, 0], CoeffElem::from_rational(rat(-1, 240))));
        assert!(!fourier_membership(&ep("e(0,4)"), 6));
        assert!(!fourier_membership(&ep("e(0)"), 6));
        assert!(fourier_membership(&ep("1"), 6));
        assert!(fourier_membership(&ep("-2*e(0,4) - 1/120*e(0,0)"), 10));
    }

    fn random_epoly() -> impl Strategy<Value = EPoly> {
        let word = proptest::collection::vec(prop_oneof![Just(0u32), Just(4), Just(6)], 0..=3);
        proptest::collection::vec((word, -3i64..4), 0..5).prop_map(|terms| {
            let mut x = EPoly::zero();
            for (w, c) in terms {
                x.add_term(EWord::new(w).unwrap(), &CoeffElem::from_int(c));
            }
            x
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn residual_criterion_agrees(x in random_epoly()) {
            let (_, r) = to_e0_basis(&x);
            prop_assert_eq!(fourier_membership(&x, 6), r.is_zero());
        }

        #[test]
        fn e0_symbols_are_fourier(x in random_epoly()) {
            let (e0, _) = to_e0_basis(&x);
            let mut y = EPoly::zero();
            for (w, c) in e0 {
                y.add_term(w.clone(), &c);
                if let Some(&k2) = w.letters().last().filter(|&&k| k > 0) {
                    let mut v = w.letters().to_vec();
                    *v.last_mut().unwrap() = 0;
                    let r = -bernoulli(k2 as usize) / int(2 * k2 as i64);
                    y.add_term(EWord::new(v).unwrap(), &c.scale(&r));
                }
            }
            prop_assert!(fourier_membership(&y, 6));
        }
    }
}
