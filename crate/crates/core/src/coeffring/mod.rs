//! Exact coefficient arithmetic.
//!
//! Coefficients live in the polynomial ring over `Q` generated by the formal
//! symbol `pi` (standing for `2*pi*i`) and a table-supplied set of multiple
//! zeta value symbols such as `z3`, `z5` or `z3_5`. Even single zeta values
//! never appear as symbols; they are always rewritten as rational multiples
//! of powers of `pi`.

mod elem;
mod expr;
mod table;

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use elem::{CoeffElem, MzvMonomial, MzvSymbol};
pub use expr::{parse_coeff, parse_terms, render_rational, Term};
pub use table::{MzvTable, SHIPPED_TABLE};

/// Exact rational number, always kept in lowest terms with positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient `C(n, k)` for `n >= -1`, `k >= 0`.
///
/// `C(-1, 0) = 1` and `C(n, k) = 0` for `0 <= n < k`; these are the only
/// cases the differential equation produces.
pub fn binomial(n: i64, k: i64) -> Rational {
    if k < 0 {
        return Rational::zero();
    }
    if n < 0 {
        // generalized binomial: C(-1, k) = (-1)^k
        assert_eq!(n, -1, "binomial only supports n >= -1");
        return if k % 2 == 0 { int(1) } else { int(-1) };
    }
    if k > n {
        return Rational::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

fn bernoulli_cache() -> &'static RwLock<Vec<Rational>> {
    static CACHE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(vec![Rational::one()]))
}

/// Bernoulli number `B_m` with generating function `t/(e^t - 1)`, so that
/// `B_1 = -1/2`. Memoized; safe to call from many threads.
pub fn bernoulli(m: usize) -> Rational {
    {
        let cache = bernoulli_cache().read().expect("bernoulli cache poisoned");
        if let Some(b) = cache.get(m) {
            return b.clone();
        }
    }
    let mut cache = bernoulli_cache().write().expect("bernoulli cache poisoned");
    while cache.len() <= m {
        let n = cache.len();
        // sum_{j=0}^{n} C(n+1, j) B_j = 0
        let mut s = Rational::zero();
        for (j, b) in cache.iter().enumerate() {
            s += binomial(n as i64 + 1, j as i64) * b;
        }
        cache.push(-s / int(n as i64 + 1));
    }
    cache[m].clone()
}

/// `zeta(s) = -B_s / (2 s!) * (2 pi i)^s` for even `s >= 2`.
pub fn reduce_even_zeta(s: u32) -> CoeffElem {
    assert!(s >= 2 && s.is_multiple_of(2), "reduce_even_zeta needs an even s >= 2");
    let c = -bernoulli(s as usize) / (int(2) * Rational::from_integer(factorial(s)));
    CoeffElem::pi_power(s).scale(&c)
}

/// Product of two coefficients, reduced through the table's product rules.
pub fn coeff_mul(x: &CoeffElem, y: &CoeffElem, table: &MzvTable) -> crate::Result<CoeffElem> {
    table.normalize(&(x * y))
}

/// Arithmetic shared by every coefficient type used in series.
pub trait Coeff: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn add_ref(&mut self, other: &Self);
    fn sub_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale(&self, r: &Rational) -> Self;
    fn from_rational(r: Rational) -> Self;
}

impl Coeff for Rational {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
}

impl Coeff for CoeffElem {
    fn nil() -> Self {
        CoeffElem::zero()
    }
    fn unit() -> Self {
        CoeffElem::one()
    }
    fn is_nil(&self) -> bool {
        CoeffElem::is_zero(self)
    }
    fn add_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale(&self, r: &Rational) -> Self {
        CoeffElem::scale(self, r)
    }
    fn from_rational(r: Rational) -> Self {
        CoeffElem::from_rational(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), int(0));
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn bernoulli_recurrence() {
        for m in 2..=20i64 {
            let s: Rational = (0..m)
                .map(|j| binomial(m, j) * bernoulli(j as usize))
                .sum();
            assert!(s.is_zero(), "recurrence fails at m = {m}");
        }
    }

    #[test]
    fn bernoulli_concurrent_readers() {
        let handles: Vec<_> = (0..8)
            .map(|i| std::thread::spawn(move || bernoulli(30 + i)))
            .collect();
        let got: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for (i, b) in got.into_iter().enumerate() {
            assert_eq!(b, bernoulli(30 + i));
        }
    }

    #[test]
    fn even_zeta() {
        assert_eq!(reduce_even_zeta(2), CoeffElem::pi_power(2).scale(&rat(-1, 24)));
        assert_eq!(reduce_even_zeta(4), CoeffElem::pi_power(4).scale(&rat(1, 1440)));
        assert_eq!(reduce_even_zeta(6), CoeffElem::pi_power(6).scale(&rat(-1, 60480)));
    }

    #[test]
    fn even_zeta_products_are_pure_pi() {
        for s in [2, 4, 6] {
            for t in [2, 4] {
                let p = &reduce_even_zeta(s) * &reduce_even_zeta(t);
                let terms: Vec<_> = p.iter().collect();
                assert_eq!(terms.len(), 1);
                assert!(terms[0].0.symbols().is_empty());
                assert_eq!(terms[0].0.pi_power(), s + t);
            }
        }
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(-1, 0), int(1));
        assert_eq!(binomial(0, 1), int(0));
        assert_eq!(binomial(5, 2), int(10));
    }
}
