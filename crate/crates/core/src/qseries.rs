//! Truncated expansions `sum c_{m,j} q^m T^j` with `q = exp(T)`, `T = 2 pi i tau`.
//!
//! `d/dT` is `(1/2 pi i) d/dtau`. Primitives are normalized to have zero
//! `q^0 T^0` coefficient, which is the tangential regularization at the cusp.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeffring::{Coeff, CoeffElem, MzvTable, Rational};

pub const DEFAULT_ORDER: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct QTSeries<C: Coeff = CoeffElem> {
    order: usize,
    coeffs: BTreeMap<(u32, u32), C>,
}

impl<C: Coeff> QTSeries<C> {
    /// Zero series keeping `q^0 .. q^{order-1}`.
    pub fn zero(order: usize) -> Self {
        QTSeries { order, coeffs: BTreeMap::new() }
    }

    pub fn constant(c: C, order: usize) -> Self {
        Self::monomial(0, 0, c, order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::unit(), order)
    }

    /// `c q^m T^j` (zero if `m` is beyond the order).
    pub fn monomial(m: u32, j: u32, c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.add_term(m, j, &c);
        s
    }

    /// The series `T`.
    pub fn t(order: usize) -> Self {
        Self::monomial(0, 1, C::unit(), order)
    }

    /// The series `q`.
    pub fn q(order: usize) -> Self {
        Self::monomial(1, 0, C::unit(), order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Highest power of `T` present (0 for the zero series).
    pub fn tdeg(&self) -> u32 {
        self.coeffs.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    pub fn coeff(&self, m: u32, j: u32) -> C {
        self.coeffs.get(&(m, j)).cloned().unwrap_or_else(C::nil)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &C)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_t_free(&self) -> bool {
        self.coeffs.keys().all(|&(_, j)| j == 0)
    }

    /// The terms carrying a positive power of `T`.
    pub fn t_part(&self) -> Self {
        QTSeries {
            order: self.order,
            coeffs: self.coeffs.iter().filter(|(k, _)| k.1 > 0).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    pub fn add_term(&mut self, m: u32, j: u32, c: &C) {
        if (m as usize) >= self.order || c.is_nil() {
            return;
        }
        let e = self.coeffs.entry((m, j)).or_insert_with(C::nil);
        e.add_ref(c);
        if e.is_nil() {
            self.coeffs.remove(&(m, j));
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        QTSeries {
            order,
            coeffs: self.coeffs.iter().filter(|(k, _)| (k.0 as usize) < order).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.truncate(other.order);
        for (&(m, j), c) in &other.coeffs {
            out.add_term(m, j, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg_ref())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map(|c| c.scale(r))
    }

    /// Coefficient-wise map; zero images are dropped.
    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> QTSeries<D> {
        let mut out = QTSeries::zero(self.order);
        for (&(m, j), c) in &self.coeffs {
            out.add_term(m, j, &f(c));
        }
        out
    }

    /// Product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = Self::zero(order);
        for (&(m1, j1), a) in &self.coeffs {
            for (&(m2, j2), b) in &other.coeffs {
                if ((m1 + m2) as usize) < order {
                    out.add_term(m1 + m2, j1 + j2, &a.mul_ref(b));
                }
            }
        }
        out
    }

    /// `d/dT (q^m T^j) = m q^m T^j + j q^m T^{j-1}`.
    pub fn ddt(&self) -> Self {
        let mut out = Self::zero(self.order);
        for (&(m, j), c) in &self.coeffs {
            if m > 0 {
                out.add_term(m, j, &c.scale(&crate::int(m as i64)));
            }
            if j > 0 {
                out.add_term(m, j - 1, &c.scale(&crate::int(j as i64)));
            }
        }
        out
    }

    /// The primitive with zero `q^0 T^0` coefficient.
    pub fn antider(&self) -> Self {
        let mut out = Self::zero(self.order);
        let mut by_m: BTreeMap<u32, BTreeMap<u32, &C>> = BTreeMap::new();
        for (&(m, j), c) in &self.coeffs {
            by_m.entry(m).or_default().insert(j, c);
        }
        for (m, profile) in by_m {
            if m == 0 {
                for (j, c) in profile {
                    out.add_term(0, j + 1, &c.scale(&crate::rat(1, j as i64 + 1)));
                }
                continue;
            }
            // m p_j + (j+1) p_{j+1} = f_j, solved from the top T-degree down
            let top = *profile.keys().next_back().expect("nonempty profile");
            let inv_m = crate::rat(1, m as i64);
            let mut next = C::nil();
            for j in (0..=top).rev() {
                let mut p = profile.get(&j).map_or_else(C::nil, |c| (*c).clone());
                p.sub_ref(&next.scale(&crate::int(j as i64 + 1)));
                let p = p.scale(&inv_m);
                out.add_term(m, j, &p);
                next = p;
            }
        }
        out
    }
}

impl QTSeries<CoeffElem> {
    /// Product with symbol products reduced through the table.
    pub fn mul_in(&self, other: &Self, table: &MzvTable) -> crate::Result<Self> {
        let raw = self.mul(other);
        let mut out = Self::zero(raw.order);
        for (&(m, j), c) in &raw.coeffs {
            out.add_term(m, j, &table.normalize(c)?);
        }
        Ok(out)
    }
}

impl QTSeries<Rational> {
    pub fn to_coeff(&self) -> QTSeries<CoeffElem> {
        self.map(|c| CoeffElem::from_rational(c.clone()))
    }
}

pub fn qt_mul(f: &QTSeries, g: &QTSeries, table: &MzvTable) -> crate::Result<QTSeries> {
    f.mul_in(g, table)
}

pub fn qt_ddt<C: Coeff>(f: &QTSeries<C>) -> QTSeries<C> {
    f.ddt()
}

pub fn qt_antider<C: Coeff>(f: &QTSeries<C>) -> QTSeries<C> {
    f.antider()
}

impl<C: Coeff + fmt::Display> fmt::Display for QTSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (&(m, j), c)) in self.coeffs.iter().enumerate() {
            let mut vars = Vec::new();
            match m {
                0 => {}
                1 => vars.push("q".to_string()),
                _ => vars.push(format!("q^{m}")),
            }
            match j {
                0 => {}
                1 => vars.push("T".to_string()),
                _ => vars.push(format!("T^{j}")),
            }
            let cs = c.to_string();
            let compound = cs[1..].contains([' ']);
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if !compound => (true, rest.to_string()),
                _ => (false, cs.clone()),
            };
            let body = if compound { format!("({body})") } else { body };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut parts = Vec::new();
            if body != "1" || vars.is_empty() {
                parts.push(body);
            }
            parts.extend(vars);
            write!(f, "{}", parts.join("*"))?;
        }
        if self.order > 0 {
            write!(f, " + O(q^{})", self.order)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{int, rat};
    use proptest::prelude::*;

    type QS = QTSeries<Rational>;

    fn t() -> QS {
        QS::t(10)
    }
    fn q() -> QS {
        QS::q(10)
    }

    #[test]
    fn mul_examples() {
        let one = QS::one(4);
        let p = one.add(&QS::q(4)).mul(&one.sub(&QS::q(4)));
        assert_eq!(p, one.sub(&QS::monomial(2, 0, int(1), 4)));
        assert_eq!(t().mul(&t()), QS::monomial(0, 2, int(1), 10));
        assert_eq!(q().mul(&t()), QS::monomial(1, 1, int(1), 10));
        assert_eq!(QS::q(3).mul(&QS::q(10)).mul(&QS::q(10)).order(), 3);
        assert!(QS::q(3).mul(&QS::q(10)).mul(&QS::q(10)).is_zero());
    }

    #[test]
    fn ddt_examples() {
        assert_eq!(t().ddt(), QS::one(10));
        assert_eq!(q().ddt(), q());
        let qt = q().mul(&t());
        assert_eq!(qt.ddt(), qt.add(&q()));
    }

    #[test]
    fn antider_examples() {
        assert_eq!(QS::one(10).antider(), t());
        assert_eq!(q().antider(), q());
        let qt = q().mul(&t());
        assert_eq!(qt.antider(), qt.sub(&q()));
        let f = QS::monomial(0, 2, rat(3, 2), 10);
        assert_eq!(f.antider(), QS::monomial(0, 3, rat(1, 2), 10));
    }

    #[test]
    fn render() {
        let f = QS::constant(rat(1, 240), 4).add(&QS::q(4)).add(&QS::monomial(2, 1, int(-9), 4));
        assert_eq!(f.to_string(), "1/240 + q - 9*q^2*T + O(q^4)");
        let c: QTSeries = QTSeries::monomial(1, 0, CoeffElem::parse("z3 - pi").unwrap(), 3);
        assert_eq!(c.to_string(), "(-pi + z3)*q + O(q^3)");
    }

    fn series() -> impl Strategy<Value = QS> {
        proptest::collection::vec((0u32..6, 0u32..3, -5i64..6, 1i64..4), 0..8).prop_map(|terms| {
            let mut s = QS::zero(6);
            for (m, j, n, d) in terms {
                s.add_term(m, j, &rat(n, d));
            }
            s
        })
    }

    proptest! {
        #[test]
        fn ddt_inverts_antider(f in series()) {
            prop_assert_eq!(f.antider().ddt(), f.clone());
            prop_assert!(f.antider().coeff(0, 0).is_nil());
        }

        #[test]
        fn leibniz(f in series(), g in series()) {
            let lhs = f.mul(&g).ddt();
            let rhs = f.ddt().mul(&g).add(&f.mul(&g.ddt()));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
