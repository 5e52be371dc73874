//! Exact dense linear algebra over `Q`.
//!
//! Elimination runs on primitive integer rows (fraction-free, with the row
//! content divided out after every update) and converts back to rationals
//! only at the end.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::coeffring::{Coeff, Rational};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> crate::Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> crate::Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let n = rows.len();
        Ok(RatMatrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> crate::Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| crate::int(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> crate::Result<Vec<Rational>> {
        self.mul_coeff_vec(v)
    }

    /// `self * v` for a vector over any coefficient type.
    pub fn mul_coeff_vec<C: Coeff>(&self, v: &[C]) -> crate::Result<Vec<C>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = C::nil();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_nil() {
                        acc.add_ref(&x.scale(a));
                    }
                }
                acc
            })
            .collect())
    }

    pub fn mul(&self, other: &RatMatrix) -> crate::Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!("{}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &RatMatrix) -> crate::Result<RatMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row counts differ".into()));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(RatMatrix { rows: self.rows, cols, data })
    }
}

fn primitive(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter().filter(|x| !x.is_zero()) {
        g = g.gcd(x);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        if !x.is_zero() {
            *x /= &g;
        }
    }
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let l = row
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let mut out: Vec<BigInt> = row.iter().map(|x| (x * &l).to_integer()).collect();
    primitive(&mut out);
    out
}

/// `target <- p * target - c * pivot_row`, where `p` is the pivot entry and
/// `c` the entry of `target` in the pivot column.
fn eliminate(target: &mut [BigInt], pivot_row: &[BigInt], col: usize) {
    let c = target[col].clone();
    if c.is_zero() {
        return;
    }
    let p = &pivot_row[col];
    let g = p.gcd(&c);
    let (pm, cm) = (p / &g, &c / &g);
    for (t, s) in target.iter_mut().zip(pivot_row) {
        if s.is_zero() {
            if !t.is_zero() {
                *t *= &pm;
            }
        } else {
            *t = &*t * &pm - &cm * s;
        }
    }
    primitive(target);
}

/// Reduced row echelon form, pivot columns (strictly increasing) and rank.
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>, usize) {
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows).map(|i| integer_row(m.row(i))).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m.cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .min_by_key(|&i| rows[i][col].bits())
        else {
            continue;
        };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            eliminate(row, pivot_row, col);
        }
        pivots.push(col);
        r += 1;
    }
    // back substitution
    for (k, &col) in pivots.iter().enumerate().rev() {
        let (head, tail) = rows.split_at_mut(k);
        let pivot_row = &tail[0];
        for row in head.iter_mut() {
            eliminate(row, pivot_row, col);
        }
    }
    let mut out = RatMatrix::zeros(m.rows, m.cols);
    for (k, &col) in pivots.iter().enumerate() {
        let p = rows[k][col].clone();
        for (j, x) in rows[k].iter().enumerate() {
            if !x.is_zero() {
                out.set(k, j, Rational::new(x.clone(), p.clone()));
            }
        }
    }
    let rank = pivots.len();
    (out, pivots, rank)
}

/// Basis of the right null space, one vector per free column.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<Rational>> {
    let (r, pivots, _) = rref(m);
    let mut out = Vec::new();
    for free in (0..m.cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); m.cols];
        v[free] = Rational::one();
        for (k, &pc) in pivots.iter().enumerate() {
            v[pc] = -r.get(k, free).clone();
        }
        out.push(v);
    }
    out
}

/// One exact solution of `m x = rhs`, free variables set to zero; `None`
/// when the system is inconsistent.
pub fn solve(m: &RatMatrix, rhs: &[Rational]) -> crate::Result<Option<Vec<Rational>>> {
    if rhs.len() != m.rows {
        return Err(Error::DimensionMismatch(format!("rhs of length {} for {} rows", rhs.len(), m.rows)));
    }
    let col = RatMatrix { rows: m.rows, cols: 1, data: rhs.to_vec() };
    let aug = m.hstack(&col)?;
    let (r, pivots, _) = rref(&aug);
    if pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); m.cols];
    for (k, &pc) in pivots.iter().enumerate() {
        x[pc] = r.get(k, m.cols).clone();
    }
    Ok(Some(x))
}

/// `L` with `L m = I`, when `m` has full column rank.
/// `v` scaled to coprime integers with a positive first nonzero entry.
pub fn primitive_vector(v: &[Rational]) -> Vec<Rational> {
    let mut ints = integer_row(v);
    if ints.iter().find(|n| !n.is_zero()).is_some_and(|n| n.is_negative()) {
        ints.iter_mut().for_each(|n| *n = -&*n);
    }
    ints.into_iter().map(Rational::from_integer).collect()
}

pub fn left_inverse(m: &RatMatrix) -> Option<RatMatrix> {
    let aug = m.hstack(&RatMatrix::identity(m.rows)).expect("same row count");
    let (r, pivots, _) = rref(&aug);
    if pivots.iter().take_while(|&&p| p < m.cols).count() < m.cols {
        return None;
    }
    let mut l = RatMatrix::zeros(m.cols, m.rows);
    for k in 0..m.cols {
        for j in 0..m.rows {
            l.set(k, j, r.get(k, m.cols + j).clone());
        }
    }
    Some(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{int, rat};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_i64(rows).unwrap()
    }

    #[test]
    fn rref_examples() {
        let (r, p, k) = rref(&RatMatrix::identity(3));
        assert_eq!((r, p, k), (RatMatrix::identity(3), vec![0, 1, 2], 3));
        let (r, p, k) = rref(&m(&[&[1, 2], &[2, 4]]));
        assert_eq!((r, p, k), (m(&[&[1, 2], &[0, 0]]), vec![0], 1));
        let (r, _, k) = rref(&m(&[&[0, 1], &[1, 0]]));
        assert_eq!((r, k), (RatMatrix::identity(2), 2));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&m(&[&[1, 1]])), vec![vec![int(-1), int(1)]]);
        assert!(kernel_basis(&RatMatrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&m(&[&[1, -3]])), vec![vec![int(3), int(1)]]);
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve(&RatMatrix::identity(2), &[int(5), int(7)]).unwrap(), Some(vec![int(5), int(7)]));
        assert_eq!(solve(&m(&[&[1, 1]]), &[int(2)]).unwrap(), Some(vec![int(2), int(0)]));
        assert_eq!(solve(&m(&[&[1], &[1]]), &[int(1), int(2)]).unwrap(), None);
        assert!(matches!(solve(&m(&[&[1]]), &[int(1), int(2)]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn left_inverse_tall() {
        let a = m(&[&[1, 0], &[2, 1], &[0, 3]]);
        let l = left_inverse(&a).unwrap();
        assert_eq!(l.mul(&a).unwrap(), RatMatrix::identity(2));
        assert!(left_inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn rational_entries() {
        let a = RatMatrix::from_rows(vec![vec![rat(1, 2), rat(1, 3)], vec![rat(1, 4), rat(1, 6)]]).unwrap();
        assert_eq!(rref(&a).2, 1);
        let k = kernel_basis(&a);
        assert_eq!(a.mul_vec(&k[0]).unwrap(), vec![int(0), int(0)]);
    }

    fn small_matrix() -> impl Strategy<Value = RatMatrix> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-4i64..5, 1i64..4), r * c)
                .prop_map(move |v| RatMatrix::new(r, c, v.into_iter().map(|(n, d)| rat(n, d)).collect()).unwrap())
        })
    }

    proptest! {
        #[test]
        fn kernel_is_annihilated(a in small_matrix()) {
            let k = kernel_basis(&a);
            let (_, _, rank) = rref(&a);
            prop_assert_eq!(rank + k.len(), a.cols());
            for v in &k {
                prop_assert!(a.mul_vec(v).unwrap().iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn solve_reproduces_rhs(a in small_matrix(), seed in proptest::collection::vec(-3i64..4, 6)) {
            let x: Vec<Rational> = (0..a.cols()).map(|i| int(seed[i])).collect();
            let b = a.mul_vec(&x).unwrap();
            let y = solve(&a, &b).unwrap().expect("consistent by construction");
            prop_assert_eq!(a.mul_vec(&y).unwrap(), b);
        }

        #[test]
        fn rref_pivots_increase(a in small_matrix()) {
            let (r, p, _) = rref(&a);
            prop_assert!(p.windows(2).all(|w| w[0] < w[1]));
            for (k, &c) in p.iter().enumerate() {
                prop_assert_eq!(r.get(k, c), &Rational::one());
            }
        }
    }
}
