//! Coefficients of the generating series in the basis of products
//! `ad^{k_n}(a)(b) ... ad^{k_1}(a)(b)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};


use super::{ad_pow, NCSeries, NCWord};
use crate::coeffring::{Coeff, Rational};
use crate::linalg::{left_inverse, RatMatrix};
use crate::Error;

/// How a degree is solved: unit-triangular substitution on the lead words
/// when the structure allows it, otherwise a dense left inverse.
enum Solver {
    Triangular,
    Dense(RatMatrix),
}

/// The expanded basis monomials of one degree.
pub struct GammaBasis {
    degree: usize,
    /// Indices `(k_1, ..., k_n)` in column order.
    indices: Vec<Vec<u32>>,
    columns: Vec<BTreeMap<NCWord, Rational>>,
    /// Column lead words (lexicographically smallest word), same order.
    leads: Vec<NCWord>,
    solver: Solver,
}

fn compositions(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=d {
        for mut rest in compositions(d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl GammaBasis {
    pub fn new(degree: usize) -> Self {
        let mut cols: Vec<(NCWord, Vec<u32>, BTreeMap<NCWord, Rational>)> = Vec::new();
        for comp in compositions(degree) {
            // comp lists k_n+1, ..., k_1+1 from left to right
            let mut m = NCSeries::<Rational>::one(degree);
            for &part in &comp {
                m = m.mul(&ad_pow(part - 1, degree)).expect("same degree bound");
            }
            let col: BTreeMap<NCWord, Rational> = m.iter().map(|(w, c)| (*w, c.clone())).collect();
            let lead = *col.keys().next().expect("nonzero monomial");
            let idx: Vec<u32> = comp.iter().rev().map(|&p| p as u32 - 1).collect();
            cols.push((lead, idx, col));
        }
        cols.sort_by_key(|c| c.0);
        let leads: Vec<NCWord> = cols.iter().map(|c| c.0).collect();
        let indices = cols.iter().map(|c| c.1.clone()).collect();
        let columns: Vec<_> = cols.into_iter().map(|c| c.2).collect();

        let triangular = leads.windows(2).all(|w| w[0] < w[1])
            && columns.iter().zip(&leads).all(|(col, lead)| col.get(lead).is_some_and(|c| c == &crate::int(1)));
        let solver = if triangular {
            Solver::Triangular
        } else {
            let rows: Vec<NCWord> = NCWord::all(degree).collect();
            let mut m = RatMatrix::zeros(rows.len(), columns.len());
            for (j, col) in columns.iter().enumerate() {
                for (w, c) in col {
                    m.set(w.bits() as usize, j, c.clone());
                }
            }
            Solver::Dense(left_inverse(&m).expect("basis monomials are independent"))
        };
        GammaBasis { degree, indices, columns, leads, solver }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn indices(&self) -> &[Vec<u32>] {
        &self.indices
    }

    /// Coordinates of the degree-`d` part of `x` in the monomial basis;
    /// fails if that part is not in their span.
    pub fn coordinates<C: Coeff>(&self, x: &NCSeries<C>) -> crate::Result<Vec<C>> {
        let part: HashMap<NCWord, C> =
            x.degree_part(self.degree).iter().map(|(w, c)| (*w, c.clone())).collect();
        let sol = match &self.solver {
            Solver::Triangular => {
                // residual starts as the target and loses each column as it is solved
                let mut resid = part.clone();
                let mut sol = vec![C::nil(); self.columns.len()];
                for (j, lead) in self.leads.iter().enumerate() {
                    let c = resid.get(lead).cloned().unwrap_or_else(C::nil);
                    if c.is_nil() {
                        continue;
                    }
                    for (w, r) in &self.columns[j] {
                        let e = resid.entry(*w).or_insert_with(C::nil);
                        e.sub_ref(&c.scale(r));
                    }
                    sol[j] = c;
                }
                sol
            }
            Solver::Dense(l) => {
                let rhs: Vec<C> = NCWord::all(self.degree).map(|w| part.get(&w).cloned().unwrap_or_else(C::nil)).collect();
                l.mul_coeff_vec(&rhs)?
            }
        };
        // residual check
        let mut recon: HashMap<NCWord, C> = HashMap::new();
        for (j, c) in sol.iter().enumerate() {
            if c.is_nil() {
                continue;
            }
            for (w, r) in &self.columns[j] {
                recon.entry(*w).or_insert_with(C::nil).add_ref(&c.scale(r));
            }
        }
        for w in part.keys().chain(recon.keys()) {
            let a = part.get(w).cloned().unwrap_or_else(C::nil);
            let b = recon.get(w).cloned().unwrap_or_else(C::nil);
            if a != b {
                return Err(Error::ExtractionInconsistent(format!(
                    "degree-{} component has a part outside the span of the basis monomials (word {w})",
                    self.degree
                )));
            }
        }
        Ok(sol)
    }

    /// All `gamma_idx` of this degree, including the `(-1)^n` sign.
    pub fn gammas<C: Coeff>(&self, x: &NCSeries<C>) -> crate::Result<Vec<(Vec<u32>, C)>> {
        let coords = self.coordinates(x)?;
        Ok(self
            .indices
            .iter()
            .zip(coords)
            .map(|(idx, c)| (idx.clone(), if idx.len() % 2 == 1 { c.neg_ref() } else { c }))
            .collect())
    }

    pub fn position(&self, idx: &[u32]) -> Option<usize> {
        self.indices.iter().position(|i| i == idx)
    }
}

type BasisCache = RwLock<HashMap<usize, Arc<GammaBasis>>>;

/// Shared per-degree bases; built once, read concurrently.
pub fn gamma_basis(degree: usize) -> Arc<GammaBasis> {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.read().expect("basis cache poisoned").get(&degree) {
        return b.clone();
    }
    let b = Arc::new(GammaBasis::new(degree));
    cache.write().expect("basis cache poisoned").entry(degree).or_insert(b).clone()
}

/// Degree `sum (k_i + 1)` of an index.
pub fn index_degree(idx: &[u32]) -> usize {
    idx.iter().map(|&k| k as usize + 1).sum()
}

/// `gamma_idx`, the coefficient of `ad^{k_n}(a)(b) ... ad^{k_1}(a)(b)` in
/// `ainf` times `(-1)^n`.
pub fn extract_gamma<C: Coeff>(idx: &[u32], ainf: &NCSeries<C>) -> crate::Result<C> {
    let d = index_degree(idx);
    if d > ainf.maxdeg() {
        return Err(Error::TruncationOverflow { needed: d, bound: ainf.maxdeg() });
    }
    if idx.is_empty() {
        return Ok(ainf.constant());
    }
    let basis = gamma_basis(d);
    let pos = basis.position(idx).expect("every index of this degree is a column");
    let coords = basis.coordinates(ainf)?;
    let c = coords[pos].clone();
    Ok(if idx.len() % 2 == 1 { c.neg_ref() } else { c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{int, MzvTable};
    use crate::linalg::RatMatrix;

    #[test]
    fn bases_are_triangular() {
        for d in 1..=8 {
            let b = GammaBasis::new(d);
            assert!(matches!(b.solver, Solver::Triangular), "degree {d}");
            assert_eq!(b.indices().len(), 1 << (d - 1));
        }
    }

    #[test]
    fn dense_and_triangular_agree() {
        let t = MzvTable::shipped();
        let a = super::super::build_ainf(5, &t).unwrap();
        let tri = GammaBasis::new(5);
        let mut dense = GammaBasis::new(5);
        let rows: Vec<NCWord> = NCWord::all(5).collect();
        let mut m = RatMatrix::zeros(rows.len(), dense.columns.len());
        for (j, col) in dense.columns.iter().enumerate() {
            for (w, c) in col {
                m.set(w.bits() as usize, j, c.clone());
            }
        }
        dense.solver = Solver::Dense(left_inverse(&m).unwrap());
        assert_eq!(tri.coordinates(&a).unwrap(), dense.coordinates(&a).unwrap());
    }

    #[test]
    fn outside_span_is_rejected() {
        // degree 2 is spanned by ab - ba and bb
        let x = NCSeries::<Rational>::word(NCWord::parse("aa").unwrap(), int(1), 2);
        assert!(matches!(extract_gamma(&[1], &x), Err(Error::ExtractionInconsistent(_))));
    }

    #[test]
    fn simple_coordinates() {
        // -I(1) ad(a)(b) with I(1) = 5
        let x = ad_pow::<Rational>(1, 2).scale(&int(-5));
        assert_eq!(extract_gamma(&[1], &x).unwrap(), int(5));
        assert_eq!(extract_gamma(&[0, 0], &x).unwrap(), int(0));
        assert!(matches!(extract_gamma(&[4], &x), Err(Error::TruncationOverflow { .. })));
    }
}
