//! Relations among brackets of the `eps_2k` and the ideal they generate in
//! the tensor algebra on the letters `e_2k`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};

use super::{is_lyndon, LieExpr};
use crate::coeffring::Rational;
use crate::eisalg::{EPoly, EWord};
use crate::linalg::{kernel_basis, primitive_vector, RatMatrix};
use crate::ncalg::NCWord;
use crate::Error;

/// Kernel of the evaluation map on a list of candidate brackets.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationSet {
    pub weight: u32,
    pub depth: usize,
    pub lie_degree: usize,
    pub candidates: Vec<LieExpr>,
    /// Primitive integer vectors, in echelon form.
    pub kernel: Vec<Vec<Rational>>,
}

impl RelationSet {
    /// Each kernel vector as a combination of the candidates.
    pub fn relations(&self) -> Vec<Vec<(LieExpr, Rational)>> {
        self.kernel
            .iter()
            .map(|v| {
                self.candidates.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(e, c)| (e.clone(), c.clone())).collect()
            })
            .collect()
    }
}

/// All sequences of even letters `>= min_letter` with the given length and sum.
pub(crate) fn ewords(len: usize, sum: u32, min_letter: u32) -> Vec<Vec<u32>> {
    if len == 0 {
        return if sum == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut k = min_letter;
    while k + min_letter * (len as u32 - 1) <= sum {
        for mut rest in ewords(len - 1, sum - k, min_letter) {
            rest.insert(0, k);
            out.push(rest);
        }
        k += 2;
    }
    out
}

/// Standard bracketings of the Lyndon words in the letters `e_2k`,
/// `2k >= min_letter`, with `depth` letters summing to `weight`.
pub fn lyndon_candidates(weight: u32, depth: usize, min_letter: u32) -> Vec<LieExpr> {
    let min_letter = min_letter + min_letter % 2;
    ewords(depth, weight, min_letter).into_iter().filter(|w| is_lyndon(w)).map(|w| LieExpr::from_lyndon(&w)).collect()
}

/// Linear relations among the given brackets, as operators on the free Lie
/// algebra. Derivations are determined by the generator images, which
/// have degree `weight + 1`, so this is exact once `lie_degree` covers them.
pub fn find_relations_among(candidates: &[LieExpr], lie_degree: usize) -> crate::Result<RelationSet> {
    let weight = candidates.first().map_or(0, |e| e.weight());
    let depth = candidates.first().map_or(0, |e| e.depth());
    if candidates.iter().any(|e| e.weight() != weight || e.depth() != depth) {
        return Err(Error::PreconditionViolated("candidates must share weight and depth".into()));
    }
    let needed = weight as usize + 1;
    if needed > lie_degree {
        return Err(Error::TruncationOverflow { needed, bound: lie_degree });
    }
    let mut rows: BTreeMap<(bool, NCWord), Vec<Rational>> = BTreeMap::new();
    for (j, e) in candidates.iter().enumerate() {
        let d = e.derivation()?;
        for g in [false, true] {
            for (w, c) in d.image(g, needed).iter() {
                rows.entry((g, *w)).or_insert_with(|| vec![Rational::zero(); candidates.len()])[j] = c.clone();
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..candidates.len())
            .map(|j| (0..candidates.len()).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect()
    } else {
        kernel_basis(&RatMatrix::from_rows(rows.into_values().collect())?)
    };
    Ok(RelationSet {
        weight,
        depth,
        lie_degree,
        candidates: candidates.to_vec(),
        kernel: kernel.iter().map(|v| primitive_vector(v)).collect(),
    })
}

/// All relations of the given weight and depth (every letter allowed).
pub fn find_lie_relations(weight: u32, depth: usize, lie_degree: usize) -> crate::Result<RelationSet> {
    find_relations_among(&lyndon_candidates(weight, depth, 0), lie_degree)
}

/// The relations of [`find_lie_relations`] expanded as tensors, cached.
pub fn lie_relations(weight: u32, depth: usize) -> crate::Result<Arc<Vec<BTreeMap<EWord, Rational>>>> {
    type Cache = RwLock<HashMap<(u32, usize), Arc<Vec<BTreeMap<EWord, Rational>>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.read().unwrap().get(&(weight, depth)) {
        return Ok(r.clone());
    }
    let set = find_lie_relations(weight, depth, weight as usize + 1)?;
    let mut out = Vec::new();
    for rel in set.relations() {
        let mut t = BTreeMap::<EWord, Rational>::new();
        for (e, c) in rel {
            for (w, d) in e.expand() {
                *t.entry(w).or_default() += &c * d;
            }
        }
        t.retain(|_, c| !c.is_zero());
        out.push(t);
    }
    let out = Arc::new(out);
    cache.write().unwrap().insert((weight, depth), out.clone());
    Ok(out)
}

/// Spanning set of the degree-`(depth, weight)` part of the two-sided ideal
/// generated by all relations of lower or equal degree.
fn ideal_elements(depth: usize, weight: u32, lie_degree: usize) -> crate::Result<Vec<BTreeMap<EWord, Rational>>> {
    if weight as usize + 1 > lie_degree {
        return Err(Error::TruncationOverflow { needed: weight as usize + 1, bound: lie_degree });
    }
    let mut out = Vec::new();
    for p in 2..=depth {
        for s in (0..=weight).step_by(2) {
            let rels = lie_relations(s, p)?;
            if rels.is_empty() {
                continue;
            }
            let (lp, ls) = (depth - p, weight - s);
            for ul in 0..=lp {
                for us in (0..=ls).step_by(2) {
                    let us_words = ewords(ul, us, 0);
                    let vs_words = ewords(lp - ul, ls - us, 0);
                    for u in &us_words {
                        for v in &vs_words {
                            let (u, v) = (EWord::new(u.clone()).unwrap(), EWord::new(v.clone()).unwrap());
                            for r in rels.iter() {
                                out.push(r.iter().map(|(w, c)| (u.concat(w).concat(&v), c.clone())).collect());
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Per homogeneous component `(length, letter sum)`: whether `x`, read as
/// a functional on words (coefficientwise in the MZV monomials), kills the
/// ideal generated by the relations among the `eps_2k`.
pub fn uu_dual_membership(x: &EPoly, lie_degree: usize) -> crate::Result<BTreeMap<(usize, u32), bool>> {
    let mut out = BTreeMap::new();
    for ((p, s), comp) in x.components() {
        if p < 2 {
            out.insert((p, s), true);
            continue;
        }
        let ideal = ideal_elements(p, s, lie_degree)?;
        let coords = crate::eisalg::coordinates(&comp);
        let mut by_monomial: BTreeMap<_, BTreeMap<EWord, Rational>> = BTreeMap::new();
        for ((w, m), c) in coords {
            by_monomial.entry(m).or_default().insert(w, c);
        }
        let ok = by_monomial.values().all(|f| {
            ideal.iter().all(|r| {
                let mut acc = Rational::zero();
                for (w, c) in r {
                    if let Some(l) = f.get(w) {
                        acc += l * c;
                    }
                }
                acc.is_zero()
            })
        });
        out.insert((p, s), ok);
    }
    Ok(out)
}

/// Basis of the functionals supported on `words` (all of one degree) that
/// kill the relation ideal, as coefficient vectors along `words`.
pub fn annihilator_in(words: &[EWord], lie_degree: usize) -> crate::Result<Vec<Vec<Rational>>> {
    let Some(first) = words.first() else { return Ok(vec![]) };
    let (p, s) = (first.len(), first.letter_sum());
    if words.iter().any(|w| w.len() != p || w.letter_sum() != s) {
        return Err(Error::PreconditionViolated("words must share length and letter sum".into()));
    }
    let rows: Vec<Vec<Rational>> = ideal_elements(p, s, lie_degree)?
        .iter()
        .map(|r| words.iter().map(|w| r.get(w).cloned().unwrap_or_default()).collect::<Vec<_>>())
        .filter(|row| row.iter().any(|c| !c.is_zero()))
        .collect();
    if rows.is_empty() {
        return Ok((0..words.len())
            .map(|j| (0..words.len()).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect());
    }
    Ok(kernel_basis(&RatMatrix::from_rows(rows)?).iter().map(|v| primitive_vector(v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{int, CoeffElem};
    use crate::linalg::rref;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&n| int(n)).collect()
    }

    fn exprs(s: &[&str]) -> Vec<LieExpr> {
        s.iter().map(|e| LieExpr::parse(e).unwrap()).collect()
    }

    #[test]
    fn candidates() {
        assert_eq!(lyndon_candidates(14, 2, 2), exprs(&["[e2,e12]", "[e4,e10]", "[e6,e8]"]));
        assert_eq!(lyndon_candidates(4, 3, 0).len(), 2);
        assert!(lyndon_candidates(4, 2, 4).is_empty());
    }

    #[test]
    fn eps2_commutes() {
        for k in 0..=5 {
            let c = vec![LieExpr::bracket(LieExpr::Letter(2 * k), LieExpr::Letter(2))];
            let r = find_relations_among(&c, 2 * k as usize + 6).unwrap();
            assert_eq!(r.kernel, vec![ints(&[1])], "k = {k}");
        }
    }

    #[test]
    fn ihara_takao() {
        let c = exprs(&["[e10,e4]", "[e8,e6]"]);
        for dl in [15, 16, 18] {
            let r = find_relations_among(&c, dl).unwrap();
            assert_eq!(r.kernel, vec![ints(&[1, -3])]);
        }
        assert!(matches!(find_relations_among(&c, 14), Err(Error::TruncationOverflow { .. })));
        let all = find_lie_relations(14, 2, 16).unwrap();
        assert_eq!(all.kernel.len(), 2);
    }

    #[test]
    fn no_relations_in_low_weight_depth_two_without_e2() {
        let r = find_relations_among(&lyndon_candidates(12, 2, 4), 14).unwrap();
        assert!(r.kernel.is_empty());
    }

    fn ep(s: &str) -> EPoly {
        EPoly::parse(s).unwrap()
    }

    #[test]
    fn membership_examples() {
        let m = uu_dual_membership(&ep("e(2,4) - e(4,2)"), 16).unwrap();
        assert_eq!(m.values().collect::<Vec<_>>(), vec![&false]);
        let m = uu_dual_membership(&ep("e(2,4) + e(4,2)"), 16).unwrap();
        assert!(m.values().all(|b| *b));
        let m = uu_dual_membership(&ep("3*e(10,4) + e(8,6)"), 16).unwrap();
        assert!(m.values().all(|b| *b));
        let m = uu_dual_membership(&ep("e(10,4)"), 16).unwrap();
        assert!(!m.values().all(|b| *b));
        // coefficients are tested per MZV monomial
        let m = uu_dual_membership(&ep("pi*e(2,4) + z3*e(4,2)"), 16).unwrap();
        assert!(!m.values().all(|b| *b));
        let _ = CoeffElem::one();
    }

    #[test]
    fn w_subspace() {
        let words: Vec<EWord> = [[10, 4], [4, 10], [8, 6], [6, 8]].iter().map(|w| EWord::new(w.to_vec()).unwrap()).collect();
        let ann = annihilator_in(&words, 16).unwrap();
        assert_eq!(ann.len(), 3);
        // e10 sh e4, e8 sh e6, 3 e10e4 + e8e6
        let expected = vec![ints(&[1, 1, 0, 0]), ints(&[0, 0, 1, 1]), ints(&[3, 0, 1, 0])];
        let (_, _, r1) = rref(&RatMatrix::from_rows(ann.clone()).unwrap());
        let (_, _, r2) = rref(&RatMatrix::from_rows(expected.clone()).unwrap());
        let (_, _, r3) = rref(&RatMatrix::from_rows([ann, expected].concat()).unwrap());
        assert_eq!((r1, r2, r3), (3, 3, 3));
    }
}
