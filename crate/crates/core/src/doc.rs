//! Versioned JSON documents for results. Coefficients are exact strings in
//! the coefficient syntax (`"-1/120*pi"`, `"-3*pi*z3"`), words and indices
//! are integer arrays.

use serde::{Deserialize, Serialize};

use crate::coeffring::{CoeffElem, Rational};
use crate::decomp::{Decomposition, EmzvIndex};
use crate::derlie::RelationSet;
use crate::eisalg::{EPoly, EWord};
use crate::qseries::QTSeries;
use crate::Error;

pub const DECOMPOSITION_SCHEMA: &str = "emzv/decomposition/v1";
pub const QEXP_SCHEMA: &str = "emzv/qexp/v1";
pub const EMZV_RELATIONS_SCHEMA: &str = "emzv/relations/v1";
pub const LIE_RELATIONS_SCHEMA: &str = "emzv/lie-relations/v1";
pub const MEMBERSHIP_SCHEMA: &str = "emzv/membership/v1";
pub const VERIFY_SCHEMA: &str = "emzv/verify/v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WordTerm {
    pub word: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionDoc {
    pub schema: String,
    pub index: Vec<u32>,
    pub gamma: String,
    /// Nonconstant terms, in word order.
    pub terms: Vec<WordTerm>,
    pub nc_degree: usize,
}

impl DecompositionDoc {
    pub fn new(d: &Decomposition) -> Self {
        DecompositionDoc {
            schema: DECOMPOSITION_SCHEMA.into(),
            index: d.index.entries().to_vec(),
            gamma: d.gamma.to_string(),
            terms: d
                .epoly
                .without_constant()
                .iter()
                .map(|(w, c)| WordTerm { word: w.letters().to_vec(), coeff: c.to_string() })
                .collect(),
            nc_degree: d.nc_degree,
        }
    }

    pub fn to_decomposition(&self) -> crate::Result<Decomposition> {
        check_schema(&self.schema, DECOMPOSITION_SCHEMA)?;
        let gamma = CoeffElem::parse(&self.gamma)?;
        let mut epoly = EPoly::constant(gamma.clone());
        for t in &self.terms {
            if t.word.is_empty() {
                return Err(Error::Parse("constant term belongs in gamma".into()));
            }
            let w = EWord::new(t.word.clone()).ok_or_else(|| Error::Parse(format!("odd letter in {:?}", t.word)))?;
            epoly.add_term(w, &CoeffElem::parse(&t.coeff)?);
        }
        Ok(Decomposition { index: EmzvIndex::new(self.index.clone()), epoly, gamma, nc_degree: self.nc_degree })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QTerm {
    pub q: u32,
    pub t: u32,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QExpDoc {
    pub schema: String,
    pub index: Vec<u32>,
    pub order: usize,
    pub terms: Vec<QTerm>,
}

impl QExpDoc {
    pub fn new(index: &EmzvIndex, s: &QTSeries) -> Self {
        QExpDoc {
            schema: QEXP_SCHEMA.into(),
            index: index.entries().to_vec(),
            order: s.order(),
            terms: s.iter().map(|(&(q, t), c)| QTerm { q, t, coeff: c.to_string() }).collect(),
        }
    }

    pub fn to_series(&self) -> crate::Result<QTSeries> {
        check_schema(&self.schema, QEXP_SCHEMA)?;
        let mut s = QTSeries::zero(self.order);
        for t in &self.terms {
            s.add_term(t.q, t.t, &CoeffElem::parse(&t.coeff)?);
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmzvRelationsDoc {
    pub schema: String,
    pub indices: Vec<Vec<u32>>,
    /// Constants adjoined as extra columns after the indices.
    pub adjoined: Vec<String>,
    pub kernel: Vec<Vec<String>>,
}

impl EmzvRelationsDoc {
    pub fn new(indices: &[EmzvIndex], adjoined: &[CoeffElem], kernel: &[Vec<Rational>]) -> Self {
        EmzvRelationsDoc {
            schema: EMZV_RELATIONS_SCHEMA.into(),
            indices: indices.iter().map(|i| i.entries().to_vec()).collect(),
            adjoined: adjoined.iter().map(|c| c.to_string()).collect(),
            kernel: render_vectors(kernel),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieRelationsDoc {
    pub schema: String,
    pub weight: u32,
    pub depth: usize,
    pub lie_degree: usize,
    pub candidates: Vec<String>,
    pub kernel: Vec<Vec<String>>,
}

impl LieRelationsDoc {
    pub fn new(r: &RelationSet) -> Self {
        LieRelationsDoc {
            schema: LIE_RELATIONS_SCHEMA.into(),
            weight: r.weight,
            depth: r.depth,
            lie_degree: r.lie_degree,
            candidates: r.candidates.iter().map(|c| c.to_string()).collect(),
            kernel: render_vectors(&r.kernel),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentResult {
    pub length: usize,
    pub weight: u32,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipDoc {
    pub schema: String,
    pub input: String,
    /// `None` when the test was not requested.
    pub uu_dual: Option<Vec<ComponentResult>>,
    pub fourier: Option<bool>,
    pub e0_residual: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyDoc {
    pub schema: String,
    pub checks: Vec<CheckDoc>,
}

fn render_vectors(v: &[Vec<Rational>]) -> Vec<Vec<String>> {
    v.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect()
}

fn check_schema(found: &str, expected: &str) -> crate::Result<()> {
    if found != expected {
        return Err(Error::Parse(format!("schema {found:?}, expected {expected:?}")));
    }
    Ok(())
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

pub fn from_json<'a, T: Deserialize<'a>>(s: &'a str) -> crate::Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::MzvTable;
    use crate::decomp::Engine;

    #[test]
    fn decomposition_roundtrip() {
        let e = Engine::new(MzvTable::shipped());
        for s in ["0,1,0,0", "2,0,0", "3,0", ""] {
            let d = e.decompose(&EmzvIndex::parse(s).unwrap()).unwrap();
            let json = to_json(&DecompositionDoc::new(&d));
            let doc: DecompositionDoc = from_json(&json).unwrap();
            assert_eq!(doc.to_decomposition().unwrap(), d);
            assert_eq!(to_json(&DecompositionDoc::new(&doc.to_decomposition().unwrap())), json);
        }
    }

    #[test]
    fn schema_mismatch() {
        let mut doc = DecompositionDoc::new(&Engine::new(MzvTable::shipped()).decompose(&EmzvIndex::new(vec![2])).unwrap());
        doc.schema = "other".into();
        assert!(doc.to_decomposition().is_err());
        assert!(from_json::<DecompositionDoc>("{").is_err());
    }

    #[test]
    fn qexp_roundtrip() {
        let e = Engine::new(MzvTable::shipped());
        let i = EmzvIndex::new(vec![3, 0]);
        let s = e.emzv_qexp(&i, 6).unwrap();
        let doc: QExpDoc = from_json(&to_json(&QExpDoc::new(&i, &s))).unwrap();
        assert_eq!(doc.to_series().unwrap(), s);
    }
}
