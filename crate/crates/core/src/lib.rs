//! Exact decomposition of A-elliptic multiple zeta values into iterated
//! Eisenstein integrals.
//!
//! The pipeline, bottom-up: [`coeffring`] (coefficients over `Q[2 pi i]` and
//! MZV symbols), [`linalg`], [`qseries`] (q/T expansions), [`eisalg`]
//! (Eisenstein series and word algebra), [`ncalg`] (the associator and the
//! constant-term series), [`derlie`] (the derivations `eps_2k`) and
//! [`decomp`], which ties them together.

pub mod coeffring;
pub mod decomp;
pub mod derlie;
pub mod doc;
pub mod eisalg;
pub mod linalg;
pub mod ncalg;
pub mod qseries;
pub mod verify;

pub use coeffring::{bernoulli, int, rat, CoeffElem, MzvTable, Rational};
pub use decomp::{Decomposition, EmzvIndex, Engine};
pub use eisalg::{EPoly, EWord};
pub use qseries::QTSeries;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inconsistent table: {0}")]
    Consistency(String),
    #[error("weight {needed} exceeds the MZV table bound {max_weight}")]
    TableOverflow { needed: u32, max_weight: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("extraction inconsistent: {0}")]
    ExtractionInconsistent(String),
    #[error("q-expansion has T terms: {0}")]
    FourierViolation(String),
    #[error("degree {needed} exceeds the truncation {bound}")]
    TruncationOverflow { needed: usize, bound: usize },
}

impl Error {
    /// Stable name used on the CLI diagnostic stream and across the C ABI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Parse(_) => "ParseError",
            Error::Consistency(_) => "ConsistencyError",
            Error::TableOverflow { .. } => "TableOverflow",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::DegreeMismatch(..) => "DegreeMismatch",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::ExtractionInconsistent(_) => "ExtractionInconsistent",
            Error::FourierViolation(_) => "FourierViolation",
            Error::TruncationOverflow { .. } => "TruncationOverflow",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
