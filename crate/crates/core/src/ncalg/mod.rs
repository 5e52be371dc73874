//! Truncated noncommutative series in `a`, `b`: the associator, the
//! constant-term series `A_inf` and extraction of its coefficients.

mod assoc;
mod derivation;
mod extract;
mod series;
mod words;

pub use assoc::{build_ainf, build_phi, build_t, build_ytilde, shuffle_regularize, Regularizer};
pub use derivation::Derivation;
pub use extract::{extract_gamma, gamma_basis, index_degree, GammaBasis};
pub use series::{ad_pow, is_lie, NCSeries};
pub use words::{BinWord, NCWord, MAX_WORD_LEN};
