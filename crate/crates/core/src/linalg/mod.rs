//! Exact scalars and linear algebra.

pub mod field;
pub mod matrix;
pub mod poly;
pub mod presentation;
pub mod ratfunc;

pub use field::{ExtField, Field, Scalar};
pub use matrix::{Echelon, ExactMatrix, SparseEchelon};
pub use poly::Poly;
pub use presentation::{Presentation, Quotient};
pub use ratfunc::RatFunc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("entries from different fields")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unsupported field {0}")]
    UnsupportedField(String),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// `t`-adic valuation of a rational function; `None` means infinity.
pub fn t_adic_valuation(s: &RatFunc) -> Option<i64> {
    s.val()
}
