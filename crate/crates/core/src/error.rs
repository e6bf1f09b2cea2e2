use thiserror::Error;

use crate::adhm::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: String, found: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not nilpotent")]
    NotNilpotent,

    #[error("invalid datum: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidDatum(Vec<Violation>),

    #[error("datum is not stable: {0}")]
    Unstable(String),

    #[error("colength mismatch: closure has colength {found}, expected {expected}")]
    ColengthMismatch { expected: usize, found: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("enumeration budget exceeded: estimated {estimate} steps, budget {budget}")]
    BudgetExceeded { estimate: u128, budget: u128 },

    /// A verified post-condition failed. This indicates a bug, not bad input.
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn mismatch(expected: impl ToString, found: impl ToString) -> Self {
        Error::FieldMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
