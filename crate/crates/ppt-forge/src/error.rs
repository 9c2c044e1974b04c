//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide error enumeration.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix entry was NaN or infinite.
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// Two objects that must agree in dimension do not.
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// A matrix handed to `HermitianOperator::new` was too far from Hermitian.
    #[error("matrix of dimension {dim} is not Hermitian: defect {defect:.3e} exceeds {bound:.3e}")]
    NotHermitian { dim: usize, defect: f64, bound: f64 },

    /// The tridiagonal QL iteration did not converge.
    #[error("eigensolver failed to converge for a {dim}x{dim} matrix after {iterations} iterations")]
    EigNonConvergence { dim: usize, iterations: usize },

    /// A party label was not found in the relevant tensor space.
    #[error("unknown party label '{label}'")]
    UnknownParty { label: String },

    /// Group closure exceeded its element cap.
    #[error("group closure exceeded cap {cap}; the generators likely span a continuous group")]
    GroupCapExceeded { cap: usize },

    /// A parameter failed validation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An unknown certificate name was requested.
    #[error("unknown certificate '{0}'")]
    UnknownCertificate(String),

    /// The genuineness precondition of the x0 construction failed.
    #[error("genuineness precondition violated: the {which} state is PPT across the '{label}' cut")]
    NotGenuine { label: String, which: &'static str },

    /// A one-dimensional dual-parameter search failed.
    #[error("dual search failed: {0}")]
    SearchFailure(String),

    /// Random sampling could not produce enough admissible samples.
    #[error("sampling failed: {0}; try a different seed")]
    Sampling(String),

    /// I/O failure while reading or writing artifacts.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// JSON (de)serialization failure.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
