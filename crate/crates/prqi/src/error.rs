use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The smallest pivot of a shifted factorization fell below 1e-14 times
    /// the largest pivot. Iteration drivers treat this as convergence of the
    /// shift to an eigenvalue; `direction` carries the back-substituted
    /// solution when it is finite and usable as an eigenvector refinement.
    #[error("shifted system is numerically singular")]
    NearSingular { direction: Option<Vec<Complex64>> },

    #[error("shift equals an eigenvalue: inverse iteration cannot start")]
    ShiftIsEigenvalue,

    #[error("matrix is not positive definite (pivot {pivot} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("convergence order is not estimable: {0}")]
    NotEstimable(&'static str),

    #[error("Jacobi eigensolver failed to converge within {0} sweeps")]
    OracleNoConvergence(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
