use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: asymmetry {asymmetry:e} exceeds {limit:e}")]
    NotHermitian { asymmetry: f64, limit: f64 },

    #[error("matrix is not positive definite: lambda_min = {min:e}, lambda_max = {max:e}")]
    NotPositiveDefinite { min: f64, max: f64 },

    #[error("matrix is not positive semidefinite: lambda_min = {min:e}")]
    NotPositiveSemidefinite { min: f64 },

    #[error("Jacobi eigensolver did not converge within {0} rotations")]
    NoConvergence(usize),

    #[error("matrix dimension must be at least 1")]
    EmptyDimension,

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("{what}: residual {residual:e} exceeds {limit:e}")]
    NumericalFailure {
        what: &'static str,
        residual: f64,
        limit: f64,
    },

    #[error("vector length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("entry {index} is not strictly positive ({value:e})")]
    NonPositiveEntry { index: usize, value: f64 },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("certificate `{0}` is not verified")]
    CertificateUnverified(String),

    #[error("floating replay disagrees with certificate `{name}`: {detail}")]
    IntegrationMismatch { name: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
