use thiserror::Error;

/// Errors raised by problem construction, projections and solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CfpError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("normal vector of an affine constraint must be nonzero")]
    ZeroNormal,

    #[error("empty box: lower bound exceeds upper bound at coordinate {index}")]
    EmptyBox { index: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("sublevel set is empty (infimum of the function is positive)")]
    EmptySublevelSet,

    #[error("root finding did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("proximity unavailable: function {index} has no exact projection")]
    ProximityUnavailable { index: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("problem must contain at least one function")]
    EmptyProblem,

    #[error("iterate diverged at iteration {iteration} (norm {norm:e})")]
    Diverged { iteration: usize, norm: f64 },

    #[error("trace has {len} rows, window of {window} requested")]
    TraceTooShort { len: usize, window: usize },

    #[error("rank-deficient matrix after {attempts} attempts")]
    RankDeficient { attempts: usize },

    #[error("schema error at {field}: {message}")]
    Schema { field: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CfpError {
    fn from(err: std::io::Error) -> Self {
        CfpError::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CfpError>;
