use thiserror::Error;

pub use crate::trace_ratio::SolverTrace;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid tensor: {0}")]
    InvalidTensor(String),

    #[error("transform is not conjugate-symmetric: deviation {deviation:e} exceeds {tolerance:e}")]
    SymmetryViolation { deviation: f64, tolerance: f64 },

    #[error("block-circulant oracle refuses {rows} rows (limit {limit})")]
    OracleTooLarge { rows: usize, limit: usize },

    #[error("tensor is not f-symmetric: ||A - A^T|| = {deviation:e}")]
    NotFSymmetric { deviation: f64 },

    #[error("tensor is not positive definite (transform slice {slice})")]
    NotPositiveDefinite { slice: usize },

    #[error("eigensolver did not converge on transform slice {slice}")]
    SliceEigFailure { slice: usize },

    #[error("transform slice {slice} has {found} non-zero eigenvalues, {needed} requested")]
    InsufficientNonzero {
        slice: usize,
        found: usize,
        needed: usize,
    },

    #[error("basis is not f-orthogonal: ||V^T*V - I|| = {deviation:e}")]
    NotFOrthogonal { deviation: f64 },

    #[error("denominator trace {value:e} is degenerate")]
    DegenerateDenominator { value: f64 },

    #[error("Newton iteration did not converge after {} iterations", .trace.iterations)]
    NotConverged { trace: Box<SolverTrace> },

    #[error("ill-posed trace-ratio problem: {0}")]
    IllPosed(String),

    #[error("label count {found} does not match sample count {expected}")]
    LabelMismatch { expected: usize, found: usize },

    #[error("invalid labels: {0}")]
    InvalidLabels(String),

    #[error("k = {k} must satisfy 1 <= k < {samples}")]
    BadK { k: usize, samples: usize },

    #[error("vertex {vertex} has zero degree in transform slice {slice}")]
    SingularDegree { slice: usize, vertex: usize },

    #[error("Gram matrix of sample {sample} in slice {slice} is singular")]
    SingularGram { slice: usize, sample: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("bad magic {0:?}, expected \"T3B1\"")]
    BadMagic([u8; 4]),

    #[error("truncated tensor file: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors caused by malformed inputs or parameters rather than by the
    /// numerics. The command-line front end maps these to exit code 2.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::ShapeMismatch(_)
                | Error::InvalidTensor(_)
                | Error::LabelMismatch { .. }
                | Error::InvalidLabels(_)
                | Error::BadK { .. }
                | Error::InvalidParameter(_)
                | Error::BadMagic(_)
                | Error::Truncated { .. }
                | Error::OracleTooLarge { .. }
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}
