use thiserror::Error;

/// Coarse classification used by frontends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Data,
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("edge list is empty")]
    EmptyGraph,

    #[error("negative weight {weight} on edge ({u}, {v})")]
    NegativeWeight { u: String, v: String, weight: f64 },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("vertex {vertex} is isolated (degree 0); use a smoothed estimator (tau > 0) instead")]
    IsolatedVertex { vertex: String },

    #[error("vertex {vertex} has zero probability; build the kernel from smoothed estimates")]
    ZeroProbability { vertex: String },

    #[error("regularization parameter must be nonnegative, got {0}")]
    NegativeTau(f64),

    #[error("teleport weight must lie in [0, 1], got {0}")]
    InvalidAlpha(f64),

    #[error("data-driven tau is undefined: n*sum(d^2) - N^2 = {denominator}")]
    DegenerateTau { denominator: f64 },

    #[error("vertex {vertex} has non-integer degree {degree}; frequency-of-frequencies needs whole counts")]
    NonIntegerDegree { vertex: String, degree: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("basis does not match the supplied probability measure: {0}")]
    BasisMismatch(String),

    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("vertex index {0} out of range")]
    InvalidVertex(usize),

    #[error("{0}")]
    Numerical(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Io(_) | Error::Parse { .. } => ErrorKind::Data,
            Error::NotPositiveDefinite | Error::Numerical(_) | Error::DegenerateTau { .. } => {
                ErrorKind::Numerical
            }
            _ => ErrorKind::Validation,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
