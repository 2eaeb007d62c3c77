use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite integrand sample at grid point {index} (x = {x})")]
    NonFiniteSample { index: usize, x: f64 },

    #[error("Airy argument {z} outside the validity window |z| <= {limit}")]
    AiryDomain { z: f64, limit: f64 },

    #[error("failed to bracket Airy root n = {0}")]
    RootBracket(usize),

    #[error("Hermite function overflow at n = {n}, xi = {xi}")]
    HermiteOverflow { n: usize, xi: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("negative evolution time t = {0}")]
    NegativeTime(f64),

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("density matrix invariant violated: {0}")]
    InvariantViolation(String),

    #[error("numerically singular matching matrix at k = {0}")]
    SingularMatching(f64),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("current sign violation fraction {0:.3e} exceeds 0.05")]
    SignViolation(f64),

    #[error("observable has imaginary residue {0:.3e}")]
    NonRealObservable(f64),

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
