use thiserror::Error;

/// Errors raised anywhere in the engine.
///
/// Variants are grouped by how a caller should react: bad input, violated
/// preconditions, or a configured resource limit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not a prime field characteristic: {0}")]
    NotPrime(u64),
    #[error("invalid field specification `{0}` (expected `q` or `gf:P`)")]
    InvalidFieldSpec(String),
    #[error("operands live over different fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("entry {0} is not a canonical element of {1}")]
    InvalidEntry(String, String),
    #[error("denominator vanishes in {0}")]
    ZeroDenominator(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("lattice closure in degree {degree} exceeded the cap of {cap} elements")]
    CapExceeded { degree: usize, cap: usize },
    #[error("degree overflow: {0}")]
    DegreeOverflow(String),
    #[error("size limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("degree bound {bound} is below every generator degree (minimum {min_degree})")]
    BoundTooSmall { bound: usize, min_degree: usize },
}

impl Error {
    /// True for failures caused by configured size limits rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. } | Error::DegreeOverflow(_) | Error::LimitExceeded(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
