use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of order {p}^{m} exceeds the configured cap of {cap} elements")]
    CapExceeded { p: u32, m: u32, cap: u64 },
    #[error("enumeration of {requested} items exceeds the cap of {cap}")]
    EnumerationCap { requested: u128, cap: u64 },
    #[error("invalid extension degree {0}")]
    InvalidDegree(u32),
    #[error("{divisor} does not divide {value}")]
    NotDivisor { divisor: u64, value: u64 },
    #[error("element does not lie in the subfield of degree {degree}")]
    NotInSubfield { degree: u32 },
    #[error("elements from different field contexts ({left} vs {right})")]
    ContextMismatch { left: u32, right: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("value {value} out of range: {what}")]
    OutOfRange { what: &'static str, value: u64 },
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("exponent set is empty")]
    EmptyDelta,
    #[error("polynomial h is zero")]
    ZeroPolynomial,
    #[error("code has dimension zero")]
    ZeroDimension,
    #[error("code is not Hermitian self-orthogonal (pair {0:?} fails)")]
    NotSelfOrthogonal(Option<(usize, usize)>),
    #[error("invalid modulus for GF({p}^{m}): {reason}")]
    InvalidModulus { p: u32, m: u32, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
