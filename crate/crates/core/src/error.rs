use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument must be positive: {0}")]
    NonPositiveArgument(String),
    #[error("cannot add pi powers with different exponents ({left}/2 and {right}/2)")]
    PiExponentMismatch { left: i64, right: i64 },
    #[error("dimension mismatch: {0}")]
    MismatchedDimensions(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),
    #[error("superspace has no bosonic variables (m = 0)")]
    PurelyFermionic,
    #[error("superdimension M = m - 2n must be positive (m = {m}, n = {n})")]
    NonPositiveSuperDimension { m: usize, n: usize },
    #[error("degree too large: {0}")]
    DegreeTooLarge(String),
    #[error("index constraint violated: {0}")]
    IndexConstraintViolated(String),
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("radial profile not captured by the basis (tail mass {tail:.3e})")]
    BasisProjectionIncomplete { tail: f64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
