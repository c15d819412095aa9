use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vector length {len} is not a power of two")]
    NotPowerOfTwo { len: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{what} = {value} exceeds the limit of {limit}")]
    GuardExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("weight {weight} out of range for n = {n}")]
    WeightOutOfRange { weight: usize, n: usize },

    #[error("bentness fails at x = {x}: sigma_hat = {value}")]
    BentnessViolation { x: usize, value: f64 },

    #[error("bentness fails for even n (n = {n})")]
    EvenDimension { n: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("query layout has no entry for enlarged coordinate {index}")]
    MissingLayoutEntry { index: usize },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}
