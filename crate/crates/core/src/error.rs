use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid modulus {0}: expected a prime in [2^60, 2^63)")]
    InvalidModulus(u64),

    #[error("invalid size q = {0}: need q >= 2")]
    InvalidSize(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("index out of range: {0}")]
    InvalidIndex(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("out of scope: {0}")]
    Scope(String),

    #[error("point lies outside the chart domain: {0}")]
    ChartOutOfDomain(String),

    #[error("probe failed: {0}")]
    ProbeFailure(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("value does not fit: {0}")]
    Overflow(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
