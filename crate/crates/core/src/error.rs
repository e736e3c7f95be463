use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid length {0}: block length must be a power of two")]
    InvalidLength(usize),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("invalid channel table: {0}")]
    InvalidTable(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("bound violated: {0}")]
    BoundViolation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("output symbol {symbol} outside alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: usize, alphabet: usize },
    #[error("observation contains NaN at position {0}")]
    NanObservation(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
