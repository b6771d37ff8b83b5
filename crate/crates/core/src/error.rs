use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("invalid alphabet size {0} (need at least 2)")]
    InvalidAlphabet(usize),

    #[error("symbol {symbol} at position {position} is outside alphabet of size {alphabet}")]
    SymbolOutOfRange {
        symbol: u32,
        position: usize,
        alphabet: usize,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("value {value} outside range {range}")]
    OutOfRange { value: f64, range: &'static str },

    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("degenerate range: min {min} >= max {max}")]
    DegenerateRange { min: f64, max: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("index {index} out of bounds ({len} items)")]
    Index { index: usize, len: usize },

    #[error("parse error at row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },

    #[error("domain error in `{expr}`: {msg}")]
    Domain { expr: &'static str, msg: String },

    #[error("vehicle conservation violated at tick {tick}: expected {expected}, found {found}")]
    Conservation {
        tick: u64,
        expected: usize,
        found: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
