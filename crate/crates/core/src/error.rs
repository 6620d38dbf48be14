use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid symbol {0:?} at byte {1}")]
    InvalidSymbol(char, usize),

    #[error("malformed reduced word: {0}")]
    MalformedReduced(String),

    #[error("discrepancy is undefined for words containing a flexible order (position {0})")]
    FlexibleInDiscrepancy(usize),

    #[error("flexible order at position {0} has no match inside the word")]
    UnmatchedFlexible(usize),

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("stack underflow at step {step}: order {symbol} reached below a finite initial stack")]
    StackUnderflow { step: usize, symbol: char },

    #[error("word is not balanced: reduces to {0}")]
    Unbalanced(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("no balanced word accepted after {attempts} attempts")]
    RejectionExhausted { attempts: u64 },

    #[error("exhaustive enumeration limited to n <= {limit}, requested {requested}")]
    EnumerationLimit { limit: usize, requested: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
