use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("index {index} out of range for rank {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not skew-symmetrizable: {0}")]
    NotSkewSymmetrizable(String),
    #[error("matrix must be square and nonempty")]
    NotSquare,
    #[error("duplicate row label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("expected an integer, found {0}")]
    NonIntegral(String),
    #[error("invalid rank-2 sign pattern (a, b) = ({a}, {b})")]
    InvalidSignPattern { a: String, b: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("g-vector recurrences disagree at path {path:?}, index {index}")]
    RecurrenceMismatch { path: Vec<usize>, index: usize },
    #[error("exchange relation did not produce a Laurent polynomial at step {0}")]
    NotLaurent(usize),
    #[error("no cone found for row {row:?} at depth {depth}; candidates: {candidates:?}")]
    NoCone {
        row: String,
        depth: usize,
        candidates: Vec<Vec<String>>,
    },
    #[error("row {0:?} is not in the span of its cone")]
    Inconsistent(String),
    #[error("row {row:?} has negative coefficient on {label:?}")]
    NegativeCoefficient { row: String, label: String },
    #[error("row {row:?} has fractional coefficient {value} on {label:?}")]
    Fractional {
        row: String,
        label: String,
        value: String,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
