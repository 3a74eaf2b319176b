use thiserror::Error;

/// Errors produced by the partitioning library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid rectangle: {0}")]
    InvalidRect(String),

    #[error("n >= 1 required: the area list is empty")]
    EmptyAreas,

    #[error("area {index} is {value}; every area must be positive and finite")]
    InvalidArea { index: usize, value: f64 },

    #[error("areas sum to {sum} but the container has area {expected}")]
    AreaSumMismatch { sum: f64, expected: f64 },

    #[error("split area {a1} is outside (0, {area})")]
    SplitOutOfRange { a1: f64, area: f64 },

    #[error("reduction needs more than {min} entries, got {len}")]
    TooFewEntries { len: usize, min: usize },

    #[error("instance has {n} areas, exact search is limited to {max}")]
    OracleTooLarge { n: usize, max: usize },

    #[error("malformed layout tree: {0}")]
    MalformedTree(String),

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}
