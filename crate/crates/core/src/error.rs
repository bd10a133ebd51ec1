use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: String, found: String },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("input vectors are linearly dependent")]
    LinearlyDependent,

    #[error("unknown control qubit `{0}` for a {1}-qubit register")]
    UnknownControl(String, usize),

    #[error("wrong pair classes: expected {expected}, found {found}")]
    WrongPairs { expected: String, found: String },

    #[error("invalid qubit count {0}")]
    InvalidQubitCount(u32),

    #[error("unknown target `{0}`")]
    UnknownTarget(String),

    #[error("target `{name}` expects {expected} parameter(s), got {found}")]
    MissingParams {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("gate {index}: {reason}")]
    InvalidGate { index: usize, reason: String },

    #[error("k_max = {k_max} exceeds the cost guard of {limit}")]
    CostGuard { k_max: usize, limit: usize },

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn dim(expected: impl Into<String>, found: impl Into<String>) -> Self {
        Error::Dimension {
            expected: expected.into(),
            found: found.into(),
        }
    }
}
