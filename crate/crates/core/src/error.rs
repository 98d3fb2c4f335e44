use thiserror::Error;

/// Errors produced by the braidhash library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("index {index} out of range (group has {size} elements)")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("parse error at token {position} ({token:?}): {reason}")]
    Parse {
        position: usize,
        token: String,
        reason: String,
    },

    #[error("search refused: {0}")]
    Refused(String),

    #[error("resource limit: {what} would need {attempted} entries (limit {limit})")]
    ResourceLimit {
        what: String,
        attempted: u64,
        limit: u64,
    },

    #[error("corrupt table{}: {reason}", entry.map(|e| format!(" at entry {e}")).unwrap_or_default())]
    CorruptTable { entry: Option<usize>, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
