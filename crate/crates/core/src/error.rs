use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Variants are grouped by failure class so front ends can map them to
/// distinct exit statuses: parse problems, constraint violations on the
/// requested parameters, and mathematical preconditions that do not hold.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid type: {0}")]
    InvalidType(String),

    #[error("malformed pin collection: {0}")]
    MalformedCollection(String),

    #[error("pinned sets belong to different relations")]
    RelationMismatch,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("not a pin code relation: {0}")]
    NotPinCodeRelation(String),

    #[error("coset enumeration exceeded the budget of {cap} cosets")]
    EnumerationBudget { cap: usize },

    #[error("exact distance refused: {0}")]
    DistanceRefused(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
