use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operands live on different tower levels, or a coefficient vector
    /// does not match the rank of the level it is attached to.
    #[error("basis mismatch")]
    BasisMismatch,

    #[error("not a curve blowup")]
    NotCurveBlowup,

    #[error("evidence mismatch: {0}")]
    EvidenceMismatch(String),

    #[error("enumeration bound exceeded: {curves} curves (limit {limit})")]
    EnumerationBound { curves: usize, limit: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown basis element {name} at step {step}")]
    UnknownLabel { name: String, step: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Grading(String),

    #[error("root certification failed: {0}")]
    Certification(String),

    #[error("integer overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn precondition(message: impl Into<String>) -> Self {
        Error::Precondition(message.into())
    }
}
