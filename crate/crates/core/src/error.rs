use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("weights must satisfy sum of squares = 1 for a spherical direct sum (got {0})")]
    WeightNormalization(f64),

    #[error("infeasible at p = {p} ({stage}): {reason}")]
    Infeasible {
        stage: String,
        p: u64,
        reason: String,
    },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("no prime p <= {p_max} succeeded")]
    Exhausted { p_max: u64 },

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    #[error("malformed document: {0}")]
    MalformedDocument(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown identifier `{name}` at position {position}")]
    UnknownIdentifier { name: String, position: usize },

    #[error("coincident points: {0}")]
    CoincidentPoints(String),

    #[error("repeated indices: {0}")]
    RepeatedIndices(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn infeasible(stage: &str, p: u64, reason: impl Into<String>) -> Self {
        Error::Infeasible {
            stage: stage.to_string(),
            p,
            reason: reason.into(),
        }
    }
}
