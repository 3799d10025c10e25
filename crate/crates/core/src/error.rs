use thiserror::Error;

use crate::syntax::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A configured size cap was exceeded.
    #[error("{what} is {actual}, which exceeds the cap of {cap}")]
    Resource {
        what: &'static str,
        actual: usize,
        cap: usize,
    },

    #[error("unknown propositional constant `{0}`")]
    UnknownConstant(String),

    #[error("duplicate propositional constant `{0}` in vocabulary")]
    DuplicateConstant(String),

    #[error("vocabulary mismatch: {0}")]
    VocabularyMismatch(String),

    #[error("sequence kind mismatch: {left} vs {right}")]
    KindMismatch { left: String, right: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid knowledge base: {0}")]
    Invalid(String),

    /// Conditioning on a class of zero total weight.
    #[error("conditional probability undefined: the last class has zero weight")]
    UndefinedConditional,

    /// Thresholding rejected a condition.
    #[error("condition {step} (`{formula}`) is below threshold: ratio {ratio} exceeds epsilon {epsilon}")]
    BelowThreshold {
        step: usize,
        formula: String,
        ratio: String,
        epsilon: String,
    },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("malformed sequence document: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn resource(what: &'static str, actual: usize, cap: usize) -> Self {
        Error::Resource { what, actual, cap }
    }
}
