use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A decision procedure was asked about a presentation outside the
    /// range where its answer is known to be correct.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search limit exceeded: {0}")]
    SearchLimit(String),

    #[error("resource bound exceeded: {0}")]
    ResourceLimit(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid system: {0}")]
    InvalidSystem(String),
}

impl Error {
    /// Short machine-readable tag, used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::GeneratorOutOfRange { .. } => "generator_out_of_range",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Inconclusive(_) => "inconclusive",
            Error::Precondition(_) => "precondition",
            Error::SearchLimit(_) => "search_limit",
            Error::ResourceLimit(_) => "resource_limit",
            Error::Degenerate(_) => "degenerate",
            Error::InvalidSystem(_) => "invalid_system",
        }
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
