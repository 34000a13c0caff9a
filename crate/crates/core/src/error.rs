use thiserror::Error;

/// Errors raised by the library.
///
/// `Data` and `Precondition` errors come from bad input; `Internal` means an
/// invariant that should hold for every braid word was observed to fail.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("token {index} ({token:?}): {reason}")]
    Parse {
        index: usize,
        token: String,
        reason: String,
    },

    #[error("invalid data: {0}")]
    Data(String),

    #[error("strand count mismatch: {left} vs {right}")]
    StrandCountMismatch { left: usize, right: usize },

    #[error("move {kind} at position {pos} is not applicable: {reason}")]
    Inapplicable {
        kind: &'static str,
        pos: usize,
        reason: String,
    },

    #[error("move {index} of derivation: {source}")]
    InvalidStep {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("word must be positive: {0}")]
    NonPositive(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
