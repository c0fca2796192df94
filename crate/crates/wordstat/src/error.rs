//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("letter {0:?} is not in the alphabet")]
    UnknownLetter(char),
    #[error("alphabet has a repeated letter {0:?}")]
    DuplicateLetter(char),
    #[error("alphabet must contain at least one letter")]
    EmptyAlphabet,
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("composition mismatch: {0}")]
    CompositionMismatch(String),
    #[error("text too short: {0}")]
    TooShort(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),
    #[error("subspace is not contained in the enclosing space")]
    NotContained,
    #[error("operator does not preserve the subspace")]
    NotInvariant,
    #[error("spectrum does not split over the rationals: {0}")]
    NonSplitting(String),
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("combination is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("zero combination has no rank")]
    ZeroCombination,
    #[error("unknown statistic {0:?}")]
    UnknownStatistic(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
