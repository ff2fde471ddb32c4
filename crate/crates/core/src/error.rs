use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("symbol {0:?} is not in the alphabet")]
    UnknownLetter(char),

    #[error("letter index {0} is out of range for the alphabet")]
    LetterOutOfRange(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("strings must have equal length (got {x} and {y})")]
    UnequalLengths { x: usize, y: usize },

    #[error("invalid letter distribution: {0}")]
    InvalidDistribution(String),

    #[error("alignment contains a gap-gap column")]
    GapGapColumn,

    #[error("invalid alignment: {0}")]
    InvalidAlignment(String),

    #[error("invalid lattice path: {0}")]
    InvalidPath(String),

    #[error("min-norm-point projection did not converge within {iterations} iterations")]
    ProjectionDidNotConverge { iterations: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
