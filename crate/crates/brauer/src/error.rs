//! Error type shared by all modules.

/// Errors surfaced by constructions, searches, and parsers.
///
/// Search-style operations distinguish three failure modes: `NoSolution`
/// (a completed exhaustive search proved none exists), `NoSolutionFound`
/// (the search space was covered as far as the construction goes but no
/// point turned up), and `BudgetExceeded` (the configured limits stopped
/// the search before it could decide).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("budget exceeded in {stage}")]
    BudgetExceeded { stage: String },
    #[error("no solution exists")]
    NoSolution,
    #[error("no solution found")]
    NoSolutionFound,
    #[error("no witness point found")]
    NoWitness,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("vectors are linearly dependent")]
    DependentVectors,
    #[error("form is not diagonal")]
    NotDiagonal,
    #[error("characteristic divides the degree")]
    CharDividesDegree,
    #[error("characteristic too small for this construction")]
    CharTooSmall,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn budget(stage: impl Into<String>) -> Error {
        Error::BudgetExceeded { stage: stage.into() }
    }

    pub fn parse_at(line: usize, col: usize, msg: impl Into<String>) -> Error {
        Error::Parse { line, col, msg: msg.into() }
    }
}
