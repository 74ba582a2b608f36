use thiserror::Error;

use crate::rational::ParseRationalError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid axis does not contain 0")]
    MissingOrigin,
    #[error("grid axis needs at least 2 entries, got {0}")]
    TooSmall(usize),
    #[error("duplicate axis entry {0}")]
    DuplicateEntry(String),
    #[error("no generic grid found after {0} attempts")]
    GenerationFailed(usize),
    #[error("line_through called with the same point twice")]
    SamePoint,
    #[error("operation requires a standard grid {{0,...,n-1}}^2")]
    NotStandardGrid,
    #[error("operation requires a square grid, got {n}x{m}")]
    NotSquare { n: usize, m: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("construction hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("k = {k} is not divisible by {required}")]
    DivisibilityViolated { k: u64, required: u64 },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("grid is not generic (delta = {0})")]
    NotGeneric(usize),
    #[error("grid has delta-genericity {actual}, more than the declared {declared}")]
    DeltaTooSmall { declared: usize, actual: usize },
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("LP solver failure: {0}")]
    Solver(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
