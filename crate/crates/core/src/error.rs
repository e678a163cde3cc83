use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("eigenvalue {0} is not positive")]
    NonPositiveEigenvalue(String),
    #[error("commensurability test inconclusive: {0}")]
    HeuristicInconclusive(String),
    #[error("{what}: size {requested} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },
    #[error("expected {expected} labels, got {got}")]
    LabelMismatch { expected: usize, got: usize },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("Gram matrix at level {level} is not positive definite")]
    GramNotPositive { level: usize },
    #[error("total dimension {dim} exceeds budget {budget}")]
    BudgetExceeded { dim: usize, budget: usize },
    #[error("level {level} exceeds truncation {max}")]
    LevelExceeded { level: usize, max: usize },
    #[error("generator {index} out of range (d = {d})")]
    InvalidGenerator { index: usize, d: usize },
    #[error("truncation {have} too small, need at least {needed}")]
    TruncationTooSmall { needed: usize, have: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
