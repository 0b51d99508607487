use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("point is not trapped: {0}")]
    NotTrapped(String),

    #[error("certificate refinement did not terminate: {0}")]
    NonTermination(String),

    #[error("invalid construction: {0}")]
    InvalidConstruction(String),

    /// A structural invariant of the exact kernel failed. Always a bug.
    #[error("kernel invariant violated: {0}")]
    Kernel(String),

    #[error("floor budget {budget} exhausted")]
    BudgetExhausted { budget: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
