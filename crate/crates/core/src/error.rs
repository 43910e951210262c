use thiserror::Error;

/// Errors raised by parsing, validation and the trajectory algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("cycle enumeration exceeded the cap of {cap} cycles")]
    CycleCapExceeded { cap: usize },
    #[error("search exceeded the budget of {budget} expansions")]
    BudgetExceeded { budget: usize },
    #[error("graph contains a directed cycle")]
    Cyclic,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("infeasible request: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
