use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("constraint set X is empty")]
    EmptyConstraintSet,
    #[error("cone block has a nonzero right-hand side")]
    NotACone,
    #[error("operation requires a nonempty set")]
    EmptySet,
    #[error("query requires the ordering cone to be the nonnegative orthant")]
    ConeMismatch,
    #[error("perturbation vector lies outside the ordering cone")]
    PerturbationOutsideCone,
    #[error("ordering cone is not pointed")]
    NotPointed,
    #[error("query point is not in the constraint set")]
    PointOutsideConstraintSet,
    #[error("query point is not epsilon-efficient")]
    NotEpsEfficient,
    #[error("dimension {dim} exceeds the desk-scale cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
