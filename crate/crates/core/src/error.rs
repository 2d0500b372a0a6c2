use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("linear system has more than one solution")]
    Ambiguous,
    #[error("elimination needs a pivot that is not a unit of the coefficient ring")]
    NonUnitPivot,
    #[error("invalid input: {0}")]
    Input(String),
    #[error("section is not pre-primitive: {0}")]
    NotPrePrimitive(String),
    #[error("section is not primitive: {0}")]
    NotPrimitive(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("Laurent polynomial is not convenient (0 is not interior to its Newton polytope)")]
    NotConvenient,
    #[error("Jacobian dimension did not stabilise up to box size {0}")]
    NotTame(u32),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
