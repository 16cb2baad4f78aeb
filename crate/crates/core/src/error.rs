use thiserror::Error;

/// Every failure the library reports. Variants carry enough context to print a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("series is not a unit: constant term is zero")]
    NotAUnit,
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(u32, u32),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),
    #[error("quotient is not of finite rank below degree {0}")]
    NotFiniteRank(u32),
    #[error("eigenvalue collision: {0}")]
    EigenvalueCollision(String),
    #[error("operator is not nilpotent on slice: {0}")]
    NotNilpotent(String),
    #[error("structure mismatch: {0}")]
    StructureMismatch(String),
    #[error("degree pattern violation: {0}")]
    DegreePatternViolation(String),
    #[error("bound violation: {0}")]
    BoundViolation(String),
    #[error("presentation mismatch: {0}")]
    PresentationMismatch(String),
    #[error("degenerate pairing: {0}")]
    DegeneratePairing(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("characteristic polynomial does not split over Q(i): {0}")]
    NotSplit(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
