use thiserror::Error;

use crate::field::FieldDescriptor;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("descriptor mismatch: {0} vs {1}")]
    DescriptorMismatch(FieldDescriptor, FieldDescriptor),
    #[error("sqrt({0}) is not representable in {1}")]
    NotRepresentable(i64, FieldDescriptor),
    #[error("radicand {0} must be squarefree, distinct and not 0 or 1")]
    BadRadicand(i64),
    #[error("at most two radicands are supported, got {0}")]
    TooManyRadicands(usize),
    #[error("radicands {0:?} have a square subset product")]
    DependentRadicands(Vec<i64>),
    #[error("radicand {0} is not part of the field")]
    UnknownRadicand(i64),
    #[error("sign must be +1 or -1, got {0}")]
    BadSign(i8),
    #[error("expected {expected} coordinates, got {got}")]
    CoordCount { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("division by zero")]
    DivisionByZero,
    #[error("composed denominator vanishes identically")]
    DenominatorVanishes,
    #[error("pole at the evaluation point")]
    PoleAtPoint,
    #[error("variable {0} has no value at the evaluation point")]
    Unassigned(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("group closure exceeds cap {0}")]
    GroupTooLarge(usize),
    #[error("order exceeds cap {0}")]
    OrderExceedsCap(usize),
    #[error("exponent matrix is not unimodular")]
    NotUnimodular,
    #[error("monomial coefficient is zero")]
    ZeroCoefficient,
    #[error("map does not act affinely on the chosen variable")]
    NotAffineAction,
    #[error("negative power of zero")]
    ZeroToNegativePower,
}

pub type Result<T> = std::result::Result<T, Error>;
