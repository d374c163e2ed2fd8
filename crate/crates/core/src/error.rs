use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("coefficient domain mismatch: {0} vs {1}")]
    DomainMismatch(String, String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("not closed under multiplication: {0}")]
    Closure(String),
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("not Frobenius: {0}")]
    NotFrobenius(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("grading error: {0}")]
    Grading(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown operation {0:?}")]
    UnknownOperation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
