use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter context mismatch: {0}")]
    ContextMismatch(String),

    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error("parameters not admissible: {0}")]
    NotAdmissible(String),

    #[error("eigenspace for m = {m} has dimension {found}, expected {expected}")]
    Defective { m: usize, found: usize, expected: usize },

    #[error("tail bound not converged: {0}")]
    TailNotConverged(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
