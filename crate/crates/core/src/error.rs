use thiserror::Error;

use crate::geometry::{SpecError, ValidationError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: factors {left:?} vs {right:?}")]
    ShapeMismatch { left: Vec<u32>, right: Vec<u32> },

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(transparent)]
    Parse(#[from] SpecError),

    #[error(transparent)]
    Validation(#[from] ValidationError),

    #[error("mirror transform inconsistency at degree {degree:?}: {detail}")]
    MirrorInconsistency { degree: Vec<u32>, detail: String },

    #[error("extraction inconsistency at degree {degree:?}: {detail}")]
    ExtractionInconsistency { degree: Vec<u32>, detail: String },

    #[error("grading error at degree {degree:?}: {detail}")]
    Grading { degree: Vec<u32>, detail: String },

    #[error("sampling error: {0}")]
    Sampling(String),

    #[error("oracle inconsistency: {0}")]
    OracleInconsistency(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
