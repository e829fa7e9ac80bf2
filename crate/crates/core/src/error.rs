use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the hypergeometric engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole at {location} ({context})")]
    Pole { location: Complex64, context: String },

    #[error("jet order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("jet order {requested} exceeds the supported maximum {max}")]
    OrderTooLarge { requested: usize, max: usize },

    #[error("coefficient index {index} beyond jet order {order}")]
    IndexBeyondOrder { index: usize, order: usize },

    #[error("branch cut: {0}")]
    BranchCut(String),

    #[error("series diverges: {0}")]
    Divergent(String),

    #[error("no convergence after {terms} terms: {context}")]
    NonConvergence { terms: usize, context: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("unknown name: {0}")]
    UnknownName(String),
}

impl Error {
    pub(crate) fn pole(location: Complex64, context: impl Into<String>) -> Self {
        Error::Pole {
            location,
            context: context.into(),
        }
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
