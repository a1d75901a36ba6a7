use thiserror::Error;

use crate::geometry::ModelKind;

/// Errors raised by the randers library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("point ({x1}, {x2}) is outside the {model} domain")]
    Domain { model: ModelKind, x1: f64, x2: f64 },

    #[error("model mismatch: expected {expected}, found {found}")]
    ModelMismatch { expected: ModelKind, found: ModelKind },

    #[error("degenerate direction: {0}")]
    DegenerateDirection(String),

    #[error("degenerate field: {0}")]
    DegenerateField(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors caused by a point outside the model domain.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
