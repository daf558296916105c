use thiserror::Error;

/// Errors raised by constructors, evaluators and transforms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input shape: {0}")]
    Shape(String),
    #[error("capacity: {0}")]
    Capacity(String),
    #[error("malformed program: {0}")]
    Structure(String),
    #[error("function depends on non-live variable x{0}")]
    Dependency(usize),
    #[error("program is not commutative: {0}")]
    NotCommutative(String),
    #[error("program disagrees with partial function on defined input {input}")]
    Inconsistent { input: String },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("no multiplier set found within budget: {0}")]
    NotFound(String),
    #[error("parse: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub(crate) fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    /// True for capacity violations (the CLI maps these to a dedicated exit code).
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
