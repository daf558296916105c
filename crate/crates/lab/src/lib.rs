//! Experiment runner over `obdd-core`: function and program identifiers,
//! single experiments, canonical reports and the named suites.

pub mod experiment;
pub mod ids;
pub mod report;
pub mod suite;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] obdd_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl LabError {
    pub fn usage(msg: impl Into<String>) -> Self {
        LabError::Usage(msg.into())
    }

    /// 1 for a failed check, 2 for usage problems, 3 for capacity limits.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Core(e) if e.is_capacity() => 3,
            LabError::Core(obdd_core::Error::NotCommutative(_) | obdd_core::Error::Inconsistent { .. }) => 1,
            LabError::Io(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
