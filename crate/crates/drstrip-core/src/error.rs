//! Crate-wide error type.

use alloc::string::String;

/// Errors reported by solvers and constructors.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Input rejected before any computation (bad geometry, grids, profiles).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// An iterative solver ran out of iterations or failed to bracket a root.
    #[error("solver failed: {0}")]
    Solver(String),
    /// A matrix factorization broke down (shift not below the spectrum, ...).
    #[error("factorization failed: {0}")]
    Factorization(String),
    /// Function evaluation outside the range the implementation supports.
    #[error("argument out of range: {0}")]
    Range(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn factorization(msg: impl Into<String>) -> Self {
        Error::Factorization(msg.into())
    }

    pub(crate) fn solver(msg: impl Into<String>) -> Self {
        Error::Solver(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }
}
