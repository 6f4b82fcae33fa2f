//! Batch front end for the curved-strip spectral toolkit.
//!
//! Wraps the solver crate behind subcommands for single thresholds,
//! parameter sweeps (CSV), two-dimensional bound audits, Hardy-inequality
//! certificates, and the curvature-stability budget. All commands validate
//! their full configuration before any solve starts and write output files
//! in one shot, so failed runs never leave partial artifacts. Identical
//! inputs (including the seed) produce byte-identical output.
//!
//! Exit codes: 0 success, 1 invalid input or configuration, 2 solver
//! failure, 3 a verified inequality failed its audit.

pub mod commands;
pub mod config;

use drstrip_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("validation: {0}")]
    Validation(String),
    #[error("solver: {0}")]
    Solver(String),
    #[error("audit: {0}")]
    Audit(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Solver(_) => 2,
            CliError::Audit(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidInput(m) => CliError::Validation(m),
            other => CliError::Solver(other.to_string()),
        }
    }
}
