//! Scenario execution behind the `hlcs` binary.
//!
//! Every command takes a JSON configuration and produces bulk CSV, a JSON
//! summary, or both. Output is a pure function of the configuration and
//! seed.

pub mod commands;
pub mod config;

use thiserror::Error;

pub use commands::{run, Command, Output};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("precondition failed: {0}")]
    Precondition(heisenberg_lcs::Error),

    #[error("numerical failure: {0}")]
    Numerical(heisenberg_lcs::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<heisenberg_lcs::Error> for CliError {
    fn from(e: heisenberg_lcs::Error) -> Self {
        match e {
            heisenberg_lcs::Error::NonFinite { .. } => CliError::Numerical(e),
            other => CliError::Precondition(other),
        }
    }
}

impl CliError {
    /// 2 for configuration and precondition errors, 3 for numerical
    /// failures, 1 for failures to write output.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Precondition(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}
