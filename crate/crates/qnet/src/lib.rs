//! File formats, a parallel trial harness and the `qnet` command line on top
//! of [`qnet_core`].

pub mod cli;
pub mod codespec;
pub mod experiments;
pub mod fixture;
pub mod harness;
pub mod output;
pub mod scenario;

/// Failure of a CLI run, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad arguments or configuration (exit code 1).
    #[error("{0}")]
    Usage(String),
    /// The experiment itself failed (exit code 2).
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }

    pub(crate) fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }

    pub(crate) fn runtime(e: impl std::fmt::Display) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}
