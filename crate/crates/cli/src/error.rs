use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Library(#[from] pwaffine::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    /// 2 for bad input, 3 for failed computations.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Library(e) if e.is_invalid_input() => ExitCode::from(2),
            CliError::Usage(_) => ExitCode::from(2),
            _ => ExitCode::from(3),
        }
    }
}
