use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("io: {0}")]
    Io(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Validation(_) => ExitCode::from(3),
            CliError::Io(_) | CliError::Compute(_) => ExitCode::from(1),
        }
    }
}

impl From<fblsec::Error> for CliError {
    fn from(e: fblsec::Error) -> Self {
        match e {
            fblsec::Error::InvalidConfig(_) | fblsec::Error::Domain { .. } | fblsec::Error::Misuse(_) => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Compute(e.to_string()),
        }
    }
}
