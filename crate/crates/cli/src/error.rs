use std::process::ExitCode;

use giantqed_oracle::OracleError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    /// Dark channel, degenerate channel or a singular point of the model.
    #[error("{0}")]
    Domain(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Validation(_) => 4,
        }
    }
}

impl From<giantqed::Error> for CliError {
    fn from(e: giantqed::Error) -> Self {
        use giantqed::Error as E;
        match e {
            E::InvalidParams(_) | E::InvalidGrid(_) => CliError::Config(e.to_string()),
            E::DegenerateChannel { .. } => {
                CliError::Domain(format!("{e} (pass --allow-degenerate to write the limit)"))
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Core(c) => c.into(),
            OracleError::InvalidModel(_) => CliError::Config(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}
