use randsec_core::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 0 success, 1 input error, 2 cap or budget exceeded, 3 semantic negative.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 1,
            CliError::Core(e) => match e {
                Error::CapExceeded { .. }
                | Error::GenerationExhausted { .. }
                | Error::NonConvergence { .. } => 2,
                Error::NotComputable => 3,
                _ => 1,
            },
        }
    }
}
