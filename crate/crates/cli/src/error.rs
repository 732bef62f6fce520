use strobe_core::StrobeError;
use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
/// Valid input but a negative verdict: degenerate generator or inadmissible observable.
pub const EXIT_NEGATIVE: u8 = 2;
pub const EXIT_CONDITIONING: u8 = 3;

#[derive(Debug, Error)]
#[error("{message}")]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<StrobeError> for CliError {
    fn from(e: StrobeError) -> Self {
        let code = match e {
            StrobeError::NotOptimal { .. } | StrobeError::Inadmissible { .. } | StrobeError::SamplingCapExceeded(_) => {
                EXIT_NEGATIVE
            }
            StrobeError::IllConditioned { .. } => EXIT_CONDITIONING,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::input(format!("json: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
