use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] osinv_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0} of {1} checks failed")]
    Verify(usize, usize),
}

impl CliError {
    /// 1 for failed checks and runtime errors, 2 for non-regular spaces,
    /// 3 for unparsable input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 3,
            CliError::Core(osinv_core::Error::NotRegular { .. }) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
