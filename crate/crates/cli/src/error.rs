use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, flag combinations or config contents.
    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Numerical(#[from] fracbeam_core::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }
}
