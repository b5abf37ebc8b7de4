use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Inconsistent or out-of-range flags; exit code 2.
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] coulomb_momentum::Error),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}
