use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] gfp_fft::Error),

    #[error("vector file: {0}")]
    Format(String),

    #[error("backends disagree: {0}")]
    Mismatch(String),

    #[error("{0} check(s) failed")]
    VerifyFailed(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
