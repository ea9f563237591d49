use thiserror::Error;

/// Errors raised by the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("snapshot format error: {0}")]
    Format(String),

    #[error(transparent)]
    Core(#[from] dirac_ua_core::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code: 2 for configuration problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        use dirac_ua_core::Error as C;
        match self {
            Error::Numerical(_) => 3,
            Error::Core(C::Numerical(_) | C::FixedPoint { .. } | C::Contract(_)) => 3,
            _ => 2,
        }
    }
}
