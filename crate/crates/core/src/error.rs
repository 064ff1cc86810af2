use thiserror::Error;

/// Error type shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An input violated a precondition (non-positive temperature, out-of-range
    /// coordinate, invalid level count, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested operation is not defined for this potential variant.
    #[error("unsupported variant: {0}")]
    UnsupportedVariant(String),

    /// The eigenvalue iteration failed to converge.
    #[error("eigensolver failed: {0}")]
    Solver(String),

    /// The finite-difference step for a derivative straddled a feature of the
    /// function being differentiated.
    #[error("step size too large: {0}")]
    StepSize(String),

    /// A configuration file failed validation.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}
