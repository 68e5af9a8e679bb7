use thiserror::Error;

use crate::rational::ParseRationalError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Rational(#[from] ParseRationalError),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("{path}: {message}")]
    ChannelFile { path: String, message: String },

    #[error("{what} has size {size}, above the cap of {cap}")]
    SizeCap { what: String, size: u128, cap: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("{0}")]
    Scheme(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_cap(what: &str, size: u128, cap: u128) -> Result<()> {
    if size > cap {
        return Err(Error::SizeCap {
            what: what.to_string(),
            size,
            cap,
        });
    }
    Ok(())
}
