use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The dephasing signal is fully saturated and the occupation cannot be
    /// recovered.
    #[error("dephasing saturated (sigma^2 = {sigma_sq}); mean occupation unrecoverable")]
    Saturated { sigma_sq: f64 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("fit did not converge after {iterations} iterations (last iterate {last:?})")]
    NoConvergence { iterations: usize, last: Vec<f64> },

    #[error("config error in {path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error("schema error in {path}: {message}")]
    Schema { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of the numerics (as opposed to bad input files or
    /// arguments).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Saturated { .. } | Error::Degenerate(_) | Error::NoConvergence { .. }
        )
    }
}
