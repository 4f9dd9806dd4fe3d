use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid {field}: {reason}")]
    Validation { field: String, reason: String },

    #[error("{what} out of range: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("length mismatch: {what} has {got} values, expected {expected}")]
    LengthMismatch { what: String, expected: usize, got: usize },

    #[error("ARX history missing for hour {hour} at lag {lag}")]
    MissingHistory { hour: usize, lag: usize },

    #[error("rank-deficient design matrix: collinear columns {columns:?}")]
    RankDeficient { columns: Vec<String> },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("budget {budget} outside [0, {max}]")]
    BudgetOutOfRange { budget: f64, max: usize },

    #[error("training diverged at iteration {iteration} (loss {loss})")]
    Divergence { iteration: usize, loss: f64 },

    #[error("empty Pareto front")]
    EmptyFront,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("file not found: {0}")]
    MissingFile(PathBuf),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: row {row}: {message}")]
    Csv { path: PathBuf, row: usize, message: String },
}

impl Error {
    pub fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by infeasible or degenerate input data rather
    /// than a malformed request. The CLI maps these to exit code 2.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::RankDeficient { .. }
                | Error::InsufficientData(_)
                | Error::Divergence { .. }
                | Error::EmptyFront
                | Error::MissingHistory { .. }
        )
    }
}
