use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the solver suite.
#[derive(Debug, Error)]
pub enum HsvdError {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("rank deficiency: column {column} has zero norm")]
    RankDeficient { column: usize },

    /// A hyperbolic pivot with `|tanh 2phi| >= 1`: the pair `(A, J)` is not definite.
    #[error(
        "definiteness lost at block {block}, pivot ({i}, {j}): |tanh 2phi| = {theta} >= 1"
    )]
    DefinitenessLost {
        block: usize,
        i: usize,
        j: usize,
        theta: f64,
    },

    #[error("numerical singularity at elimination step {step}: pivot magnitude {pivot:e} below {threshold:e}")]
    NumericalSingularity {
        step: usize,
        pivot: f64,
        threshold: f64,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed file: {reason}")]
    Format { path: PathBuf, reason: String },
}

impl HsvdError {
    pub fn shape(msg: impl Into<String>) -> Self {
        Self::Shape(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        Self::Format {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = HsvdError> = std::result::Result<T, E>;
