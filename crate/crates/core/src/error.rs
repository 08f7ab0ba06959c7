use thiserror::Error;

use crate::lp::LpError;

#[derive(Debug, Error)]
pub enum FdtError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid instance: {0}")]
    Validation(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The input point is outside the dominant of the relaxation, or the
    /// instance has an unbounded integrality gap. The two are not told apart.
    #[error("unbounded-gap-or-infeasible: {0}")]
    UnboundedGapOrInfeasible(String),

    #[error("lp solver: {0}")]
    Lp(#[from] LpError),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl FdtError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        FdtError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub fn is_unbounded_gap(&self) -> bool {
        matches!(self, FdtError::UnboundedGapOrInfeasible(_))
    }
}

pub type Result<T, E = FdtError> = std::result::Result<T, E>;
