use std::path::PathBuf;

use thiserror::Error;

use crate::spheroid::{NavState, SurfacePoint};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse grouping used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Validation,
    Numeric,
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape parameter must be finite and positive, got {0}")]
    InvalidShape(f64),

    #[error("colatitude {theta} is within the pole guard band")]
    PoleSingularity { theta: f64 },

    #[error("wind is not mild at (phi={}, theta={}): |W|_h = {norm}", .point.phi, .point.theta)]
    NotMild { point: SurfacePoint, norm: f64 },

    #[error("degenerate Lagrangian Hessian: det = {det:e}, local scale = {scale:e}")]
    DegenerateHessian { det: f64, scale: f64 },

    #[error("relative velocity vanishes, heading undefined")]
    ZeroRelativeVelocity,

    #[error("velocity vanishes")]
    ZeroVelocity,

    #[error("step size underflow at t = {t}")]
    StepFailure { t: f64, state: NavState },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("nothing to plot: {0}")]
    EmptyData(String),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::InvalidShape(_)
            | Error::NotMild { .. }
            | Error::InvalidConfig(_)
            | Error::EmptyData(_) => ErrorCategory::Validation,
            Error::PoleSingularity { .. }
            | Error::DegenerateHessian { .. }
            | Error::ZeroRelativeVelocity
            | Error::ZeroVelocity
            | Error::StepFailure { .. } => ErrorCategory::Numeric,
            Error::Io { .. } | Error::Parse { .. } => ErrorCategory::Io,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
