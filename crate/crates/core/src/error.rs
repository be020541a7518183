use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid {field}: {reason} (got {value})")]
    Invalid {
        field: String,
        value: f64,
        reason: String,
    },

    #[error("singular geometry: gamma = {gamma_deg} deg makes cos(gamma) = 0")]
    SingularGeometry { gamma_deg: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {message}")]
    Parse { context: String, message: String },

    #[error("curve has {found} samples, at least {needed} required")]
    TooFewSamples { found: usize, needed: usize },

    #[error("curve angles must be strictly increasing (sample {index})")]
    NonIncreasingAngles { index: usize },

    #[error("peak torque must be positive (got {peak})")]
    NonPositivePeak { peak: f64 },

    #[error("only {found} samples inside the fit window, at least 3 required")]
    SparseFitWindow { found: usize },

    #[error("non-monotone rising branch: fitted slope {slope} is not positive")]
    NonMonotoneRise { slope: f64 },

    #[error("no plateau detected: {found} samples past the rising branch, at least 3 required")]
    NoPlateau { found: usize },

    #[error("replicate {index}: {source}")]
    Replicate {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(
        "underdetermined fit: {free} free parameters ({names}) but only {constraints} constraints"
    )]
    Underdetermined {
        free: usize,
        names: String,
        constraints: usize,
    },

    #[error(
        "free parameters ({names}) are not jointly identifiable from the selected constraints"
    )]
    Unidentifiable { names: String },

    #[error("commanded depth {depth} m is not reachable with a {length} m gripper")]
    KinematicLimit { depth: f64, length: f64 },
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, value: f64, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            value,
            reason: reason.into(),
        }
    }

    /// True for errors caused by unreadable or malformed input files.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::Parse { .. })
    }
}
