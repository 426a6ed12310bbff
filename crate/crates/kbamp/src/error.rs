//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation argument is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A coefficient could not be converted to an exact rational
    /// (non-finite input).
    #[error("coefficient has no exact rational representation: {0}")]
    NonRationalCoefficient(String),

    /// Integration left the trusted region or exhausted its step budget.
    #[error("integration diverged at t = {t}: {reason}")]
    Divergence { t: f64, reason: String },

    /// A scalar-mode operation received a planar trajectory or vice versa.
    #[error("trajectory mode mismatch: {0}")]
    ModeMismatch(String),

    /// Every drift coefficient is zero; there is nothing to solve.
    #[error("radial drift is identically zero")]
    ZeroDrift,

    /// The fit window selects too few trajectory samples.
    #[error("fit window too sparse: {0}")]
    EmptyWindow(String),

    /// The least-squares basis vanished on the window.
    #[error("degenerate fit basis: {0}")]
    DegenerateBasis(String),

    /// Log-log fitting requires strictly positive samples.
    #[error("nonpositive sample in log-space fit: {0}")]
    NonpositiveSample(String),

    /// An (low, high) interval with low >= high or non-finite endpoints.
    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    /// Experiment configuration failed to parse or validate.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code convention: 1 for configuration problems,
    /// 2 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            _ => 2,
        }
    }
}
