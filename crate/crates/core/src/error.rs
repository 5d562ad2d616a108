//! Crate-wide error type.

use crate::mode::ModeId;

/// Errors produced by the simulator and its file formats.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A mode list was empty, contained duplicates, or referenced a mode that
    /// is not part of the state.
    #[error("invalid modes: {0}")]
    InvalidModes(String),
    /// A numeric parameter was outside its allowed range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A graph extraction was requested on a non-pure state.
    #[error("state is not pure (det(2*cov) = {det:.6e})")]
    NotPure { det: f64 },
    /// The normalized pump amplitude reached or exceeded the oscillation
    /// threshold.
    #[error("pump amplitude {xi} is at or above threshold")]
    AboveThreshold { xi: f64 },
    /// A frequency grid failed its accuracy checks.
    #[error("numerical accuracy: {0}")]
    NumericalAccuracy(String),
    /// A batch construction exceeded the desk-scale resource limit.
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    /// A bipartition had an empty part.
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    /// Variance report rows required for a verdict are missing.
    #[error("incomplete report: {0}")]
    Incomplete(String),
    /// A measurement-gadget angle pair requested infinite squeezing.
    #[error("singular gate: tan(theta_minus) is 0 or infinite (theta1 = {theta1}, theta2 = {theta2})")]
    SingularGate { theta1: f64, theta2: f64 },
    /// The one-mode compiler did not reach the target within its budget.
    #[error("compile failure: residual {residual:.3e} after {iterations} candidates")]
    CompileFailure { residual: f64, iterations: usize },
    /// A measurement schedule was malformed.
    #[error("schedule error: {0}")]
    ScheduleError(String),
    /// The displacement ledger is missing entries needed for resolution.
    #[error("ledger error: {0}")]
    LedgerError(String),
    /// A trace file header or payload was inconsistent.
    #[error("format error: {0}")]
    FormatError(String),
    /// A least-squares fit was rank deficient.
    #[error("fit error: {0}")]
    FitError(String),
    /// An empirical denominator vanished.
    #[error("degenerate statistic: {0}")]
    Degenerate(String),
    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// Configuration or schedule JSON failure.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn unknown_mode(mode: ModeId) -> Self {
        Error::InvalidModes(format!("mode {mode} is not part of the state"))
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
