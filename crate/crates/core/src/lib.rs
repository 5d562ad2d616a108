//! `cvcluster` simulates the continuous generation, verification, and
//! measurement-based use of a time-domain-multiplexed two-dimensional
//! continuous-variable cluster state.
//!
//! The crate is organized around an exact finite-dimensional Gaussian-state
//! engine ([`gaussian`]): states are mean vectors and covariance matrices in
//! `(x_1..x_M, p_1..p_M)` ordering with `hbar = 1` and vacuum quadrature
//! variance `1/2`. On top of it sit:
//!
//! - [`pipeline`]: the streaming four-OPO / five-beam-splitter / two-delay-line
//!   generator with bounded memory, plus a non-streaming batch oracle.
//! - [`verify`]: nullifier variance reports and the van Loock–Furusawa
//!   inseparability sweep over all bipartitions.
//! - [`models`]: closed-form imperfection models (OPO squeezing spectra,
//!   wave-packet filtering, loss and delay-mismatch integrals, homodyne power
//!   spectra).
//! - [`mbqc`]: measurement-based Gaussian computation on the cluster: gate
//!   gadget algebra, angle compilation, schedule execution, and the deferred
//!   feed-forward displacement ledger.
//! - [`traces`]: synthetic time-domain waveform generation/ingestion and the
//!   delay-length fitting utility.
//! - [`config`]: experiment configuration shared by the command-line tools.

pub mod config;
pub mod error;
pub mod gaussian;
pub mod mbqc;
pub mod mode;
pub mod models;
pub mod pipeline;
pub mod stats;
pub mod traces;
pub mod verify;

pub use error::Error;
pub use gaussian::GaussianState;
pub use mode::{ModeId, Quadrature, Spatial};

/// Vacuum variance of a single quadrature (`hbar = 1`).
pub const VACUUM_VARIANCE: f64 = 0.5;

/// Shot-noise reference for the six-term nullifiers: four units of vacuum
/// noise, `4 * 1/2 = 2`.
pub const NULLIFIER_REFERENCE: f64 = 2.0;

/// Convert an absolute nullifier variance to dB relative to the shot-noise
/// reference.
pub fn variance_db(var: f64) -> f64 {
    10.0 * (var / NULLIFIER_REFERENCE).log10()
}
