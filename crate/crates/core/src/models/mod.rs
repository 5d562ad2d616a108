//! Closed-form and quadrature-integral imperfection models: OPO squeezing
//! spectra, wave-packet filtering, nullifier variances under loss and
//! delay-length mismatch, and homodyne power spectra.

mod correlation;
mod power;
mod variance;
mod wavepacket;

pub use correlation::correlation_coefficient;
pub use power::power_spectrum;
pub use variance::{effective_squeezing, nullifier_variance_model, NullifierModelResult};
pub use wavepacket::{mode_spectrum, FreqGrid, ModeSpectrum, WavePacket};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Squeezing (`Minus`) or anti-squeezing (`Plus`) branch of the OPO output
/// spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SqueezeBranch {
    Plus,
    Minus,
}

/// Parameters of one optical parametric oscillator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpoParams {
    /// Output-coupler transmissivity (fraction).
    pub t: f64,
    /// Intracavity loss (fraction).
    pub l: f64,
    /// Normalized pump amplitude, below threshold in `[0, 1)`.
    pub xi: f64,
    /// Cavity bandwidth in rad/s.
    pub omega0: f64,
}

impl OpoParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.t > 0.0 && self.t <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "output coupler transmissivity T = {} outside (0, 1]",
                self.t
            )));
        }
        if !(0.0..1.0).contains(&self.l) {
            return Err(Error::InvalidParameter(format!(
                "intracavity loss L = {} outside [0, 1)",
                self.l
            )));
        }
        if self.xi < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "pump amplitude xi = {} negative",
                self.xi
            )));
        }
        if self.xi >= 1.0 {
            return Err(Error::AboveThreshold { xi: self.xi });
        }
        if !(self.omega0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "bandwidth omega0 = {} must be positive",
                self.omega0
            )));
        }
        Ok(())
    }
}

/// Squeezing / anti-squeezing spectral density of an OPO below threshold:
///
/// ```text
/// S+-(w) = 1/2 [ 1 +- T/(T+L) * 4 xi / ((1 -+ xi)^2 + (w/w0)^2) ]
/// ```
///
/// with `hbar = 1`; the vacuum level is `1/2` at every frequency.
pub fn squeezing_spectrum(p: &OpoParams, omega: f64, branch: SqueezeBranch) -> Result<f64> {
    p.validate()?;
    let escape = p.t / (p.t + p.l);
    let s = omega / p.omega0;
    let v = match branch {
        SqueezeBranch::Plus => {
            1.0 + escape * 4.0 * p.xi / ((1.0 - p.xi) * (1.0 - p.xi) + s * s)
        }
        SqueezeBranch::Minus => {
            1.0 - escape * 4.0 * p.xi / ((1.0 + p.xi) * (1.0 + p.xi) + s * s)
        }
    };
    Ok(0.5 * v)
}
