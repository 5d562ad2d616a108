//! Temporal mode function of one wave packet and its numeric spectrum.
//!
//! The packet at index `k` occupies the window `|t - t0(k)| <= dt/2` with
//! `t0(k) = dt/2 + k dt`, and inside it has the shape
//!
//! ```text
//! f(t) ~ (u + t_c) exp(-gamma^2 u^2),   u = t - t0 + half_sample
//! ```
//!
//! where `half_sample = 1/(2 fs)` centers the zero crossing between discrete
//! samples. Both the time-domain function and the spectrum are normalized to
//! unit power; the spectrum uses a unitary-convention transform evaluated by
//! direct quadrature on a symmetric grid, with a Parseval check.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Wave-packet shape parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WavePacket {
    /// Window width in seconds.
    pub dt: f64,
    /// Shape constant in rad/s.
    pub gamma: f64,
    /// Zero-crossing offset in seconds.
    pub t_c: f64,
    /// Acquisition sample rate in Hz.
    pub sample_rate: f64,
}

/// Time samples used for normalization and spectra (Simpson rule needs an
/// even interval count).
const TIME_INTERVALS: usize = 2048;

impl WavePacket {
    /// The shape used in the experiment: 40 ns windows at 1 GS/s with
    /// `gamma = 2 pi x 10.5 MHz`.
    pub fn experiment_default() -> Self {
        WavePacket {
            dt: 40e-9,
            gamma: 2.0 * std::f64::consts::PI * 10.5e6,
            t_c: 0.0,
            sample_rate: 1e9,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !(self.sample_rate > 0.0) {
            return Err(Error::InvalidParameter(
                "wave packet needs positive width and sample rate".into(),
            ));
        }
        if !self.gamma.is_finite() || !self.t_c.is_finite() {
            return Err(Error::InvalidParameter("non-finite wave packet shape".into()));
        }
        Ok(())
    }

    /// Center of window `k`.
    pub fn center(&self, k: u32) -> f64 {
        self.dt / 2.0 + k as f64 * self.dt
    }

    fn half_sample(&self) -> f64 {
        0.5 / self.sample_rate
    }

    /// Unnormalized shape, zero outside the window.
    pub fn raw(&self, k: u32, t: f64) -> f64 {
        let t0 = self.center(k);
        if (t - t0).abs() > self.dt / 2.0 {
            return 0.0;
        }
        let u = t - t0 + self.half_sample();
        (u + self.t_c) * (-self.gamma * self.gamma * u * u).exp()
    }

    /// `sqrt(integral raw^2 dt)` over one window (Simpson rule).
    pub fn normalization(&self) -> Result<f64> {
        self.validate()?;
        let t0 = self.center(0);
        let a = t0 - self.dt / 2.0;
        let h = self.dt / TIME_INTERVALS as f64;
        let mut acc = 0.0;
        for i in 0..=TIME_INTERVALS {
            let w = if i == 0 || i == TIME_INTERVALS {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let f = self.raw(0, a + i as f64 * h);
            acc += w * f * f;
        }
        let norm_sq = acc * h / 3.0;
        if norm_sq <= 0.0 {
            return Err(Error::InvalidParameter(
                "degenerate wave packet (zero norm)".into(),
            ));
        }
        Ok(norm_sq.sqrt())
    }

    /// Normalized mode function value at time `t` for window `k`.
    pub fn mode_function(&self, k: u32, t: f64) -> Result<f64> {
        Ok(self.raw(k, t) / self.normalization()?)
    }

    /// Mode function sampled on the acquisition grid of window `k`,
    /// renormalized so the discrete samples are exactly orthonormal under
    /// the plain Riemann sum at the sample rate.
    pub fn sampled(&self, k: u32) -> Result<Vec<f64>> {
        self.validate()?;
        let per = (self.dt * self.sample_rate).round() as usize;
        if per == 0 || (self.dt * self.sample_rate - per as f64).abs() > 1e-6 {
            return Err(Error::InvalidParameter(format!(
                "window width {} s is not an integer number of samples at {} Hz",
                self.dt, self.sample_rate
            )));
        }
        let ds = 1.0 / self.sample_rate;
        let start = k as usize * per;
        let mut vals: Vec<f64> = (0..per)
            .map(|i| self.raw(k, (start + i) as f64 * ds))
            .collect();
        let norm = (vals.iter().map(|v| v * v).sum::<f64>() * ds).sqrt();
        if norm <= 0.0 {
            return Err(Error::InvalidParameter(
                "degenerate wave packet (zero discrete norm)".into(),
            ));
        }
        for v in &mut vals {
            *v /= norm;
        }
        Ok(vals)
    }

    /// Samples per window at the acquisition rate.
    pub fn samples_per_window(&self) -> usize {
        (self.dt * self.sample_rate).round() as usize
    }
}

/// Symmetric frequency grid `[-span, span]` in rad/s with `points` equal
/// intervals (trapezoidal quadrature weights).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FreqGrid {
    pub span: f64,
    pub points: usize,
}

impl FreqGrid {
    /// Default per the numerical-hygiene policy: span `40 * 2 pi / dt`,
    /// `2^14` intervals.
    pub fn default_for(wp: &WavePacket) -> Self {
        FreqGrid {
            span: 40.0 * 2.0 * std::f64::consts::PI / wp.dt,
            points: 1 << 14,
        }
    }

    pub fn refined(&self) -> Self {
        FreqGrid {
            span: self.span * 2.0,
            points: self.points * 2,
        }
    }

    pub fn step(&self) -> f64 {
        2.0 * self.span / self.points as f64
    }

    pub fn omega(&self, i: usize) -> f64 {
        -self.span + i as f64 * self.step()
    }

    pub fn node_count(&self) -> usize {
        self.points + 1
    }
}

/// `|f~(omega)|^2` of one window on a frequency grid, renormalized to unit
/// trapezoidal mass after the Parseval check.
#[derive(Clone, Debug)]
pub struct ModeSpectrum {
    pub grid: FreqGrid,
    pub values: Vec<f64>,
    /// Trapezoidal mass before renormalization; `|mass - 1|` is the Parseval
    /// drift of the grid.
    pub parseval_mass: f64,
}

impl ModeSpectrum {
    /// Trapezoidal quadrature of `values[i] * g(omega_i)`.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        let n = self.grid.node_count();
        let h = self.grid.step();
        let mut acc = 0.0;
        for i in 0..n {
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            acc += w * self.values[i] * g(self.grid.omega(i));
        }
        acc * h
    }
}

/// Evaluate the spectrum by a zero-padded discrete Fourier transform.
///
/// The window is sampled at the grid's Nyquist-matched time step
/// `pi / span`, normalized discretely, and padded to `points` samples, so
/// the grid step is `2 span / points` and the trapezoidal Parseval sum is
/// exact up to rounding. Fails with a numerical-accuracy error if the
/// Parseval drift still exceeds `1e-4`.
pub fn mode_spectrum(wp: &WavePacket, grid: &FreqGrid) -> Result<ModeSpectrum> {
    wp.validate()?;
    use rustfft::{num_complex::Complex, FftPlanner};
    let len = grid.points;
    let dt_s = std::f64::consts::PI / grid.span;
    let window = (wp.dt / dt_s).round() as usize;
    if window < 8 || window >= len {
        return Err(Error::NumericalAccuracy(format!(
            "grid span {:.3e} gives {window} time samples across the window for {len} points",
            grid.span
        )));
    }
    let t0 = wp.center(0) - wp.dt / 2.0;
    let mut samples: Vec<f64> = (0..window)
        .map(|i| wp.raw(0, t0 + (i as f64 + 0.5) * dt_s))
        .collect();
    let norm = (samples.iter().map(|v| v * v).sum::<f64>() * dt_s).sqrt();
    if norm <= 0.0 {
        return Err(Error::InvalidParameter(
            "degenerate wave packet (zero discrete norm)".into(),
        ));
    }
    for v in &mut samples {
        *v /= norm;
    }
    let mut buf: Vec<Complex<f64>> = samples
        .iter()
        .map(|&v| Complex::new(v, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(len)
        .collect();
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    // node i corresponds to omega = (i - len/2) * step, i.e. DFT bin
    // (i - len/2) mod len; the +-Nyquist endpoints share a bin
    let n = grid.node_count();
    let scale = dt_s * dt_s / (2.0 * std::f64::consts::PI);
    let values: Vec<f64> = (0..n)
        .map(|i| {
            let j = (i + len / 2) % len;
            buf[j].norm_sqr() * scale
        })
        .collect();
    let mut spec = ModeSpectrum {
        grid: *grid,
        values,
        parseval_mass: 0.0,
    };
    let mass = spec.integrate(|_| 1.0);
    spec.parseval_mass = mass;
    if (mass - 1.0).abs() > 1e-4 {
        return Err(Error::NumericalAccuracy(format!(
            "Parseval drift {:.3e} exceeds 1e-4 (span {:.3e}, {} points)",
            (mass - 1.0).abs(),
            grid.span,
            grid.points
        )));
    }
    for v in &mut spec.values {
        *v /= mass;
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_normalization_is_unit() {
        let wp = WavePacket::experiment_default();
        let norm = wp.normalization().unwrap();
        // independent Simpson quadrature on a finer grid
        let t0 = wp.center(0);
        let m = 1 << 16;
        let h = wp.dt / m as f64;
        let total: f64 = (0..=m)
            .map(|i| {
                let f = wp.raw(0, t0 - wp.dt / 2.0 + i as f64 * h) / norm;
                let w = if i == 0 || i == m {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * f * f
            })
            .sum::<f64>()
            * h
            / 3.0;
        assert!((total - 1.0).abs() < 1e-10, "norm check {total}");
    }

    #[test]
    fn compact_support() {
        let wp = WavePacket::experiment_default();
        let t0 = wp.center(3);
        let eps = 1e-12;
        assert_eq!(wp.raw(3, t0 + wp.dt / 2.0 + eps), 0.0);
        assert_eq!(wp.raw(3, t0 - wp.dt / 2.0 - eps), 0.0);
        assert!(wp.raw(3, t0).abs() > 0.0);
    }

    #[test]
    fn parseval_holds_on_default_grid() {
        let wp = WavePacket::experiment_default();
        let grid = FreqGrid::default_for(&wp);
        let spec = mode_spectrum(&wp, &grid).unwrap();
        assert!(
            (spec.parseval_mass - 1.0).abs() < 1e-4,
            "parseval mass {}",
            spec.parseval_mass
        );
        // after renormalization the mass is exactly 1
        assert!((spec.integrate(|_| 1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn discrete_samples_are_orthonormal() {
        let wp = WavePacket::experiment_default();
        let s = wp.sampled(0).unwrap();
        assert_eq!(s.len(), 40);
        let ds = 1.0 / wp.sample_rate;
        let norm: f64 = s.iter().map(|v| v * v).sum::<f64>() * ds;
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_integer_window_rejected() {
        let wp = WavePacket {
            dt: 41.3e-9,
            ..WavePacket::experiment_default()
        };
        assert!(wp.sampled(0).is_err());
    }
}
