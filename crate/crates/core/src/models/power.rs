//! Homodyne power spectra of the generated state.
//!
//! Each detector sees two delay-line interferometer fringes riding on the
//! four OPO spectra. For detector A measuring x (detection efficiency `eta`,
//! vacuum scaled to 1/2):
//!
//! ```text
//! <XA^2>(w) = [3/8 - cos(w tau1)/(2 sqrt2)] eta S+A
//!           + [3/8 + cos(w tau1)/(2 sqrt2)] eta S-B
//!           + eta/8 (S+C + S-D) + (1 - eta)/2
//! ```
//!
//! and correspondingly for the other channels, with `tau2` fringes on C/D.
//! Under identical OPOs the spectra swap between x and p across each
//! beam-splitter pair (`<XA^2> = <PB^2>` and so on), which is the standard
//! check that the right quadratures are being observed.

use super::{squeezing_spectrum, OpoParams, SqueezeBranch};
use crate::error::{Error, Result};
use crate::mode::{Quadrature, Spatial};

/// Spectral density of one homodyne channel at angular frequency `omega`.
#[allow(clippy::too_many_arguments)]
pub fn power_spectrum(
    detector: Spatial,
    quadrature: Quadrature,
    opos: &[OpoParams; 4],
    eta: f64,
    tau1: f64,
    tau2: f64,
    omega: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidParameter(format!(
            "detection efficiency eta = {eta} outside [0, 1]"
        )));
    }
    use SqueezeBranch::{Minus, Plus};
    let s = |i: usize, b| squeezing_spectrum(&opos[i], omega, b);
    let (a, b, c, d) = (0usize, 1usize, 2usize, 3usize);
    let isq = 1.0 / (2.0 * std::f64::consts::SQRT_2);
    let fringe1 = (omega * tau1).cos() * isq;
    let fringe2 = (omega * tau2).cos() * isq;
    let (lo1, hi1) = (3.0 / 8.0 - fringe1, 3.0 / 8.0 + fringe1);
    let (lo2, hi2) = (3.0 / 8.0 - fringe2, 3.0 / 8.0 + fringe2);
    let main = match (detector, quadrature) {
        (Spatial::A, Quadrature::X) => lo1 * s(a, Plus)? + hi1 * s(b, Minus)?,
        (Spatial::A, Quadrature::P) => lo1 * s(a, Minus)? + hi1 * s(b, Plus)?,
        (Spatial::B, Quadrature::X) => hi1 * s(a, Plus)? + lo1 * s(b, Minus)?,
        (Spatial::B, Quadrature::P) => hi1 * s(a, Minus)? + lo1 * s(b, Plus)?,
        (Spatial::C, Quadrature::X) => lo2 * s(c, Plus)? + hi2 * s(d, Minus)?,
        (Spatial::C, Quadrature::P) => lo2 * s(c, Minus)? + hi2 * s(d, Plus)?,
        (Spatial::D, Quadrature::X) => hi2 * s(c, Plus)? + lo2 * s(d, Minus)?,
        (Spatial::D, Quadrature::P) => hi2 * s(c, Minus)? + lo2 * s(d, Plus)?,
    };
    let epr = match (detector, quadrature) {
        (Spatial::A | Spatial::B, Quadrature::X) => s(c, Plus)? + s(d, Minus)?,
        (Spatial::A | Spatial::B, Quadrature::P) => s(c, Minus)? + s(d, Plus)?,
        (Spatial::C | Spatial::D, Quadrature::X) => s(a, Plus)? + s(b, Minus)?,
        (Spatial::C | Spatial::D, Quadrature::P) => s(a, Minus)? + s(b, Plus)?,
    };
    Ok(eta * (main + epr / 8.0) + (1.0 - eta) * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_opos() -> [OpoParams; 4] {
        [OpoParams {
            t: 0.14,
            l: 0.0025,
            xi: 0.65,
            omega0: 2.0 * std::f64::consts::PI * 80.0e6,
        }; 4]
    }

    const TAU1: f64 = 40e-9;
    const TAU2: f64 = 200e-9;

    #[test]
    fn swap_symmetry_under_identical_opos() {
        let opos = paper_opos();
        let pairs = [
            (Spatial::A, Spatial::B),
            (Spatial::B, Spatial::A),
            (Spatial::C, Spatial::D),
            (Spatial::D, Spatial::C),
        ];
        for i in 0..400 {
            let w = i as f64 * 2.0 * std::f64::consts::PI * 1.0e6;
            for (da, db) in pairs {
                let x = power_spectrum(da, Quadrature::X, &opos, 0.75, TAU1, TAU2, w).unwrap();
                let p = power_spectrum(db, Quadrature::P, &opos, 0.75, TAU1, TAU2, w).unwrap();
                assert!((x - p).abs() < 1e-13, "swap {da}->{db} at {w}");
            }
        }
    }

    #[test]
    fn no_pump_is_flat_vacuum() {
        let opos = [OpoParams {
            xi: 0.0,
            ..paper_opos()[0]
        }; 4];
        for i in 0..50 {
            let w = i as f64 * 2.0 * std::f64::consts::PI * 4.0e6;
            let v = power_spectrum(Spatial::A, Quadrature::X, &opos, 1.0, TAU1, TAU2, w).unwrap();
            assert!((v - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn spectrum_is_positive_and_eta_zero_is_vacuum() {
        let opos = paper_opos();
        for i in 0..200 {
            let w = (i as f64 - 100.0) * 2.0 * std::f64::consts::PI * 3.0e6;
            for det in Spatial::ALL {
                for q in [Quadrature::X, Quadrature::P] {
                    let v = power_spectrum(det, q, &opos, 0.75, TAU1, TAU2, w).unwrap();
                    assert!(v > 0.0);
                    let v0 = power_spectrum(det, q, &opos, 0.0, TAU1, TAU2, w).unwrap();
                    assert!((v0 - 0.5).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn fringe_periods_follow_the_delays() {
        // extrema of the A-channel fringe are spaced by pi/tau1, the
        // C-channel by pi/tau2 (five times faster at tau2 = 5 tau1);
        // measured above the OPO bandwidth so the Lorentzian envelope does
        // not displace the extrema
        let opos = paper_opos();
        let extremum_spacing = |det: Spatial, tau: f64| {
            let n = 8000;
            let w0 = 2.0 * std::f64::consts::PI * 400.0e6;
            let wmax = 2.0 * std::f64::consts::PI * 520.0e6;
            let h = (wmax - w0) / n as f64;
            let vals: Vec<f64> = (0..=n)
                .map(|i| {
                    power_spectrum(det, Quadrature::X, &opos, 0.75, TAU1, TAU2, w0 + i as f64 * h)
                        .unwrap()
                })
                .collect();
            let mut extrema = Vec::new();
            for i in 1..n {
                if (vals[i] - vals[i - 1]) * (vals[i + 1] - vals[i]) < 0.0 {
                    extrema.push(w0 + i as f64 * h);
                }
            }
            assert!(extrema.len() >= 3, "need fringes for {det}");
            let spacing: Vec<f64> = extrema.windows(2).map(|w| w[1] - w[0]).collect();
            let mean = spacing.iter().sum::<f64>() / spacing.len() as f64;
            let expect = std::f64::consts::PI / tau;
            assert!(
                (mean - expect).abs() < 2.0 * h,
                "{det}: spacing {mean} vs {expect}"
            );
        };
        extremum_spacing(Spatial::A, TAU1);
        extremum_spacing(Spatial::C, TAU2);
    }
}
