//! Nullifier variances under optical loss and delay-length mismatch.
//!
//! In the frequency domain the four nullifier variances are weighted
//! integrals of the OPO spectra over the wave-packet mode spectrum. With a
//! long-delay mismatch `dtau2` the weights are
//!
//! ```text
//! w1(w) = |(1 - e^{i w dtau2}) / 2|^2 = sin^2(w dtau2 / 2)
//! w2(w) = |(3 + e^{i w dtau2}) / 2|^2 = (5 + 3 cos(w dtau2)) / 2
//! ```
//!
//! and, per kind (detection efficiency `eta`, vacuum scaled to 1/2):
//!
//! ```text
//! V(x1) = eta Int |f~|^2 { w1 S+A + w2 S-B + w1 (S+C + S-D) } dw + 2 (1 - eta)
//! V(p1) = eta Int |f~|^2 { w2 S-A + w1 S+B + w1 (S-C + S+D) } dw + 2 (1 - eta)
//! V(x2) = eta Int |f~|^2 { w1 S+C + w2 S-D + w1 (S+A + S-B) } dw + 2 (1 - eta)
//! V(p2) = eta Int |f~|^2 { w2 S-C + w1 S+D + w1 (S-A + S+B) } dw + 2 (1 - eta)
//! ```
//!
//! At `dtau2 = 0` these reduce to `4 Int |f~|^2 [eta S- + (1-eta)/2] dw` with
//! the squeezed branch of the kind's source OPO.

use super::{mode_spectrum, squeezing_spectrum, FreqGrid, OpoParams, SqueezeBranch, WavePacket};
use crate::error::{Error, Result};
use crate::pipeline::NullifierKind;
use crate::variance_db;

/// Result of the model evaluation with its grid-convergence diagnostics.
#[derive(Clone, Copy, Debug)]
pub struct NullifierModelResult {
    pub variance: f64,
    pub db: f64,
    /// dB change in the last grid refinement (must be below 1e-3).
    pub last_refinement_db: f64,
}

/// Integrand with the flat vacuum part removed. The interferometer weights
/// obey `3 w1 + w2 = 4` identically, so the vacuum throughput contributes
/// exactly `4 * 1/2 = 2` per unit spectral mass; what remains decays like
/// `1/omega^2` and its product with `|f~|^2` converges fast under grid
/// refinement.
fn kind_correction(
    kind: NullifierKind,
    opos: &[OpoParams; 4],
    omega: f64,
    dtau2: f64,
) -> Result<f64> {
    use NullifierKind::*;
    use SqueezeBranch::{Minus, Plus};
    let s = |i: usize, b| -> Result<f64> { Ok(squeezing_spectrum(&opos[i], omega, b)? - 0.5) };
    let (a, b, c, d) = (0usize, 1usize, 2usize, 3usize);
    let half = omega * dtau2 / 2.0;
    let w1 = half.sin() * half.sin();
    let w2 = (5.0 + 3.0 * (omega * dtau2).cos()) / 2.0;
    Ok(match kind {
        X1 => w1 * s(a, Plus)? + w2 * s(b, Minus)? + w1 * (s(c, Plus)? + s(d, Minus)?),
        P1 => w2 * s(a, Minus)? + w1 * s(b, Plus)? + w1 * (s(c, Minus)? + s(d, Plus)?),
        X2 => w1 * s(c, Plus)? + w2 * s(d, Minus)? + w1 * (s(a, Plus)? + s(b, Minus)?),
        P2 => w2 * s(c, Minus)? + w1 * s(d, Plus)? + w1 * (s(a, Minus)? + s(b, Plus)?),
    })
}

fn evaluate_on_grid(
    opos: &[OpoParams; 4],
    wp: &WavePacket,
    eta: f64,
    dtau2: f64,
    kind: NullifierKind,
    grid: &FreqGrid,
) -> Result<f64> {
    let spec = mode_spectrum(wp, grid)?;
    let n = spec.grid.node_count();
    let h = spec.grid.step();
    let mut acc = 0.0;
    for i in 0..n {
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let omega = spec.grid.omega(i);
        acc += w * spec.values[i] * kind_correction(kind, opos, omega, dtau2)?;
    }
    // vacuum throughput (exactly 2) + spectral correction + detection vacuum
    Ok(eta * (2.0 + acc * h) + 2.0 * (1.0 - eta))
}

/// Evaluate one nullifier variance, refining the frequency grid until the
/// dB value moves by less than 1e-3.
pub fn nullifier_variance_model(
    opos: &[OpoParams; 4],
    wp: &WavePacket,
    eta: f64,
    dtau2: f64,
    kind: NullifierKind,
) -> Result<NullifierModelResult> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidParameter(format!(
            "detection efficiency eta = {eta} outside [0, 1]"
        )));
    }
    for opo in opos {
        opo.validate()?;
    }
    wp.validate()?;
    let mut grid = FreqGrid::default_for(wp);
    if dtau2 != 0.0 {
        // resolve the mismatch fringes: at least ~50 grid points per period
        let needed = 50.0 * 2.0 * grid.span * dtau2.abs() / (2.0 * std::f64::consts::PI);
        while (grid.points as f64) < needed {
            grid.points *= 2;
        }
    }
    let mut prev = evaluate_on_grid(opos, wp, eta, dtau2, kind, &grid)?;
    for _ in 0..4 {
        grid = grid.refined();
        let cur = evaluate_on_grid(opos, wp, eta, dtau2, kind, &grid)?;
        let delta = (variance_db(cur) - variance_db(prev)).abs();
        if delta < 1e-3 {
            return Ok(NullifierModelResult {
                variance: cur,
                db: variance_db(cur),
                last_refinement_db: delta,
            });
        }
        prev = cur;
    }
    Err(Error::NumericalAccuracy(
        "nullifier variance did not converge under grid refinement".into(),
    ))
}

/// Scalar squeezing parameter that makes the ideal pipeline reproduce the
/// model variance at zero mismatch:
/// `r = -ln(Int |f~|^2 [2 eta S- + (1-eta)] dw)/2`, i.e. `2 e^{-2r}` equals
/// the zero-mismatch model variance by construction.
pub fn effective_squeezing(opo: &OpoParams, wp: &WavePacket, eta: f64) -> Result<f64> {
    let opos = [*opo; 4];
    // the x1 variance at dtau2 = 0 is 4 Int |f~|^2 [eta S-B + (1-eta)/2] dw
    // with S-B this OPO's squeezed branch
    let v = nullifier_variance_model(&opos, wp, eta, 0.0, NullifierKind::X1)?.variance;
    Ok(-0.5 * (v / 2.0).ln())
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

    fn wp() -> WavePacket {
        WavePacket::experiment_default()
    }

    #[test]
    fn vacuum_throughput_is_reference_for_any_mismatch() {
        // eta = 1, xi = 0: the weights sum to 4 at every frequency, so the
        // variance is the 2.0 reference regardless of dtau2
        let opos = [OpoParams {
            xi: 0.0,
            ..paper_opos()[0]
        }; 4];
        for dtau2 in [0.0, 3e-9, 25e-9] {
            let r =
                nullifier_variance_model(&opos, &wp(), 1.0, dtau2, NullifierKind::X1).unwrap();
            assert!((r.variance - 2.0).abs() < 1e-9, "dtau2={dtau2}: {}", r.variance);
        }
    }

    #[test]
    fn mismatch_degrades_the_nullifier() {
        let opos = paper_opos();
        let v0 = nullifier_variance_model(&opos, &wp(), 0.75, 0.0, NullifierKind::X1)
            .unwrap()
            .variance;
        let mut prev = v0;
        for dtau2 in [0.2e-9, 0.5e-9, 1.0e-9] {
            let v = nullifier_variance_model(&opos, &wp(), 0.75, dtau2, NullifierKind::X1)
                .unwrap()
                .variance;
            assert!(v >= prev - 1e-12, "dtau2={dtau2}: {v} < {prev}");
            prev = v;
        }
        assert!(prev > v0 + 1e-4, "anti-squeezing must leak in");
    }

    #[test]
    fn model_is_monotone_in_eta() {
        let opos = paper_opos();
        let mut prev = f64::INFINITY;
        for eta in [0.5, 0.6, 0.7, 0.8, 0.9, 1.0] {
            let v = nullifier_variance_model(&opos, &wp(), eta, 0.0, NullifierKind::P2)
                .unwrap()
                .variance;
            assert!(v < prev, "eta={eta}");
            prev = v;
        }
    }

    #[test]
    fn effective_squeezing_limits() {
        let vac = OpoParams {
            xi: 0.0,
            ..paper_opos()[0]
        };
        let r = effective_squeezing(&vac, &wp(), 1.0).unwrap();
        assert!(r.abs() < 1e-9, "xi=0, eta=1 gives r=0, got {r}");
        // monotone in xi below threshold
        let mut prev = -1.0;
        for xi in [0.1, 0.3, 0.5, 0.65, 0.8] {
            let p = OpoParams {
                xi,
                ..paper_opos()[0]
            };
            let r = effective_squeezing(&p, &wp(), 0.75).unwrap();
            assert!(r > prev);
            prev = r;
        }
    }

    #[test]
    fn effective_squeezing_matches_model_variance() {
        let opos = paper_opos();
        let model = nullifier_variance_model(&opos, &wp(), 0.75, 0.0, NullifierKind::X1)
            .unwrap()
            .variance;
        let r = effective_squeezing(&opos[0], &wp(), 0.75).unwrap();
        assert!(
            (2.0 * (-2.0 * r).exp() - model).abs() < 1e-9,
            "2e^-2r = {} vs model {model}",
            2.0 * (-2.0 * r).exp()
        );
    }
}
