//! Small statistics and numeric helpers shared across modules.

use crate::error::{Error, Result};

/// Sample mean and (unbiased) variance.
pub fn mean_var(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, var)
}

/// Standard error of a dB-scale variance estimate from `n` samples:
/// `10/ln10 * sqrt(2/n)`.
pub fn stderr_db(n: usize) -> f64 {
    if n < 2 {
        return f64::INFINITY;
    }
    10.0 / std::f64::consts::LN_10 * (2.0 / n as f64).sqrt()
}

/// Ordinary least squares for `y = a + b x`; returns `(intercept, slope)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::FitError(format!(
            "need at least two matched points, got {} x / {} y",
            x.len(),
            y.len()
        )));
    }
    let n = x.len() as f64;
    let sx = x.iter().sum::<f64>();
    let sy = y.iter().sum::<f64>();
    let sxx = x.iter().map(|v| v * v).sum::<f64>();
    let sxy = x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    let det = n * sxx - sx * sx;
    if det.abs() < 1e-300 || x.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::FitError("rank-deficient fit (constant abscissa)".into()));
    }
    let slope = (n * sxy - sx * sy) / det;
    let intercept = (sy - slope * sx) / n;
    Ok((intercept, slope))
}

/// Deterministic stream splitting: derive a child seed from a base seed and a
/// stream index (splitmix64 finalizer).
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base
        .wrapping_add(0x9e3779b97f4a7c15)
        .wrapping_add(stream.wrapping_mul(0xbf58476d1ce4e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_fit_exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| 2.5 * v - 0.75).collect();
        let (a, b) = linear_fit(&x, &y).unwrap();
        assert!((a + 0.75).abs() < 1e-12);
        assert!((b - 2.5).abs() < 1e-12);
    }

    #[test]
    fn linear_fit_rank_deficient() {
        let x = [1.0, 1.0, 1.0];
        let y = [0.0, 1.0, 2.0];
        assert!(matches!(linear_fit(&x, &y), Err(Error::FitError(_))));
    }

    #[test]
    fn derive_seed_spreads_streams() {
        let a = derive_seed(42, 0);
        let b = derive_seed(42, 1);
        assert_ne!(a, b);
        assert_eq!(a, derive_seed(42, 0));
    }

    #[test]
    fn stderr_db_at_12000_is_about_six_hundredths() {
        let se = stderr_db(12_000);
        assert!((se - 0.056).abs() < 0.005, "stderr {se}");
    }
}
