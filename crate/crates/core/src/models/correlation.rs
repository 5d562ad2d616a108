//! Correlation coefficient between the quadratures of adjacent wave-packet
//! windows, `C(m) = <q_k q_{k+m}> / <q_k q_k>`.
//!
//! Used to confirm that the chosen mode function keeps neighboring windows
//! independent once the detection chain's filters are accounted for.

use crate::error::{Error, Result};

/// Empirical correlation coefficient at window offset `m` from per-frame
/// window quadratures (`windows[frame][k]`).
pub fn correlation_coefficient(windows: &[Vec<f64>], m: usize) -> Result<f64> {
    if windows.is_empty() || windows.iter().any(|f| f.len() < m + 1) {
        return Err(Error::InvalidParameter(
            "need at least m+1 windows in every frame".into(),
        ));
    }
    if windows[0].len() < 2 {
        return Err(Error::InvalidParameter(
            "need at least two adjacent windows".into(),
        ));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    let mut count = 0usize;
    for frame in windows {
        for k in 0..frame.len() - m {
            num += frame[k] * frame[k + m];
            den += frame[k] * frame[k];
            count += 1;
        }
    }
    if count == 0 || den.abs() < 1e-300 {
        return Err(Error::Degenerate(
            "zero denominator in correlation estimate".into(),
        ));
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn zero_offset_is_exactly_one() {
        let frames = vec![vec![0.3, -0.8, 1.2], vec![0.1, 0.4, -0.2]];
        assert_eq!(correlation_coefficient(&frames, 0).unwrap(), 1.0);
    }

    #[test]
    fn independent_windows_decorrelate() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let frames: Vec<Vec<f64>> = (0..2000)
            .map(|_| (0..10).map(|_| normal.sample(&mut rng)).collect())
            .collect();
        let c1 = correlation_coefficient(&frames, 1).unwrap();
        // ~18k products, statistical scale ~ 1/sqrt(18k) ~ 0.0075
        assert!(c1.abs() < 0.03, "C(1) = {c1}");
    }

    #[test]
    fn too_few_windows_rejected() {
        let frames = vec![vec![1.0]];
        assert!(correlation_coefficient(&frames, 1).is_err());
    }
}
