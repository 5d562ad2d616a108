//! The four six-term nullifiers of the two-dimensional cluster state.
//!
//! Anchored at temporal index `k`, each nullifier combines quadratures at
//! macronodes `k`, `k+1`, and `k+N` with coefficients `{1, 1, ±1/sqrt2 x4}`.
//! On the ideal state every one of them reduces to twice a single squeezed
//! source quadrature, so its variance is `2 e^{-2r}` and the shot-noise
//! reference is `2`.

use crate::error::{Error, Result};
use crate::mode::{mode, ModeId, Quadrature, Spatial};
use serde::{Deserialize, Serialize};
use std::fmt;

const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Which of the four nullifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NullifierKind {
    X1,
    P1,
    X2,
    P2,
}

impl NullifierKind {
    pub const ALL: [NullifierKind; 4] = [
        NullifierKind::X1,
        NullifierKind::P1,
        NullifierKind::X2,
        NullifierKind::P2,
    ];

    pub fn quadrature(self) -> Quadrature {
        match self {
            NullifierKind::X1 | NullifierKind::X2 => Quadrature::X,
            NullifierKind::P1 | NullifierKind::P2 => Quadrature::P,
        }
    }

    /// 1 connects along the helix circumference, 2 along its length.
    pub fn family(self) -> u8 {
        match self {
            NullifierKind::X1 | NullifierKind::P1 => 1,
            NullifierKind::X2 | NullifierKind::P2 => 2,
        }
    }

    /// The OPO whose squeezing this nullifier inherits on the ideal state.
    pub fn source(self) -> Spatial {
        match self {
            NullifierKind::P1 => Spatial::A,
            NullifierKind::X1 => Spatial::B,
            NullifierKind::P2 => Spatial::C,
            NullifierKind::X2 => Spatial::D,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "x1" | "X1" => Ok(NullifierKind::X1),
            "p1" | "P1" => Ok(NullifierKind::P1),
            "x2" | "X2" => Ok(NullifierKind::X2),
            "p2" | "P2" => Ok(NullifierKind::P2),
            other => Err(Error::InvalidParameter(format!(
                "unknown nullifier kind '{other}'"
            ))),
        }
    }
}

impl fmt::Display for NullifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NullifierKind::X1 => "x1",
            NullifierKind::P1 => "p1",
            NullifierKind::X2 => "x2",
            NullifierKind::P2 => "p2",
        };
        f.write_str(s)
    }
}

/// One term of a nullifier.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NullifierTerm {
    pub mode: ModeId,
    pub quadrature: Quadrature,
    pub coeff: f64,
}

/// Coefficient vector of one nullifier at anchor index `k`.
#[derive(Clone, Debug)]
pub struct NullifierSpec {
    pub k: u32,
    pub kind: NullifierKind,
    pub terms: Vec<NullifierTerm>,
}

impl NullifierSpec {
    /// Sum of squared coefficients; always 4 (the shot-noise reference is
    /// `4 * 1/2 = 2`).
    pub fn coeff_norm_sq(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff * t.coeff).sum()
    }

    pub fn as_tuples(&self) -> Vec<(ModeId, Quadrature, f64)> {
        self.terms
            .iter()
            .map(|t| (t.mode, t.quadrature, t.coeff))
            .collect()
    }

    /// Largest macronode index the nullifier touches (`k + N`).
    pub fn max_temporal(&self) -> u32 {
        self.terms.iter().map(|t| t.mode.temporal).max().unwrap_or(self.k)
    }
}

/// Exact six-term coefficient list of nullifier `kind` anchored at `k` for
/// helix period `n`.
pub fn nullifier_coeffs(k: u32, n: u32, kind: NullifierKind) -> NullifierSpec {
    use NullifierKind::*;
    use Quadrature::{P, X};
    use Spatial::*;
    let s = INV_SQRT2;
    let t = |sp, dk: u32, q, c: f64| NullifierTerm {
        mode: mode(sp, k + dk),
        quadrature: q,
        coeff: c,
    };
    let terms = match kind {
        X1 => vec![
            t(A, 0, X, 1.0),
            t(B, 0, X, 1.0),
            t(A, 1, X, s),
            t(B, 1, X, -s),
            t(C, n, X, -s),
            t(D, n, X, -s),
        ],
        P1 => vec![
            t(A, 0, P, 1.0),
            t(B, 0, P, 1.0),
            t(A, 1, P, -s),
            t(B, 1, P, s),
            t(C, n, P, s),
            t(D, n, P, s),
        ],
        X2 => vec![
            t(C, 0, X, 1.0),
            t(D, 0, X, -1.0),
            t(A, 1, X, s),
            t(B, 1, X, -s),
            t(C, n, X, s),
            t(D, n, X, s),
        ],
        P2 => vec![
            t(C, 0, P, 1.0),
            t(D, 0, P, -1.0),
            t(A, 1, P, -s),
            t(B, 1, P, s),
            t(C, n, P, -s),
            t(D, n, P, -s),
        ],
    };
    NullifierSpec { k, kind, terms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode::Spatial::*;

    #[test]
    fn x1_terms_match_the_stated_pattern() {
        let spec = nullifier_coeffs(0, 5, NullifierKind::X1);
        let s = INV_SQRT2;
        let expect = [
            (A, 0, 1.0),
            (B, 0, 1.0),
            (A, 1, s),
            (B, 1, -s),
            (C, 5, -s),
            (D, 5, -s),
        ];
        assert_eq!(spec.terms.len(), 6);
        for (term, (sp, k, c)) in spec.terms.iter().zip(expect) {
            assert_eq!(term.mode, mode(sp, k));
            assert_eq!(term.quadrature, Quadrature::X);
            assert!((term.coeff - c).abs() < 1e-15);
        }
    }

    #[test]
    fn p1_flips_the_shifted_group_sign() {
        let x = nullifier_coeffs(0, 5, NullifierKind::X1);
        let p = nullifier_coeffs(0, 5, NullifierKind::P1);
        for (tx, tp) in x.terms.iter().zip(&p.terms).skip(2) {
            assert!((tx.coeff + tp.coeff).abs() < 1e-15);
        }
        for (tx, tp) in x.terms.iter().zip(&p.terms).take(2) {
            assert!((tx.coeff - tp.coeff).abs() < 1e-15);
        }
    }

    #[test]
    fn coefficient_norm_is_four_units() {
        for kind in NullifierKind::ALL {
            let spec = nullifier_coeffs(3, 4, kind);
            assert!((spec.coeff_norm_sq() - 4.0).abs() < 1e-14);
            assert_eq!(spec.terms.len(), 6);
        }
    }
}
