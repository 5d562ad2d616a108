//! Graph representation of pure Gaussian states.
//!
//! A pure `M`-mode Gaussian state with zero mean corresponds one-to-one to a
//! complex symmetric matrix `Z = V + iU` (`U` positive definite) through the
//! position wavefunction `psi(x) ~ exp(i x^T Z x / 2)`. The covariance blocks
//! are
//!
//! ```text
//! cov_xx = U^{-1} / 2,   cov_xp = U^{-1} V / 2,   cov_pp = (U + V U^{-1} V) / 2.
//! ```
//!
//! For states built from squeezed vacua and beam splitters alone, `V = 0` and
//! the graph edges live in the off-diagonal of `U`; a two-mode EPR pair has
//! `U = [[cosh 2r, -sinh 2r], [-sinh 2r, cosh 2r]]`, i.e. edge weight
//! `sinh 2r` with self-loops `cosh 2r`.

use super::GaussianState;
use crate::error::{Error, Result};
use crate::mode::ModeId;
use nalgebra::{DMatrix, DVector};

/// Purity tolerance for graph extraction: `|det(2 cov) - 1| <= 1e-6`.
pub const PURITY_TOL: f64 = 1e-6;

/// Graph of a pure Gaussian state: real part `V` (position-space edges) and
/// imaginary part `U` (self-loops plus the edges of beam-splitter networks).
#[derive(Clone, Debug)]
pub struct GraphZ {
    pub modes: Vec<ModeId>,
    pub v: DMatrix<f64>,
    pub u: DMatrix<f64>,
}

impl GraphZ {
    /// Extract the graph from a pure state.
    pub fn from_state(state: &GaussianState) -> Result<Self> {
        let det = state.purity_det();
        if (det - 1.0).abs() > PURITY_TOL {
            return Err(Error::NotPure { det });
        }
        let m = state.num_modes();
        let cov = state.cov();
        let sxx = cov.view((0, 0), (m, m)).into_owned();
        let sxp = cov.view((0, m), (m, m)).into_owned();
        let u_inv = 2.0 * &sxx;
        let u = u_inv.clone().try_inverse().ok_or_else(|| {
            Error::NumericalAccuracy("x-block covariance is singular".into())
        })?;
        let v = 2.0 * &u * &sxp;
        let sym = |m: &DMatrix<f64>| (m + m.transpose()) * 0.5;
        Ok(GraphZ {
            modes: state.modes().to_vec(),
            v: sym(&v),
            u: sym(&u),
        })
    }

    /// Rebuild the zero-mean pure state from the graph.
    pub fn to_state(&self) -> Result<GaussianState> {
        let m = self.modes.len();
        if self.u.nrows() != m || self.v.nrows() != m {
            return Err(Error::InvalidParameter(
                "graph matrix dimensions do not match the mode list".into(),
            ));
        }
        let u_inv = self.u.clone().try_inverse().ok_or_else(|| {
            Error::InvalidParameter("U is not invertible (must be positive definite)".into())
        })?;
        let sxx = &u_inv * 0.5;
        let sxp = &u_inv * &self.v * 0.5;
        let spp = (&self.u + &self.v * &u_inv * &self.v) * 0.5;
        let mut cov = DMatrix::zeros(2 * m, 2 * m);
        cov.view_mut((0, 0), (m, m)).copy_from(&sxx);
        cov.view_mut((0, m), (m, m)).copy_from(&sxp);
        cov.view_mut((m, 0), (m, m)).copy_from(&sxp.transpose());
        cov.view_mut((m, m), (m, m)).copy_from(&spp);
        let cov = (&cov + cov.transpose()) * 0.5;
        Ok(GaussianState {
            modes: self.modes.clone(),
            mean: DVector::zeros(2 * m),
            cov,
        })
    }

    /// Magnitude of the edge between two modes: `|V_jl| + |U_jl|` off the
    /// diagonal.
    pub fn edge_weight(&self, a: usize, b: usize) -> f64 {
        if a == b {
            0.0
        } else {
            self.v[(a, b)].abs() + self.u[(a, b)].abs()
        }
    }

    /// Indices of modes adjacent to `a` with edge weight above `tol`.
    pub fn neighbors(&self, a: usize, tol: f64) -> Vec<usize> {
        (0..self.modes.len())
            .filter(|&b| b != a && self.edge_weight(a, b) > tol)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{beamsplitter_50, squeezer, BsOrientation};
    use crate::mode::{mode, Spatial::*};

    #[test]
    fn vacuum_graph_is_trivial() {
        let s = GaussianState::vacuum(&[mode(A, 0), mode(B, 0)]).unwrap();
        let g = s.to_graph().unwrap();
        assert!(g.v.norm() < 1e-12);
        assert!((&g.u - DMatrix::<f64>::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn p_squeezed_vacuum_self_loop() {
        let r = 0.85;
        let mut s = GaussianState::vacuum(&[mode(A, 0)]).unwrap();
        s.apply_symplectic(&squeezer(-r), &[mode(A, 0)]).unwrap();
        let g = s.to_graph().unwrap();
        assert!(g.v.norm() < 1e-12);
        assert!((g.u[(0, 0)] - (-2.0 * r).exp()).abs() < 1e-12);
    }

    #[test]
    fn epr_graph_structure_and_roundtrip() {
        let r = 0.6;
        let (ma, mb) = (mode(A, 0), mode(B, 0));
        let mut s = GaussianState::vacuum(&[ma, mb]).unwrap();
        s.apply_symplectic(&squeezer(-r), &[ma]).unwrap();
        s.apply_symplectic(&squeezer(r), &[mb]).unwrap();
        s.apply_symplectic(&beamsplitter_50(BsOrientation::MinusOnSecond), &[ma, mb])
            .unwrap();
        let g = s.to_graph().unwrap();
        // cosh/sinh structure of the finite-squeezing EPR pair
        assert!((g.u[(0, 0)] - (2.0 * r).cosh()).abs() < 1e-10);
        assert!((g.u[(0, 1)].abs() - (2.0 * r).sinh()).abs() < 1e-10);
        assert!(g.v.norm() < 1e-10, "beam-splitter circuits keep V = 0");
        // round-trip identity
        let back = g.to_state().unwrap();
        assert!((back.cov() - s.cov()).norm() < 1e-8);
    }

    #[test]
    fn impure_state_rejected() {
        let mut s = GaussianState::vacuum(&[mode(A, 0)]).unwrap();
        s.apply_loss(mode(A, 0), 0.5).unwrap();
        // first squeeze so the loss actually mixes the state
        s.apply_symplectic(&squeezer(1.0), &[mode(A, 0)]).unwrap();
        s.apply_loss(mode(A, 0), 0.5).unwrap();
        assert!(matches!(s.to_graph(), Err(Error::NotPure { .. })));
    }
}
