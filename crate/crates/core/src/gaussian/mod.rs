//! Exact finite-dimensional Gaussian-state engine.
//!
//! A state over `M` modes is a mean vector of length `2M` and a symmetric
//! `2M x 2M` covariance matrix in `(x_1..x_M, p_1..p_M)` ordering, with
//! `hbar = 1` so the vacuum has quadrature variance `1/2`. All operations
//! update the state in place behind `&mut self`; states are plain values and
//! can be cloned or sent across threads freely.

mod graph;
mod symplectic;

pub use graph::GraphZ;
pub use symplectic::{
    beamsplitter_50, direct_sum, identity_op, omega, qnd_cx, rotation, squeezer, BsOrientation,
    SymplecticOp,
};

use crate::error::{Error, Result};
use crate::mode::{ModeId, Quadrature};
use crate::VACUUM_VARIANCE;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Normal};

/// How a homodyne outcome is produced.
pub enum Outcome<'a, R: Rng> {
    /// Draw from the marginal normal distribution of the measured quadrature.
    Sample(&'a mut R),
    /// Force a specific outcome (deterministic tests, ledger bookkeeping).
    Forced(f64),
}

/// Gaussian state: ordered mode list, mean vector, covariance matrix.
#[derive(Clone, Debug)]
pub struct GaussianState {
    modes: Vec<ModeId>,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Vacuum state over the given modes: zero mean, covariance `I/2`.
    pub fn vacuum(modes: &[ModeId]) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidModes("mode list is empty".into()));
        }
        let mut sorted = modes.to_vec();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != modes.len() {
            return Err(Error::InvalidModes("duplicate mode ids".into()));
        }
        let m = modes.len();
        Ok(GaussianState {
            modes: modes.to_vec(),
            mean: DVector::zeros(2 * m),
            cov: DMatrix::identity(2 * m, 2 * m) * VACUUM_VARIANCE,
        })
    }

    /// An empty state (no modes). Useful as a fold seed.
    pub fn empty() -> Self {
        GaussianState {
            modes: Vec::new(),
            mean: DVector::zeros(0),
            cov: DMatrix::zeros(0, 0),
        }
    }

    pub fn num_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn modes(&self) -> &[ModeId] {
        &self.modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn contains(&self, mode: ModeId) -> bool {
        self.modes.contains(&mode)
    }

    /// Position of `mode` in the mode list.
    pub fn index_of(&self, mode: ModeId) -> Option<usize> {
        self.modes.iter().position(|&m| m == mode)
    }

    /// Coordinate index of one quadrature of `mode` inside mean/cov.
    pub fn coord(&self, mode: ModeId, quad: Quadrature) -> Result<usize> {
        let i = self.index_of(mode).ok_or_else(|| Error::unknown_mode(mode))?;
        Ok(match quad {
            Quadrature::X => i,
            Quadrature::P => self.modes.len() + i,
        })
    }

    /// Append fresh vacuum modes, uncorrelated with the existing ones.
    pub fn add_vacuum(&mut self, modes: &[ModeId]) -> Result<()> {
        for &m in modes {
            if self.contains(m) {
                return Err(Error::InvalidModes(format!("mode {m} already present")));
            }
        }
        let mut dedup = modes.to_vec();
        dedup.sort();
        dedup.dedup();
        if dedup.len() != modes.len() {
            return Err(Error::InvalidModes("duplicate mode ids".into()));
        }
        let old = self.modes.len();
        let add = modes.len();
        let new = old + add;
        let mut cov = DMatrix::zeros(2 * new, 2 * new);
        let mut mean = DVector::zeros(2 * new);
        // old x-block, p-block move to the enlarged layout
        for i in 0..old {
            mean[i] = self.mean[i];
            mean[new + i] = self.mean[old + i];
        }
        for i in 0..old {
            for j in 0..old {
                cov[(i, j)] = self.cov[(i, j)];
                cov[(i, new + j)] = self.cov[(i, old + j)];
                cov[(new + i, j)] = self.cov[(old + i, j)];
                cov[(new + i, new + j)] = self.cov[(old + i, old + j)];
            }
        }
        for i in old..new {
            cov[(i, i)] = VACUUM_VARIANCE;
            cov[(new + i, new + i)] = VACUUM_VARIANCE;
        }
        self.modes.extend_from_slice(modes);
        self.cov = cov;
        self.mean = mean;
        Ok(())
    }

    /// Forget modes: remove their rows/columns without conditioning.
    ///
    /// The reduced state over the remaining modes is exact (Gaussian
    /// marginalization is a principal submatrix).
    pub fn remove_modes(&mut self, modes: &[ModeId]) -> Result<()> {
        let mut drop = Vec::with_capacity(modes.len());
        for &m in modes {
            drop.push(self.index_of(m).ok_or_else(|| Error::unknown_mode(m))?);
        }
        let old = self.modes.len();
        let keep: Vec<usize> = (0..old).filter(|i| !drop.contains(i)).collect();
        let new = keep.len();
        let mut cov = DMatrix::zeros(2 * new, 2 * new);
        let mut mean = DVector::zeros(2 * new);
        for (a, &i) in keep.iter().enumerate() {
            mean[a] = self.mean[i];
            mean[new + a] = self.mean[old + i];
            for (b, &j) in keep.iter().enumerate() {
                cov[(a, b)] = self.cov[(i, j)];
                cov[(a, new + b)] = self.cov[(i, old + j)];
                cov[(new + a, b)] = self.cov[(old + i, j)];
                cov[(new + a, new + b)] = self.cov[(old + i, old + j)];
            }
        }
        self.modes = keep.iter().map(|&i| self.modes[i]).collect();
        self.cov = cov;
        self.mean = mean;
        Ok(())
    }

    /// Apply a symplectic map to the listed target modes.
    ///
    /// The operation matrix is in `(x_1..x_m, p_1..p_m)` ordering of the
    /// target list; non-target blocks of the covariance update consistently.
    pub fn apply_symplectic(&mut self, op: &SymplecticOp, targets: &[ModeId]) -> Result<()> {
        if targets.len() != op.arity() {
            return Err(Error::InvalidModes(format!(
                "operation arity {} does not match {} targets",
                op.arity(),
                targets.len()
            )));
        }
        let m = self.modes.len();
        let mut coords = Vec::with_capacity(2 * targets.len());
        for &t in targets {
            let i = self.index_of(t).ok_or_else(|| Error::unknown_mode(t))?;
            coords.push(i);
        }
        {
            let mut seen = coords.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != coords.len() {
                return Err(Error::InvalidModes("repeated target mode".into()));
            }
        }
        // full coordinate list: x's then p's of the targets
        let coords: Vec<usize> = coords
            .iter()
            .map(|&i| i)
            .chain(coords.iter().map(|&i| m + i))
            .collect();
        let s = op.matrix();
        let d = coords.len();
        // mean[R] <- S mean[R]
        let mut v = DVector::zeros(d);
        for (a, &i) in coords.iter().enumerate() {
            v[a] = self.mean[i];
        }
        let v = s * v;
        for (a, &i) in coords.iter().enumerate() {
            self.mean[i] = v[a];
        }
        // cov <- S cov S^T, touching only rows/cols in R
        let n = 2 * m;
        let mut rows = DMatrix::zeros(d, n);
        for (a, &i) in coords.iter().enumerate() {
            rows.row_mut(a).copy_from(&self.cov.row(i));
        }
        let rows = s * rows;
        for (a, &i) in coords.iter().enumerate() {
            self.cov.row_mut(i).copy_from(&rows.row(a));
        }
        let mut cols = DMatrix::zeros(n, d);
        for (a, &i) in coords.iter().enumerate() {
            cols.column_mut(a).copy_from(&self.cov.column(i));
        }
        let cols = cols * s.transpose();
        for (a, &i) in coords.iter().enumerate() {
            self.cov.column_mut(i).copy_from(&cols.column(a));
        }
        self.symmetrize();
        Ok(())
    }

    /// Pure loss channel on one mode: transmission `eta`, vacuum admixture
    /// `1 - eta`.
    pub fn apply_loss(&mut self, mode: ModeId, eta: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidParameter(format!(
                "transmission eta = {eta} outside [0, 1]"
            )));
        }
        let m = self.modes.len();
        let i = self.index_of(mode).ok_or_else(|| Error::unknown_mode(mode))?;
        let (xi, pi) = (i, m + i);
        let sq = eta.sqrt();
        let n = 2 * m;
        for &c in &[xi, pi] {
            for j in 0..n {
                self.cov[(c, j)] *= sq;
                self.cov[(j, c)] *= sq;
            }
            self.mean[c] *= sq;
        }
        // the diagonal block was scaled by eta above; add the vacuum term
        let vac = (1.0 - eta) * VACUUM_VARIANCE;
        self.cov[(xi, xi)] += vac;
        self.cov[(pi, pi)] += vac;
        self.symmetrize();
        Ok(())
    }

    /// Homodyne measurement of `x cos(theta) + p sin(theta)` on one mode.
    ///
    /// The remaining modes are conditioned with the standard Gaussian update
    /// in the infinitely-precise-measurement limit, and the measured mode is
    /// removed. Returns the outcome.
    pub fn measure_homodyne<R: Rng>(
        &mut self,
        mode: ModeId,
        theta: f64,
        outcome: Outcome<'_, R>,
    ) -> Result<f64> {
        let m = self.modes.len();
        let i = self.index_of(mode).ok_or_else(|| Error::unknown_mode(mode))?;
        let mut c = DVector::zeros(2 * m);
        c[i] = theta.cos();
        c[m + i] = theta.sin();
        let sc = &self.cov * &c;
        let var = c.dot(&sc);
        if var <= 0.0 {
            return Err(Error::NumericalAccuracy(format!(
                "measured quadrature variance {var:.3e} is not positive"
            )));
        }
        let mu = c.dot(&self.mean);
        let v = match outcome {
            Outcome::Sample(rng) => {
                let normal = Normal::new(mu, var.sqrt()).map_err(|e| {
                    Error::NumericalAccuracy(format!("normal sampling failed: {e}"))
                })?;
                normal.sample(rng)
            }
            Outcome::Forced(v) => v,
        };
        let gain = &sc / var;
        self.mean += &gain * (v - mu);
        self.cov -= &sc * (sc.transpose() / var);
        self.symmetrize();
        self.remove_modes(&[mode])?;
        Ok(v)
    }

    /// Variance of a linear quadrature combination given as a full-length
    /// coefficient vector in `(x.., p..)` ordering.
    pub fn quadrature_variance(&self, coeffs: &DVector<f64>) -> Result<f64> {
        if coeffs.len() != 2 * self.modes.len() {
            return Err(Error::InvalidParameter(format!(
                "coefficient length {} != 2M = {}",
                coeffs.len(),
                2 * self.modes.len()
            )));
        }
        Ok(coeffs.dot(&(&self.cov * coeffs)))
    }

    /// Variance of a combination given as sparse `(mode, quadrature, coeff)`
    /// terms.
    pub fn combination_variance(&self, terms: &[(ModeId, Quadrature, f64)]) -> Result<f64> {
        let mut c = DVector::zeros(2 * self.modes.len());
        for &(mode, quad, coeff) in terms {
            c[self.coord(mode, quad)?] += coeff;
        }
        self.quadrature_variance(&c)
    }

    /// Mean of a sparse quadrature combination.
    pub fn combination_mean(&self, terms: &[(ModeId, Quadrature, f64)]) -> Result<f64> {
        let mut acc = 0.0;
        for &(mode, quad, coeff) in terms {
            acc += coeff * self.mean[self.coord(mode, quad)?];
        }
        Ok(acc)
    }

    /// Displace the mean of one mode.
    pub fn displace(&mut self, mode: ModeId, dx: f64, dp: f64) -> Result<()> {
        let m = self.modes.len();
        let i = self.index_of(mode).ok_or_else(|| Error::unknown_mode(mode))?;
        self.mean[i] += dx;
        self.mean[m + i] += dp;
        Ok(())
    }

    /// `det(2 cov)`; equals 1 for pure states.
    pub fn purity_det(&self) -> f64 {
        (2.0 * &self.cov).determinant()
    }

    /// Uncertainty-relation check: `cov + (i/2) Omega >= 0`, evaluated through
    /// the real symmetric embedding of the Hermitian matrix. Eigenvalues are
    /// clamped at `-1e-12` before the comparison.
    pub fn check_uncertainty(&self, tol: f64) -> Result<()> {
        let min = self.min_uncertainty_eigenvalue();
        let min = if min > -1e-12 { min.max(0.0) } else { min };
        if min < -tol {
            return Err(Error::NumericalAccuracy(format!(
                "uncertainty relation violated: min eigenvalue {min:.3e}"
            )));
        }
        Ok(())
    }

    /// Smallest eigenvalue of `cov + (i/2) Omega`.
    pub fn min_uncertainty_eigenvalue(&self) -> f64 {
        let m = self.modes.len();
        let n = 2 * m;
        // H = cov + i B with B = Omega/2; real embedding [[cov, -B], [B, cov]]
        let mut emb = DMatrix::zeros(2 * n, 2 * n);
        emb.view_mut((0, 0), (n, n)).copy_from(&self.cov);
        emb.view_mut((n, n), (n, n)).copy_from(&self.cov);
        for i in 0..m {
            // Omega/2: [x_i, p_i] block => +1/2 at (i, m+i), -1/2 at (m+i, i)
            emb[(i, n + m + i)] = -0.5;
            emb[(m + i, n + i)] = 0.5;
            emb[(n + i, m + i)] = 0.5;
            emb[(n + m + i, i)] = -0.5;
        }
        emb.symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    /// Joint graph extraction; see [`GraphZ`].
    pub fn to_graph(&self) -> Result<GraphZ> {
        GraphZ::from_state(self)
    }

    fn symmetrize(&mut self) {
        let t = self.cov.transpose();
        self.cov += t;
        self.cov *= 0.5;
    }

    /// Reorder the mode list (and mean/covariance) to match `order`.
    pub fn reorder(&mut self, order: &[ModeId]) -> Result<()> {
        if order.len() != self.modes.len() {
            return Err(Error::InvalidModes("reorder list length mismatch".into()));
        }
        let m = self.modes.len();
        let mut perm = Vec::with_capacity(m);
        for &mode in order {
            perm.push(self.index_of(mode).ok_or_else(|| Error::unknown_mode(mode))?);
        }
        {
            let mut seen = perm.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != m {
                return Err(Error::InvalidModes("reorder list has duplicates".into()));
            }
        }
        let mut cov = DMatrix::zeros(2 * m, 2 * m);
        let mut mean = DVector::zeros(2 * m);
        for (a, &i) in perm.iter().enumerate() {
            mean[a] = self.mean[i];
            mean[m + a] = self.mean[m + i];
            for (b, &j) in perm.iter().enumerate() {
                cov[(a, b)] = self.cov[(i, j)];
                cov[(a, m + b)] = self.cov[(i, m + j)];
                cov[(m + a, b)] = self.cov[(m + i, j)];
                cov[(m + a, m + b)] = self.cov[(m + i, m + j)];
            }
        }
        self.modes = order.to_vec();
        self.cov = cov;
        self.mean = mean;
        Ok(())
    }

    /// Covariance restricted to a subset of modes, in the given order.
    pub fn sub_covariance(&self, modes: &[ModeId]) -> Result<DMatrix<f64>> {
        let m = self.modes.len();
        let k = modes.len();
        let mut idx = Vec::with_capacity(k);
        for &mode in modes {
            idx.push(self.index_of(mode).ok_or_else(|| Error::unknown_mode(mode))?);
        }
        let mut out = DMatrix::zeros(2 * k, 2 * k);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out[(a, b)] = self.cov[(i, j)];
                out[(a, k + b)] = self.cov[(i, m + j)];
                out[(k + a, b)] = self.cov[(m + i, j)];
                out[(k + a, k + b)] = self.cov[(m + i, m + j)];
            }
        }
        Ok(out)
    }
}
