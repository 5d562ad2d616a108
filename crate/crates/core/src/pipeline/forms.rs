//! Variance bookkeeping for linear forms that outlive their modes.
//!
//! A nullifier anchored at index `k` mixes modes emitted `N` clocks apart.
//! Rather than retaining those modes in the window, the tracker keeps, for
//! every open form `F = sum c_i q_i`, its variance and its covariance with
//! each live quadrature. Evicted modes then only need their contribution
//! folded in before they are marginalized away; everything stays exact.

use super::Arena;
use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, SymplecticOp};
use crate::mode::{ModeId, Quadrature};
use crate::pipeline::NullifierKind;
use nalgebra::{DMatrix, DVector};

/// Key of an open form: (anchor index, nullifier kind).
pub type FormKey = (u32, NullifierKind);

/// Gaussian state plus covariance bookkeeping for open linear forms.
pub struct FormTracker {
    state: GaussianState,
    /// `2M x F`: covariance of each live quadrature with each open form.
    cross: DMatrix<f64>,
    /// Variance accumulated so far per open form.
    var: Vec<f64>,
    keys: Vec<FormKey>,
}

impl FormTracker {
    pub fn new() -> Self {
        FormTracker {
            state: GaussianState::empty(),
            cross: DMatrix::zeros(0, 0),
            var: Vec::new(),
            keys: Vec::new(),
        }
    }

    pub fn state(&self) -> &GaussianState {
        &self.state
    }

    fn form_index(&self, key: FormKey) -> Result<usize> {
        self.keys
            .iter()
            .position(|&k| k == key)
            .ok_or_else(|| Error::InvalidParameter(format!("form {key:?} is not open")))
    }

    /// Register an empty form.
    pub fn open_form(&mut self, key: FormKey) -> Result<()> {
        if self.keys.contains(&key) {
            return Err(Error::InvalidParameter(format!("form {key:?} already open")));
        }
        self.keys.push(key);
        self.var.push(0.0);
        let rows = self.cross.nrows();
        self.cross = self.cross.clone().insert_column(self.cross.ncols(), 0.0);
        debug_assert_eq!(self.cross.nrows(), rows.max(self.cross.nrows()));
        Ok(())
    }

    /// Fold `sum coeff * quad(mode)` over live modes into an open form.
    pub fn accumulate(&mut self, key: FormKey, terms: &[(ModeId, Quadrature, f64)]) -> Result<()> {
        let f = self.form_index(key)?;
        let dim = 2 * self.state.num_modes();
        let mut a = DVector::zeros(dim);
        for &(mode, quad, coeff) in terms {
            a[self.state.coord(mode, quad)?] += coeff;
        }
        let sc = self.state.cov() * &a;
        let cf = self.cross.column(f).into_owned();
        self.var[f] += 2.0 * a.dot(&cf) + a.dot(&sc);
        let mut col = self.cross.column_mut(f);
        col += sc;
        Ok(())
    }

    /// Read the variance of a completed form and drop it.
    pub fn close_form(&mut self, key: FormKey) -> Result<f64> {
        let f = self.form_index(key)?;
        let variance = self.var[f];
        self.keys.remove(f);
        self.var.remove(f);
        self.cross = self.cross.clone().remove_column(f);
        Ok(variance)
    }

    /// Marginalize modes out of the live window. Their correlations with open
    /// forms were already folded in by `accumulate`.
    pub fn evict(&mut self, modes: &[ModeId]) -> Result<()> {
        let m_old = self.state.num_modes();
        let keep: Vec<usize> = (0..m_old)
            .filter(|&i| !modes.contains(&self.state.modes()[i]))
            .collect();
        self.state.remove_modes(modes)?;
        let m_new = keep.len();
        let mut cross = DMatrix::zeros(2 * m_new, self.cross.ncols());
        for (a, &i) in keep.iter().enumerate() {
            cross.row_mut(a).copy_from(&self.cross.row(i));
            cross.row_mut(m_new + a).copy_from(&self.cross.row(m_old + i));
        }
        self.cross = cross;
        Ok(())
    }

    fn mode_coords(&self, ids: &[ModeId]) -> Result<Vec<usize>> {
        let m = self.state.num_modes();
        let mut idx = Vec::with_capacity(ids.len());
        for &id in ids {
            idx.push(
                self.state
                    .index_of(id)
                    .ok_or_else(|| Error::unknown_mode(id))?,
            );
        }
        Ok(idx
            .iter()
            .map(|&i| i)
            .chain(idx.iter().map(|&i| m + i))
            .collect())
    }

    fn apply_to_cross(&mut self, op: &SymplecticOp, coords: &[usize]) {
        if self.cross.ncols() == 0 {
            return;
        }
        let d = coords.len();
        let mut rows = DMatrix::zeros(d, self.cross.ncols());
        for (a, &i) in coords.iter().enumerate() {
            rows.row_mut(a).copy_from(&self.cross.row(i));
        }
        let rows = op.matrix() * rows;
        for (a, &i) in coords.iter().enumerate() {
            self.cross.row_mut(i).copy_from(&rows.row(a));
        }
    }
}

impl Default for FormTracker {
    fn default() -> Self {
        Self::new()
    }
}

impl Arena for FormTracker {
    fn add_vacuum_mode(&mut self, id: ModeId) -> Result<()> {
        let m_old = self.state.num_modes();
        self.state.add_vacuum(&[id])?;
        let m_new = m_old + 1;
        let mut cross = DMatrix::zeros(2 * m_new, self.cross.ncols());
        for i in 0..m_old {
            cross.row_mut(i).copy_from(&self.cross.row(i));
            cross.row_mut(m_new + i).copy_from(&self.cross.row(m_old + i));
        }
        self.cross = cross;
        Ok(())
    }

    fn has_mode(&self, id: ModeId) -> bool {
        self.state.contains(id)
    }

    fn two_mode(&mut self, op: &SymplecticOp, a: ModeId, b: ModeId) -> Result<()> {
        let coords = self.mode_coords(&[a, b])?;
        self.state.apply_symplectic(op, &[a, b])?;
        self.apply_to_cross(op, &coords);
        Ok(())
    }

    fn one_mode(&mut self, op: &SymplecticOp, a: ModeId) -> Result<()> {
        let coords = self.mode_coords(&[a])?;
        self.state.apply_symplectic(op, &[a])?;
        self.apply_to_cross(op, &coords);
        Ok(())
    }

    fn loss(&mut self, id: ModeId, eta: f64) -> Result<()> {
        let coords = self.mode_coords(&[id])?;
        self.state.apply_loss(id, eta)?;
        let sq = eta.sqrt();
        for &i in &coords {
            for f in 0..self.cross.ncols() {
                self.cross[(i, f)] *= sq;
            }
        }
        Ok(())
    }

    fn live_modes(&self) -> usize {
        self.state.num_modes()
    }
}
