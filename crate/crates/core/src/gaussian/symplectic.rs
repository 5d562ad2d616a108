//! Symplectic building blocks: rotations, squeezers, 50:50 beam splitters.
//!
//! Matrices act on `(x_1..x_m, p_1..p_m)` coordinates. The sign conventions
//! are fixed once here and regression-tested against the derived cluster
//! nullifiers rather than trusted from drawings:
//!
//! - `rotation(theta)`: `x -> x cos(theta) + p sin(theta)`,
//!   `p -> -x sin(theta) + p cos(theta)`.
//! - `squeezer(r)`: `x -> e^{-r} x`, `p -> e^{r} p` (positive `r` squeezes x).
//! - `beamsplitter_50`: `(1/sqrt2) [[1, -1], [1, 1]]` on each quadrature
//!   block, with the orientation flag selecting which input carries the
//!   minus sign.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Which beam-splitter input picks up the minus sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BsOrientation {
    /// `out1 = (-in1 + in2)/sqrt2`, `out2 = (in1 + in2)/sqrt2`.
    MinusOnFirst,
    /// `out1 = (in1 - in2)/sqrt2`, `out2 = (in1 + in2)/sqrt2`.
    MinusOnSecond,
}

/// A real symplectic matrix acting on a fixed number of modes.
#[derive(Clone, Debug)]
pub struct SymplecticOp {
    matrix: DMatrix<f64>,
}

impl SymplecticOp {
    /// Wrap a `2m x 2m` matrix, verifying `S^T Omega S = Omega` to 1e-10.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() || n % 2 != 0 || n == 0 {
            return Err(Error::InvalidParameter(format!(
                "symplectic matrix must be square with even dimension, got {n}x{}",
                matrix.ncols()
            )));
        }
        let op = SymplecticOp { matrix };
        let dev = op.symplectic_deviation();
        if dev > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "matrix is not symplectic: |S^T Omega S - Omega| = {dev:.3e}"
            )));
        }
        Ok(op)
    }

    /// Construct without the symplectic check (internal trusted paths).
    pub(crate) fn new_unchecked(matrix: DMatrix<f64>) -> Self {
        SymplecticOp { matrix }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Number of modes the operation acts on.
    pub fn arity(&self) -> usize {
        self.matrix.nrows() / 2
    }

    /// Frobenius norm of `S^T Omega S - Omega`.
    pub fn symplectic_deviation(&self) -> f64 {
        let m = self.arity();
        let om = omega(m);
        (self.matrix.transpose() * &om * &self.matrix - om).norm()
    }

    /// Composition `self * other` (apply `other` first).
    pub fn compose(&self, other: &SymplecticOp) -> SymplecticOp {
        SymplecticOp {
            matrix: &self.matrix * &other.matrix,
        }
    }

    /// Inverse via the symplectic identity `S^{-1} = Omega^T S^T Omega`.
    pub fn inverse(&self) -> SymplecticOp {
        let m = self.arity();
        let om = omega(m);
        SymplecticOp {
            matrix: om.transpose() * self.matrix.transpose() * om,
        }
    }
}

/// Canonical symplectic form in `(x.., p..)` ordering: `[[0, I], [-I, 0]]`.
pub fn omega(m: usize) -> DMatrix<f64> {
    let mut om = DMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        om[(i, m + i)] = 1.0;
        om[(m + i, i)] = -1.0;
    }
    om
}

/// Phase-space rotation by `theta` on one mode.
pub fn rotation(theta: f64) -> SymplecticOp {
    let (s, c) = theta.sin_cos();
    SymplecticOp::new_unchecked(DMatrix::from_row_slice(2, 2, &[c, s, -s, c]))
}

/// Single-mode squeezer: `x -> e^{-r} x`, `p -> e^{r} p`.
pub fn squeezer(r: f64) -> SymplecticOp {
    SymplecticOp::new_unchecked(DMatrix::from_row_slice(
        2,
        2,
        &[(-r).exp(), 0.0, 0.0, r.exp()],
    ))
}

/// Identity on `m` modes.
pub fn identity_op(m: usize) -> SymplecticOp {
    SymplecticOp::new_unchecked(DMatrix::identity(2 * m, 2 * m))
}

/// Balanced beam splitter on two modes, acting identically on the x and p
/// blocks.
pub fn beamsplitter_50(orientation: BsOrientation) -> SymplecticOp {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let b = match orientation {
        BsOrientation::MinusOnSecond => [s, -s, s, s],
        BsOrientation::MinusOnFirst => [-s, s, s, s],
    };
    let mut m = DMatrix::zeros(4, 4);
    // identical 2x2 block on (x1, x2) and on (p1, p2)
    for off in [0, 2] {
        m[(off, off)] = b[0];
        m[(off, off + 1)] = b[1];
        m[(off + 1, off)] = b[2];
        m[(off + 1, off + 1)] = b[3];
    }
    SymplecticOp::new_unchecked(m)
}

/// Two-mode QND interaction `C_x(g)`: `x1 -> x1 + g x2`, `p2 -> p2 - g p1`.
pub fn qnd_cx(g: f64) -> SymplecticOp {
    let mut m = DMatrix::identity(4, 4);
    m[(0, 1)] = g;
    m[(3, 2)] = -g;
    SymplecticOp::new_unchecked(m)
}

/// Direct sum of two operations (first op on the first modes).
pub fn direct_sum(a: &SymplecticOp, b: &SymplecticOp) -> SymplecticOp {
    let (ma, mb) = (a.arity(), b.arity());
    let m = ma + mb;
    let mut out = DMatrix::zeros(2 * m, 2 * m);
    let am = a.matrix();
    let bm = b.matrix();
    for i in 0..ma {
        for j in 0..ma {
            out[(i, j)] = am[(i, j)];
            out[(i, m + j)] = am[(i, ma + j)];
            out[(m + i, j)] = am[(ma + i, j)];
            out[(m + i, m + j)] = am[(ma + i, ma + j)];
        }
    }
    for i in 0..mb {
        for j in 0..mb {
            out[(ma + i, ma + j)] = bm[(i, j)];
            out[(ma + i, m + ma + j)] = bm[(i, mb + j)];
            out[(m + ma + i, ma + j)] = bm[(mb + i, j)];
            out[(m + ma + i, m + ma + j)] = bm[(mb + i, mb + j)];
        }
    }
    SymplecticOp::new_unchecked(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_zero_is_identity() {
        let r = rotation(0.0);
        assert!((r.matrix() - DMatrix::<f64>::identity(2, 2)).norm() < 1e-15);
    }

    #[test]
    fn squeezer_zero_is_identity() {
        let s = squeezer(0.0);
        assert!((s.matrix() - DMatrix::<f64>::identity(2, 2)).norm() < 1e-15);
    }

    #[test]
    fn generators_are_symplectic() {
        for op in [
            rotation(0.3),
            squeezer(1.2),
            beamsplitter_50(BsOrientation::MinusOnFirst),
            beamsplitter_50(BsOrientation::MinusOnSecond),
            qnd_cx(0.7),
        ] {
            assert!(op.symplectic_deviation() < 1e-12);
        }
    }

    #[test]
    fn beamsplitter_applied_twice_is_symplectic_rotation_pattern() {
        // S*S is still symplectic; for this orientation it equals a pi/2
        // rotation in the two-mode (x1,x2) plane applied to both blocks.
        let bs = beamsplitter_50(BsOrientation::MinusOnSecond);
        let twice = bs.compose(&bs);
        assert!(twice.symplectic_deviation() < 1e-12);
        // direct matrix product oracle
        let expect = bs.matrix() * bs.matrix();
        assert!((twice.matrix() - expect).norm() < 1e-15);
        // (in1,in2) -> ((in1-in2)/r2, (in1+in2)/r2) twice = (-in2, in1)
        let m = twice.matrix();
        assert!((m[(0, 1)] + 1.0).abs() < 1e-12 && (m[(1, 0)] - 1.0).abs() < 1e-12);
        assert!(m[(0, 0)].abs() < 1e-12 && m[(1, 1)].abs() < 1e-12);
    }

    #[test]
    fn inverse_roundtrip() {
        let op = rotation(0.4).compose(&squeezer(0.9));
        let id = op.compose(&op.inverse());
        assert!((id.matrix() - DMatrix::<f64>::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn new_rejects_non_symplectic() {
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        assert!(SymplecticOp::new(bad).is_err());
    }
}
