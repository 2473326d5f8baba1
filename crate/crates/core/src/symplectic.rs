//! Real symplectic maps on quadratures.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{max_abs, omega, rotation};

/// Residual tolerance for `SᵀΩS = Ω`, relative to `max(1, |S|²)`.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// A Gaussian unitary acting on quadratures: `x → S x + d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticOp {
    matrix: DMatrix<f64>,
    displacement: DVector<f64>,
}

impl SymplecticOp {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let dim = matrix.nrows();
        Self::with_displacement(matrix, DVector::zeros(dim))
    }

    pub fn with_displacement(matrix: DMatrix<f64>, displacement: DVector<f64>) -> Result<Self> {
        let (r, c) = matrix.shape();
        if r != c || r % 2 != 0 || r == 0 {
            return Err(Error::DimensionMismatch {
                expected: r.max(2) + r.max(2) % 2,
                found: c,
            });
        }
        if displacement.len() != r {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: displacement.len(),
            });
        }
        if matrix.iter().chain(displacement.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                name: "symplectic entry",
                value: f64::NAN,
            });
        }
        let residual = symplectic_residual(&matrix);
        let scale = max_abs(&matrix).powi(2).max(1.0);
        if residual > SYMPLECTIC_TOL * scale {
            return Err(Error::NotSymplectic(residual));
        }
        Ok(Self {
            matrix,
            displacement,
        })
    }

    pub fn identity(n_modes: usize) -> Self {
        Self {
            matrix: DMatrix::identity(2 * n_modes, 2 * n_modes),
            displacement: DVector::zeros(2 * n_modes),
        }
    }

    /// Single-mode phase rotation `a → e^{iθ} a`.
    pub fn phase(theta: f64) -> Self {
        Self {
            matrix: rotation(theta),
            displacement: DVector::zeros(2),
        }
    }

    /// Single-mode squeezer; `r > 0` squeezes `p`.
    pub fn squeezer(r: f64) -> Self {
        Self {
            matrix: DMatrix::from_diagonal(&DVector::from_vec(vec![r.exp(), (-r).exp()])),
            displacement: DVector::zeros(2),
        }
    }

    /// Phase-space displacement of one mode.
    pub fn displacement(dq: f64, dp: f64) -> Self {
        Self {
            matrix: DMatrix::identity(2, 2),
            displacement: DVector::from_vec(vec![dq, dp]),
        }
    }

    /// The ideal CZ gate `exp(i q₁ q₂)`: `p₁ → p₁ + q₂`, `p₂ → p₂ + q₁`.
    pub fn cz() -> Self {
        #[rustfmt::skip]
        let m = DMatrix::from_row_slice(4, 4, &[
            1.0, 0.0, 0.0, 0.0,
            0.0, 1.0, 1.0, 0.0,
            0.0, 0.0, 1.0, 0.0,
            1.0, 0.0, 0.0, 1.0,
        ]);
        Self {
            matrix: m,
            displacement: DVector::zeros(4),
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn displacement_vector(&self) -> &DVector<f64> {
        &self.displacement
    }

    pub fn n_modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &SymplecticOp) -> Result<SymplecticOp> {
        if next.matrix.nrows() != self.matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.nrows(),
                found: next.matrix.nrows(),
            });
        }
        Ok(Self {
            matrix: &next.matrix * &self.matrix,
            displacement: &next.matrix * &self.displacement + &next.displacement,
        })
    }

    /// Direct sum acting on disjoint mode sets (`self` on the first modes).
    pub fn direct_sum(&self, other: &SymplecticOp) -> SymplecticOp {
        let m = crate::linalg::direct_sum(&self.matrix, &other.matrix);
        let mut d = DVector::zeros(m.nrows());
        d.rows_mut(0, self.displacement.len())
            .copy_from(&self.displacement);
        d.rows_mut(self.displacement.len(), other.displacement.len())
            .copy_from(&other.displacement);
        Self {
            matrix: m,
            displacement: d,
        }
    }

    pub fn inverse(&self) -> SymplecticOp {
        let om = omega(self.n_modes());
        let inv = -(&om * self.matrix.transpose() * &om);
        let d = -(&inv * &self.displacement);
        Self {
            matrix: inv,
            displacement: d,
        }
    }

    pub fn residual(&self) -> f64 {
        symplectic_residual(&self.matrix)
    }
}

/// `max |SᵀΩS − Ω|`.
pub fn symplectic_residual(s: &DMatrix<f64>) -> f64 {
    let om = omega(s.nrows() / 2);
    max_abs(&(s.transpose() * &om * s - om))
}
