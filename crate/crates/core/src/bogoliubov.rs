//! Gaussian unitaries in annihilation-operator form, `a' = A a + B a†`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{max_abs_c, phase_diag, CMatrix, C64};
use crate::symplectic::SymplecticOp;

/// Residual tolerance for the Bogoliubov constraints, relative to
/// `max(1, |A|²)`.
pub const BOGOLIUBOV_TOL: f64 = 1e-10;

/// A complex matrix pair `(A, B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovPair {
    pub a: CMatrix,
    pub b: CMatrix,
}

/// Residuals of `AA† − BB† = I` and `ABᵀ = BAᵀ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairValidation {
    pub valid: bool,
    pub unitarity_residual: f64,
    pub symmetry_residual: f64,
}

impl BogoliubovPair {
    /// Wraps `(A, B)` after checking both constraints.
    pub fn new(a: CMatrix, b: CMatrix) -> Result<Self> {
        let pair = Self { a, b };
        let v = pair.validate()?;
        if !v.valid {
            return Err(Error::InvalidBogoliubov {
                unitarity: v.unitarity_residual,
                symmetry: v.symmetry_residual,
            });
        }
        Ok(pair)
    }

    pub(crate) fn new_unchecked(a: CMatrix, b: CMatrix) -> Self {
        Self { a, b }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            a: CMatrix::identity(n, n),
            b: CMatrix::zeros(n, n),
        }
    }

    /// Independent phase shifts `a_k → e^{iθ_k} a_k`.
    pub fn phases(thetas: &[f64]) -> Self {
        let n = thetas.len();
        Self {
            a: phase_diag(thetas),
            b: CMatrix::zeros(n, n),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.a.nrows()
    }

    /// Checks shapes and reports both residuals.
    pub fn validate(&self) -> Result<PairValidation> {
        let n = self.a.nrows();
        if self.a.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.a.ncols(),
            });
        }
        if self.b.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.b.nrows(),
            });
        }
        if n == 0 {
            return Err(Error::NoModes);
        }
        let unitarity = max_abs_c(
            &(&self.a * self.a.adjoint() - &self.b * self.b.adjoint() - CMatrix::identity(n, n)),
        );
        let symmetry = max_abs_c(&(&self.a * self.b.transpose() - &self.b * self.a.transpose()));
        let scale = max_abs_c(&self.a).powi(2).max(1.0);
        let finite = unitarity.is_finite() && symmetry.is_finite();
        Ok(PairValidation {
            valid: finite
                && unitarity <= BOGOLIUBOV_TOL * scale
                && symmetry <= BOGOLIUBOV_TOL * scale,
            unitarity_residual: unitarity,
            symmetry_residual: symmetry,
        })
    }

    /// `self` followed by `next` (Heisenberg composition).
    pub fn then(&self, next: &BogoliubovPair) -> Result<BogoliubovPair> {
        if next.n_modes() != self.n_modes() {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes(),
                found: next.n_modes(),
            });
        }
        Ok(Self {
            a: &next.a * &self.a + &next.b * self.b.conjugate(),
            b: &next.a * &self.b + &next.b * self.a.conjugate(),
        })
    }

    /// Embeds a pair acting on `targets` into `n` modes, identity elsewhere.
    pub fn embed(&self, n: usize, targets: &[usize]) -> Result<BogoliubovPair> {
        if targets.len() != self.n_modes() {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes(),
                found: targets.len(),
            });
        }
        for (k, &t) in targets.iter().enumerate() {
            if t >= n {
                return Err(Error::ModeOutOfRange { index: t, n_modes: n });
            }
            if targets[..k].contains(&t) {
                return Err(Error::RepeatedMode(t));
            }
        }
        let mut out = Self::identity(n);
        for (i, &ti) in targets.iter().enumerate() {
            out.a[(ti, ti)] = C64::new(0.0, 0.0);
            for (j, &tj) in targets.iter().enumerate() {
                out.a[(ti, tj)] = self.a[(i, j)];
                out.b[(ti, tj)] = self.b[(i, j)];
            }
        }
        Ok(out)
    }

    /// Quadrature image in `(q₁, p₁, …)` ordering.
    ///
    /// With `a = (q + ip)/√2`: `q' = Re(A+B) q − Im(A−B) p` and
    /// `p' = Im(A+B) q + Re(A−B) p`.
    pub fn to_symplectic(&self) -> Result<SymplecticOp> {
        let v = self.validate()?;
        if !v.valid {
            return Err(Error::InvalidBogoliubov {
                unitarity: v.unitarity_residual,
                symmetry: v.symmetry_residual,
            });
        }
        SymplecticOp::new(self.symplectic_matrix())
    }

    pub(crate) fn symplectic_matrix(&self) -> DMatrix<f64> {
        let n = self.n_modes();
        let plus = &self.a + &self.b;
        let minus = &self.a - &self.b;
        let mut s = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                s[(2 * i, 2 * j)] = plus[(i, j)].re;
                s[(2 * i, 2 * j + 1)] = -minus[(i, j)].im;
                s[(2 * i + 1, 2 * j)] = plus[(i, j)].im;
                s[(2 * i + 1, 2 * j + 1)] = minus[(i, j)].re;
            }
        }
        s
    }

    /// Largest entrywise distance to `other` over both matrices.
    pub fn distance(&self, other: &BogoliubovPair) -> f64 {
        max_abs_c(&(&self.a - &other.a)).max(max_abs_c(&(&self.b - &other.b)))
    }
}
