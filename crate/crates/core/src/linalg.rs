//! Small dense helpers shared by the simulation modules.

use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Canonical symplectic form for `n` modes in `(q₁, p₁, …)` ordering.
pub fn omega(n_modes: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        m[(2 * k, 2 * k + 1)] = 1.0;
        m[(2 * k + 1, 2 * k)] = -1.0;
    }
    m
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub fn max_abs_c(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.norm()))
}

pub fn max_abs_vec(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
}

pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Block-diagonal direct sum.
pub fn direct_sum(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut m = DMatrix::zeros(ra + rb, ca + cb);
    m.view_mut((0, 0), (ra, ca)).copy_from(a);
    m.view_mut((ra, ca), (rb, cb)).copy_from(b);
    m
}

pub fn complex_identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Diagonal matrix of phases `e^{iθ_k}`.
pub fn phase_diag(thetas: &[f64]) -> CMatrix {
    let n = thetas.len();
    let mut m = CMatrix::zeros(n, n);
    for (k, &t) in thetas.iter().enumerate() {
        m[(k, k)] = C64::from_polar(1.0, t);
    }
    m
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut t = theta.rem_euclid(TAU);
    if t > PI {
        t -= TAU;
    }
    t
}

/// Phase-rotation symplectic `a → e^{iθ} a` on one mode.
pub fn rotation(theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
}
