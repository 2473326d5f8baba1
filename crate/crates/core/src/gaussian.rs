//! Gaussian states over `N` modes and the operations every protocol is built
//! from: symplectic evolution, tensor products, partial traces, beam-splitter
//! loss, homodyne conditioning and Uhlmann fidelity.

use std::collections::BTreeSet;
use std::f64::consts::LN_10;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_in_range, Error, Result};
use crate::linalg::{asymmetry, direct_sum, max_abs, omega, symmetrize};
use crate::symplectic::SymplecticOp;

/// Vacuum quadrature variance under `q = (a + a†)/√2`.
pub const VACUUM_VARIANCE: f64 = 0.5;

/// Symmetry tolerance on covariance matrices, relative to `max(1, |V|)`.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Slack allowed below `1/2` for symplectic eigenvalues.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Position of a mode inside a [`GaussianState`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeIndex(pub usize);

impl From<usize> for ModeIndex {
    fn from(index: usize) -> Self {
        ModeIndex(index)
    }
}

/// Converts squeezing in decibels to the squeezing parameter `r`.
pub fn db_to_r(db: f64) -> Result<f64> {
    ensure_finite("dB", db)?;
    Ok(db * LN_10 / 20.0)
}

/// Inverse of [`db_to_r`].
pub fn r_to_db(r: f64) -> f64 {
    20.0 * r / LN_10
}

/// Mean vector and covariance matrix of a Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Builds a state from raw moments, checking symmetry and the uncertainty
    /// relation.
    pub fn from_moments(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = cov.nrows();
        if dim == 0 {
            return Err(Error::NoModes);
        }
        if cov.ncols() != dim || dim % 2 != 0 {
            return Err(Error::DimensionMismatch {
                expected: dim + dim % 2,
                found: cov.ncols(),
            });
        }
        if mean.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: mean.len(),
            });
        }
        if cov.iter().chain(mean.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                name: "moment",
                value: f64::NAN,
            });
        }
        let asym = asymmetry(&cov);
        if asym > SYMMETRY_TOL * max_abs(&cov).max(1.0) {
            return Err(Error::NotSymmetric(asym));
        }
        let mut cov = cov;
        symmetrize(&mut cov);
        let state = Self { mean, cov };
        let nu_min = state.min_symplectic_eigenvalue();
        if nu_min.is_nan() || nu_min < VACUUM_VARIANCE - PHYSICALITY_TOL {
            return Err(Error::Unphysical(nu_min));
        }
        Ok(state)
    }

    #[cfg(test)]
    pub(crate) fn from_moments_unchecked(mean: DVector<f64>, mut cov: DMatrix<f64>) -> Self {
        symmetrize(&mut cov);
        Self { mean, cov }
    }

    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::NoModes);
        }
        Ok(Self {
            mean: DVector::zeros(2 * n_modes),
            cov: DMatrix::identity(2 * n_modes, 2 * n_modes) * VACUUM_VARIANCE,
        })
    }

    /// Single-mode squeezed vacuum, `cov = diag(e^{2r}, e^{-2r})/2`.
    pub fn squeezed_vacuum(r: f64) -> Result<Self> {
        ensure_finite("r", r)?;
        Ok(Self {
            mean: DVector::zeros(2),
            cov: DMatrix::from_diagonal(&DVector::from_vec(vec![
                0.5 * (2.0 * r).exp(),
                0.5 * (-2.0 * r).exp(),
            ])),
        })
    }

    /// Coherent state with quadrature means `(q, p)`.
    pub fn coherent(q: f64, p: f64) -> Result<Self> {
        ensure_finite("q", q)?;
        ensure_finite("p", p)?;
        Ok(Self {
            mean: DVector::from_vec(vec![q, p]),
            cov: DMatrix::identity(2, 2) * VACUUM_VARIANCE,
        })
    }

    /// Thermal state with mean photon number `nbar`.
    pub fn thermal(nbar: f64) -> Result<Self> {
        ensure_in_range("nbar", nbar, 0.0, f64::MAX)?;
        Ok(Self {
            mean: DVector::zeros(2),
            cov: DMatrix::identity(2, 2) * (nbar + 0.5),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Mean and covariance of one mode.
    pub fn mode_moments(&self, mode: ModeIndex) -> Result<(DVector<f64>, DMatrix<f64>)> {
        self.check_mode(mode)?;
        let k = 2 * mode.0;
        Ok((
            self.mean.rows(k, 2).into_owned(),
            self.cov.view((k, k), (2, 2)).into_owned(),
        ))
    }

    fn check_mode(&self, mode: ModeIndex) -> Result<()> {
        if mode.0 >= self.n_modes() {
            return Err(Error::ModeOutOfRange {
                index: mode.0,
                n_modes: self.n_modes(),
            });
        }
        Ok(())
    }

    fn check_distinct(&self, modes: &[ModeIndex]) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &m in modes {
            self.check_mode(m)?;
            if !seen.insert(m.0) {
                return Err(Error::RepeatedMode(m.0));
            }
        }
        Ok(())
    }

    /// Symplectic eigenvalues in ascending order, one per mode.
    ///
    /// For `V = L Lᵀ`, `LᵀΩL` is antisymmetric with singular values equal to
    /// the symplectic eigenvalues of `V` (each appearing twice).
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        symplectic_eigenvalues(&self.cov)
    }

    pub fn min_symplectic_eigenvalue(&self) -> f64 {
        self.symplectic_eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_physical(&self) -> bool {
        self.min_symplectic_eigenvalue() >= VACUUM_VARIANCE - PHYSICALITY_TOL
    }

    /// `Tr ρ² = 1 / (2^N √det V)`.
    pub fn purity(&self) -> f64 {
        let n = self.n_modes() as i32;
        let det = self.cov.determinant();
        1.0 / (2f64.powi(n) * det.sqrt())
    }

    /// Applies `op` to `targets`; other modes are untouched.
    pub fn apply(&self, op: &SymplecticOp, targets: &[ModeIndex]) -> Result<Self> {
        if op.n_modes() != targets.len() {
            return Err(Error::DimensionMismatch {
                expected: 2 * targets.len(),
                found: op.matrix().nrows(),
            });
        }
        self.check_distinct(targets)?;
        let idx: Vec<usize> = targets.iter().flat_map(|m| [2 * m.0, 2 * m.0 + 1]).collect();
        let s = op.matrix();
        let dim = self.cov.nrows();
        let k = idx.len();

        let mut cov = self.cov.clone();
        let mut rows = DMatrix::zeros(k, dim);
        for (a, &i) in idx.iter().enumerate() {
            rows.row_mut(a).copy_from(&cov.row(i));
        }
        let rows = s * rows;
        for (a, &i) in idx.iter().enumerate() {
            cov.row_mut(i).copy_from(&rows.row(a));
        }
        let mut cols = DMatrix::zeros(dim, k);
        for (a, &i) in idx.iter().enumerate() {
            cols.column_mut(a).copy_from(&cov.column(i));
        }
        let cols = cols * s.transpose();
        for (a, &i) in idx.iter().enumerate() {
            cov.column_mut(i).copy_from(&cols.column(a));
        }
        symmetrize(&mut cov);

        let mut mean = self.mean.clone();
        let sub = DVector::from_iterator(k, idx.iter().map(|&i| self.mean[i]));
        let sub = s * sub + op.displacement_vector();
        for (a, &i) in idx.iter().enumerate() {
            mean[i] = sub[a];
        }
        Ok(Self { mean, cov })
    }

    /// Phase rotation `a → e^{iθ} a` of one mode.
    pub fn rotate(&self, mode: ModeIndex, theta: f64) -> Result<Self> {
        self.apply(&SymplecticOp::phase(theta), &[mode])
    }

    pub fn displace(&self, mode: ModeIndex, dq: f64, dp: f64) -> Result<Self> {
        self.apply(&SymplecticOp::displacement(dq, dp), &[mode])
    }

    /// `self ⊗ other`; the modes of `other` follow those of `self`.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let mut mean = DVector::zeros(self.mean.len() + other.mean.len());
        mean.rows_mut(0, self.mean.len()).copy_from(&self.mean);
        mean.rows_mut(self.mean.len(), other.mean.len())
            .copy_from(&other.mean);
        GaussianState {
            mean,
            cov: direct_sum(&self.cov, &other.cov),
        }
    }

    /// Keeps `modes` in the given order.
    pub fn reduced(&self, modes: &[ModeIndex]) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::EmptyResult);
        }
        self.check_distinct(modes)?;
        let idx: Vec<usize> = modes.iter().flat_map(|m| [2 * m.0, 2 * m.0 + 1]).collect();
        let cov = DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.cov[(idx[i], idx[j])]);
        let mean = DVector::from_iterator(idx.len(), idx.iter().map(|&i| self.mean[i]));
        Ok(Self { mean, cov })
    }

    /// Partial trace over `modes`.
    pub fn trace_out(&self, modes: &[ModeIndex]) -> Result<Self> {
        self.check_distinct(modes)?;
        let drop: BTreeSet<usize> = modes.iter().map(|m| m.0).collect();
        let keep: Vec<ModeIndex> = (0..self.n_modes())
            .filter(|k| !drop.contains(k))
            .map(ModeIndex)
            .collect();
        self.reduced(&keep)
    }

    /// Couples `mode` to a fresh vacuum through a beam splitter of
    /// transmissivity `1 − δη` and discards the vacuum arm.
    pub fn lossy_coupling(&self, mode: ModeIndex, delta_eta: f64) -> Result<Self> {
        ensure_in_range("delta_eta", delta_eta, 0.0, 1.0)?;
        self.check_mode(mode)?;
        if delta_eta == 0.0 {
            return Ok(self.clone());
        }
        let t = (1.0 - delta_eta).sqrt();
        let k = 2 * mode.0;
        let mut cov = self.cov.clone();
        for i in [k, k + 1] {
            cov.row_mut(i).scale_mut(t);
            cov.column_mut(i).scale_mut(t);
            cov[(i, i)] += delta_eta * VACUUM_VARIANCE;
        }
        let mut mean = self.mean.clone();
        mean[k] *= t;
        mean[k + 1] *= t;
        Ok(Self { mean, cov })
    }

    /// Homodyne detection of `cos θ q + sin θ p` on `mode` with the given
    /// outcome. Returns the conditional state of the remaining modes.
    ///
    /// A measured quadrature with zero variance is handled by the
    /// pseudo-inverse: the remaining modes are left unchanged.
    pub fn homodyne(&self, mode: ModeIndex, angle: f64, outcome: f64) -> Result<Self> {
        self.check_mode(mode)?;
        ensure_finite("angle", angle)?;
        ensure_finite("outcome", outcome)?;
        if self.n_modes() == 1 {
            return Err(Error::EmptyResult);
        }
        let (s, c) = angle.sin_cos();
        let k = 2 * mode.0;
        let rest: Vec<usize> = (0..self.cov.nrows()).filter(|&i| i != k && i != k + 1).collect();

        let var = c * c * self.cov[(k, k)]
            + 2.0 * c * s * self.cov[(k, k + 1)]
            + s * s * self.cov[(k + 1, k + 1)];
        let cross = DVector::from_iterator(
            rest.len(),
            rest.iter().map(|&i| c * self.cov[(i, k)] + s * self.cov[(i, k + 1)]),
        );
        let mut cov = DMatrix::from_fn(rest.len(), rest.len(), |a, b| self.cov[(rest[a], rest[b])]);
        let mut mean = DVector::from_iterator(rest.len(), rest.iter().map(|&i| self.mean[i]));

        let scale = max_abs(&self.cov).max(1.0);
        if var > 1e-14 * scale {
            let measured_mean = c * self.mean[k] + s * self.mean[k + 1];
            cov -= &cross * cross.transpose() / var;
            mean += &cross * ((outcome - measured_mean) / var);
        }
        symmetrize(&mut cov);
        Ok(Self { mean, cov })
    }
}

pub(crate) fn symplectic_eigenvalues(cov: &DMatrix<f64>) -> Vec<f64> {
    let n = cov.nrows() / 2;
    let om = omega(n);
    let mut nus: Vec<f64> = match cov.clone().cholesky() {
        Some(ch) => {
            let l = ch.l();
            let k = l.transpose() * &om * &l;
            let mut sv: Vec<f64> = k.singular_values().iter().copied().collect();
            sv.sort_by(|a, b| a.partial_cmp(b).unwrap());
            sv.chunks(2).map(|c| 0.5 * (c[0] + c[1])).collect()
        }
        // Not positive definite: report the magnitude of iΩV eigenvalues; a
        // zero or negative direction shows up as a value below 1/2.
        None => {
            let m = &om * cov;
            let mut ev: Vec<f64> = m
                .complex_eigenvalues()
                .iter()
                .map(|z| z.im.abs().min(if z.re.abs() > 1e-12 { 0.0 } else { f64::INFINITY }))
                .collect();
            ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
            ev.chunks(2).map(|c| c[0].min(c[1])).collect()
        }
    };
    nus.sort_by(|a, b| a.partial_cmp(b).unwrap());
    nus
}

/// Squared Uhlmann fidelity `(Tr √(√ρ σ √ρ))²` between two Gaussian states.
///
/// When either state is pure this is the overlap `Tr ρσ`; otherwise the
/// general formula is evaluated through the eigenvalues `±iν` of
/// `V_aux Ω`, with `V_aux = Ωᵀ W⁻¹ (Ω/4 + V₂ Ω V₁)` and `W = V₁ + V₂`:
/// `F = √(Π (2ν + √(4ν² − 1))) / √det W · exp(−½ δᵀ W⁻¹ δ)`.
pub fn fidelity(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    if a.n_modes() != b.n_modes() {
        return Err(Error::DimensionMismatch {
            expected: a.n_modes(),
            found: b.n_modes(),
        });
    }
    if a == b {
        return Ok(1.0);
    }
    let delta = &a.mean - &b.mean;
    let pure = if is_pure(a) {
        Some((a, b))
    } else if is_pure(b) {
        Some((b, a))
    } else {
        None
    };
    let f = match pure {
        Some((p, o)) => pure_overlap(p, o, &delta)?,
        None => {
            let w = &a.cov + &b.cov;
            let w_inv = w.clone().try_inverse().ok_or(Error::Unphysical(0.0))?;
            let displacement_factor = (-0.5 * (delta.transpose() * &w_inv * &delta)[(0, 0)]).exp();
            let om = omega(a.n_modes());
            let v_aux = om.transpose() * &w_inv * (&om / 4.0 + &b.cov * &om * &a.cov);
            let eig = (v_aux * &om).complex_eigenvalues();
            let mut prod = nalgebra::Complex::new(1.0, 0.0);
            for mu in eig.iter() {
                let nu = (-(mu * mu)).sqrt();
                prod *= nu * 2.0 + (nu * nu * 4.0 - 1.0).sqrt();
            }
            prod.re.max(0.0).sqrt() / w.determinant().sqrt() * displacement_factor
        }
    };
    Ok(f.clamp(0.0, 1.0))
}

/// `Tr ρσ = exp(−½ δᵀ W⁻¹ δ) / √det W` with `W = V_p + V_o`, for pure `p`.
///
/// Evaluated in the frame whitened by the Cholesky factor `L` of `V_p`,
/// where `W = L (I + M) Lᵀ` and `det V_p = 4⁻ⁿ`: this avoids the
/// determinant of a matrix with entries of order `e^{2r}`.
fn pure_overlap(p: &GaussianState, o: &GaussianState, delta: &DVector<f64>) -> Result<f64> {
    let l = p.cov.clone().cholesky().ok_or(Error::Unphysical(0.0))?.l();
    let x = l.solve_lower_triangular(&o.cov).ok_or(Error::Unphysical(0.0))?;
    let mut m = l
        .solve_lower_triangular(&x.transpose())
        .ok_or(Error::Unphysical(0.0))?;
    m += DMatrix::<f64>::identity(m.nrows(), m.ncols());
    symmetrize(&mut m);
    let k = m.cholesky().ok_or(Error::Unphysical(0.0))?;
    let y = l.solve_lower_triangular(delta).ok_or(Error::Unphysical(0.0))?;
    let quad = y.dot(&k.solve(&y));
    let log_det_k: f64 = k.l().diagonal().iter().map(|d| 2.0 * d.ln()).sum();
    let n = p.n_modes() as f64;
    Ok((n * std::f64::consts::LN_2 - 0.5 * log_det_k - 0.5 * quad).exp())
}

/// Pure to within the floating-point noise expected for this covariance:
/// perturbing `V` by `ε|V|` moves symplectic eigenvalues by up to `ε|V|²`.
fn is_pure(state: &GaussianState) -> bool {
    let scale = max_abs(&state.cov).max(1.0);
    let tol = 1e-12 * scale * scale;
    state
        .symplectic_eigenvalues()
        .iter()
        .all(|nu| (nu - VACUUM_VARIANCE).abs() <= tol.max(1e-12))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_vec;

    fn tms(r: f64) -> GaussianState {
        let c = (2.0 * r).cosh() / 2.0;
        let s = (2.0 * r).sinh() / 2.0;
        #[rustfmt::skip]
        let cov = DMatrix::from_row_slice(4, 4, &[
            c, 0.0, s, 0.0,
            0.0, c, 0.0, -s,
            s, 0.0, c, 0.0,
            0.0, -s, 0.0, c,
        ]);
        GaussianState::from_moments(DVector::zeros(4), cov).unwrap()
    }

    #[test]
    fn vacuum_moments() {
        let v = GaussianState::vacuum(1).unwrap();
        assert_eq!(v.cov(), &(DMatrix::identity(2, 2) * 0.5));
        let v3 = GaussianState::vacuum(3).unwrap();
        assert_eq!(v3.cov(), &(DMatrix::identity(6, 6) * 0.5));
        for nu in v3.symplectic_eigenvalues() {
            assert!((nu - 0.5).abs() < 1e-14);
        }
        assert!(matches!(GaussianState::vacuum(0), Err(Error::NoModes)));
        let v2 = GaussianState::vacuum(2).unwrap();
        assert_eq!(fidelity(&v2, &v2).unwrap(), 1.0);
    }

    #[test]
    fn squeezed_vacuum_examples() {
        assert_eq!(
            GaussianState::squeezed_vacuum(0.0).unwrap(),
            GaussianState::vacuum(1).unwrap()
        );
        let s = GaussianState::squeezed_vacuum(2f64.ln()).unwrap();
        assert!((s.cov()[(0, 0)] - 2.0).abs() < 1e-14);
        assert!((s.cov()[(1, 1)] - 0.125).abs() < 1e-15);
        assert!(GaussianState::squeezed_vacuum(f64::NAN).is_err());
    }

    #[test]
    fn db_conversion() {
        assert_eq!(db_to_r(0.0).unwrap(), 0.0);
        let r_cz = 0.5f64.asinh();
        assert!((db_to_r(r_to_db(r_cz)).unwrap() - r_cz).abs() < 1e-15);
        assert!((r_to_db(r_cz) - 4.18).abs() < 0.01);
        // 17.4 * ln(10) / 20
        assert!((db_to_r(17.4).unwrap() - 2.003_249_030_9).abs() < 1e-9);
        assert!(db_to_r(f64::INFINITY).is_err());
    }

    #[test]
    fn apply_identity_and_errors() {
        let s = tms(0.4);
        let same = s.apply(&SymplecticOp::identity(2), &[ModeIndex(0), ModeIndex(1)]).unwrap();
        assert_eq!(same, s);
        assert!(matches!(
            s.apply(&SymplecticOp::identity(2), &[ModeIndex(0)]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            s.apply(&SymplecticOp::identity(2), &[ModeIndex(1), ModeIndex(1)]),
            Err(Error::RepeatedMode(1))
        ));
        assert!(matches!(
            s.apply(&SymplecticOp::phase(0.1), &[ModeIndex(2)]),
            Err(Error::ModeOutOfRange { .. })
        ));
    }

    #[test]
    fn tensor_and_trace_round_trip() {
        let v = GaussianState::vacuum(1).unwrap();
        assert_eq!(v.tensor(&v), GaussianState::vacuum(2).unwrap());
        let s = tms(0.3);
        let ext = s.tensor(&GaussianState::squeezed_vacuum(0.2).unwrap());
        assert_eq!(ext.trace_out(&[ModeIndex(2)]).unwrap(), s);
        assert!(matches!(
            s.trace_out(&[ModeIndex(0), ModeIndex(1)]),
            Err(Error::EmptyResult)
        ));
        assert!(s.trace_out(&[ModeIndex(4)]).is_err());
    }

    #[test]
    fn trace_of_tms_is_thermal() {
        let r = 0.9;
        let arm = tms(r).trace_out(&[ModeIndex(1)]).unwrap();
        let expected = DMatrix::identity(2, 2) * ((2.0 * r).cosh() / 2.0);
        assert!(max_abs(&(arm.cov() - expected)) < 1e-14);
    }

    #[test]
    fn lossy_coupling_limits() {
        let s = tms(1.0);
        assert_eq!(s.lossy_coupling(ModeIndex(1), 0.0).unwrap(), s);
        let gone = s.lossy_coupling(ModeIndex(1), 1.0).unwrap();
        let (m, c) = gone.mode_moments(ModeIndex(1)).unwrap();
        assert!(max_abs_vec(&m) == 0.0);
        assert!(max_abs(&(c - DMatrix::identity(2, 2) * 0.5)) < 1e-15);
        assert!(gone.cov()[(0, 2)].abs() < 1e-15);
        assert!(s.lossy_coupling(ModeIndex(0), 1.5).is_err());
        assert!(s.lossy_coupling(ModeIndex(0), -0.1).is_err());
    }

    #[test]
    fn homodyne_product_state() {
        let v = GaussianState::vacuum(2).unwrap();
        for angle in [0.0, 0.4, 1.3] {
            let out = v.homodyne(ModeIndex(0), angle, 0.0).unwrap();
            assert_eq!(out, GaussianState::vacuum(1).unwrap());
        }
        assert!(matches!(
            GaussianState::vacuum(1).unwrap().homodyne(ModeIndex(0), 0.0, 1.0),
            Err(Error::EmptyResult)
        ));
        assert!(v.homodyne(ModeIndex(5), 0.0, 0.0).is_err());
    }

    #[test]
    fn homodyne_cov_ignores_outcome() {
        let s = tms(1.0);
        let a = s.homodyne(ModeIndex(1), std::f64::consts::FRAC_PI_2, 0.0).unwrap();
        let b = s.homodyne(ModeIndex(1), std::f64::consts::FRAC_PI_2, 3.7).unwrap();
        assert_eq!(a.cov(), b.cov());
        assert!(a.mean() != b.mean());
    }

    #[test]
    fn homodyne_on_infinitely_squeezed_quadrature_is_noop() {
        // Zero q-variance on mode 1: the pseudo-inverse leaves mode 0 alone.
        let cov = DMatrix::from_diagonal(&DVector::from_vec(vec![0.5, 0.5, 0.0, 1e30]));
        let s = GaussianState::from_moments_unchecked(DVector::zeros(4), cov);
        let out = s.homodyne(ModeIndex(1), 0.0, 2.0).unwrap();
        assert_eq!(out, GaussianState::vacuum(1).unwrap());
    }

    #[test]
    fn from_moments_validation() {
        let bad = DMatrix::from_diagonal(&DVector::from_vec(vec![0.1, 0.1]));
        assert!(matches!(
            GaussianState::from_moments(DVector::zeros(2), bad),
            Err(Error::Unphysical(_))
        ));
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(matches!(
            GaussianState::from_moments(DVector::zeros(2), asym),
            Err(Error::NotSymmetric(_))
        ));
    }

    #[test]
    fn fidelity_mode_mismatch() {
        let a = GaussianState::vacuum(1).unwrap();
        let b = GaussianState::vacuum(2).unwrap();
        assert!(fidelity(&a, &b).is_err());
    }

    #[test]
    fn coherent_overlap() {
        // |<α|β>|² = exp(-|α-β|²), with α = (q + ip)/√2.
        let a = GaussianState::coherent(1.0, 0.5).unwrap();
        let b = GaussianState::coherent(-0.2, 0.1).unwrap();
        let d2 = ((1.2f64).powi(2) + 0.4f64.powi(2)) / 2.0;
        assert!((fidelity(&a, &b).unwrap() - (-d2).exp()).abs() < 1e-14);
    }

    #[test]
    fn strongly_squeezed_overlap() {
        // Collinear squeezed vacua: Tr ρσ = sech(r₁ − r₂) however large r is.
        let a = GaussianState::squeezed_vacuum(6.9).unwrap();
        let b = GaussianState::squeezed_vacuum(7.0).unwrap();
        assert!((fidelity(&a, &b).unwrap() - 1.0 / 0.1f64.cosh()).abs() < 1e-12);
        let t = tms(4.0);
        assert_eq!(fidelity(&t, &t).unwrap(), 1.0);
    }

    #[test]
    fn purity_of_thermal() {
        let t = GaussianState::thermal(1.5).unwrap();
        assert!((t.purity() - 1.0 / 4.0).abs() < 1e-14);
        assert!((tms(0.7).purity() - 1.0).abs() < 1e-12);
    }
}
