//! Bloch–Messiah reduction of Bogoliubov pairs and the synthesis of the CZ
//! gate as a beam splitter, two-mode squeezer and beam splitter acting on
//! memories.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::{DMatrix, DVector};

use crate::bogoliubov::BogoliubovPair;
use crate::error::{Error, Result};
use crate::linalg::{max_abs_c, CMatrix, C64};
use crate::raman::{chain_bogoliubov, rewrite_chain, ChainOp, MemoryOp, MemoryProgram, RamanBS, RamanTMS};

/// Reconstruction and unitarity tolerance of [`reduce`].
pub const REDUCTION_TOL: f64 = 1e-10;

/// Squeezing values `tanh r` below this are treated as zero.
const SQUEEZE_ZERO: f64 = 1e-12;

/// `A = U diag(a_d) V†`, `B = U diag(b_d) Vᵀ` with `a_d² − b_d² = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochMessiahFactors {
    pub u: CMatrix,
    pub v: CMatrix,
    pub a_d: DVector<f64>,
    pub b_d: DVector<f64>,
}

impl BlochMessiahFactors {
    pub fn a_d_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.a_d)
    }

    pub fn b_d_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.b_d)
    }

    /// Squeezing parameters `r_k = asinh(b_k)` of the central squeezers.
    pub fn squeezing(&self) -> Vec<f64> {
        self.b_d.iter().map(|b| b.asinh()).collect()
    }

    pub fn reconstruct(&self) -> BogoliubovPair {
        let a_d = self.a_d.map(|x| C64::new(x, 0.0));
        let b_d = self.b_d.map(|x| C64::new(x, 0.0));
        let a = &self.u * CMatrix::from_diagonal(&a_d) * self.v.adjoint();
        let b = &self.u * CMatrix::from_diagonal(&b_d) * self.v.transpose();
        BogoliubovPair::new_unchecked(a, b)
    }
}

/// Bloch–Messiah reduction by Takagi factorisation of `T = A⁻¹B`.
///
/// `T` is complex symmetric, so `T = V diag(tanh r) Vᵀ` with `V` unitary.
/// The Takagi vectors are the positive-eigenvalue eigenvectors `(x; y)` of
/// the real symmetric embedding `[[Re T, Im T], [Im T, −Re T]]`, with
/// `v = x + iy`. Unsqueezed directions are completed by Gram–Schmidt against
/// the standard basis. Then `U = A V diag(cosh r)⁻¹` is unitary and
/// `B_D = A_D diag(tanh r)`.
///
/// Output is ordered by descending `a_d`. Each column pair `(u_k, v_k)` is
/// fixed up to the residual gauge: a sign when `b_k > 0`, a phase when
/// `b_k = 0`. The first non-negligible entry of `u_k` is made real positive
/// when unsqueezed and given a positive real part otherwise.
pub fn reduce(pair: &BogoliubovPair) -> Result<BlochMessiahFactors> {
    let check = pair.validate()?;
    if !check.valid {
        return Err(Error::InvalidBogoliubov {
            unitarity: check.unitarity_residual,
            symmetry: check.symmetry_residual,
        });
    }
    let n = pair.n_modes();
    let a_inv = pair
        .a
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Reduction("A is singular".into()))?;
    let mut t = &a_inv * &pair.b;
    t = (&t + t.transpose()) * C64::new(0.5, 0.0);

    let mut emb = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = t[(i, j)];
            emb[(i, j)] = z.re;
            emb[(i, n + j)] = z.im;
            emb[(n + i, j)] = z.im;
            emb[(n + i, n + j)] = -z.re;
        }
    }
    let eig = emb.symmetric_eigen();
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());

    let mut cols: Vec<DVector<C64>> = Vec::with_capacity(n);
    let mut sigmas: Vec<f64> = Vec::with_capacity(n);
    for &k in order.iter().take(n) {
        let sigma = eig.eigenvalues[k];
        if sigma <= SQUEEZE_ZERO {
            break;
        }
        let x = eig.eigenvectors.column(k);
        let v = DVector::from_fn(n, |i, _| C64::new(x[i], x[n + i]));
        cols.push(v);
        sigmas.push(sigma.min(1.0 - f64::EPSILON));
    }
    // Complete the unsqueezed subspace.
    for e in 0..n {
        if cols.len() == n {
            break;
        }
        let mut w = DVector::<C64>::zeros(n);
        w[e] = C64::new(1.0, 0.0);
        for c in &cols {
            let proj = c.dotc(&w);
            w -= c * proj;
        }
        for c in &cols {
            let proj = c.dotc(&w);
            w -= c * proj;
        }
        let norm = w.norm();
        if norm > 1e-6 {
            cols.push(w / C64::new(norm, 0.0));
            sigmas.push(0.0);
        }
    }
    if cols.len() != n {
        return Err(Error::Reduction("Takagi basis is incomplete".into()));
    }

    let mut u_cols = Vec::with_capacity(n);
    let mut v_cols = Vec::with_capacity(n);
    let mut a_d = DVector::zeros(n);
    for k in 0..n {
        let av = &pair.a * &cols[k];
        let ak = av.norm();
        let mut u = av / C64::new(ak, 0.0);
        let mut v = cols[k].clone();
        let pivot = u
            .iter()
            .copied()
            .find(|z| z.norm() > 1e-8)
            .unwrap_or(C64::new(1.0, 0.0));
        let gauge = if sigmas[k] > 0.0 {
            C64::new(if pivot.re < 0.0 { -1.0 } else { 1.0 }, 0.0)
        } else {
            pivot.conj() / pivot.norm()
        };
        u *= gauge;
        v *= gauge;
        u_cols.push(u);
        v_cols.push(v);
        a_d[k] = ak;
    }
    let u = CMatrix::from_columns(&u_cols);
    let v = CMatrix::from_columns(&v_cols);
    let b_full = u.adjoint() * &pair.b * v.conjugate();
    let b_d = DVector::from_fn(n, |k, _| b_full[(k, k)].re.max(0.0));

    let mut factors = BlochMessiahFactors { u, v, a_d, b_d };
    sort_descending(&mut factors);
    verify(pair, &factors)?;
    Ok(factors)
}

fn sort_descending(f: &mut BlochMessiahFactors) {
    let n = f.a_d.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| f.a_d[j].partial_cmp(&f.a_d[i]).unwrap().then(i.cmp(&j)));
    let u = CMatrix::from_columns(&idx.iter().map(|&k| f.u.column(k).into_owned()).collect::<Vec<_>>());
    let v = CMatrix::from_columns(&idx.iter().map(|&k| f.v.column(k).into_owned()).collect::<Vec<_>>());
    f.a_d = DVector::from_iterator(n, idx.iter().map(|&k| f.a_d[k]));
    f.b_d = DVector::from_iterator(n, idx.iter().map(|&k| f.b_d[k]));
    f.u = u;
    f.v = v;
}

fn verify(pair: &BogoliubovPair, f: &BlochMessiahFactors) -> Result<()> {
    let n = f.a_d.len();
    let scale = max_abs_c(&pair.a).max(1.0);
    let id = CMatrix::identity(n, n);
    let checks = [
        ("U unitarity", max_abs_c(&(&f.u * f.u.adjoint() - &id)), 1.0),
        ("V unitarity", max_abs_c(&(&f.v * f.v.adjoint() - &id)), 1.0),
        ("A_D² − B_D²", f.a_d.iter().zip(f.b_d.iter()).map(|(a, b)| (a * a - b * b - 1.0).abs()).fold(0.0, f64::max), scale * scale),
        ("reconstruction", f.reconstruct().distance(pair), scale),
    ];
    for (name, residual, s) in checks {
        if residual.is_nan() || residual > REDUCTION_TOL * s {
            return Err(Error::Reduction(format!("{name} residual {residual:.3e}")));
        }
    }
    Ok(())
}

/// The CZ gate `exp(i q₁ q₂)`: `p₁ → p₁ + q₂`, `p₂ → p₂ + q₁`.
pub fn cz_bogoliubov() -> BogoliubovPair {
    let one = C64::new(1.0, 0.0);
    let half_i = C64::new(0.0, 0.5);
    let zero = C64::new(0.0, 0.0);
    BogoliubovPair::new_unchecked(
        CMatrix::from_row_slice(2, 2, &[one, half_i, half_i, one]),
        CMatrix::from_row_slice(2, 2, &[zero, half_i, half_i, zero]),
    )
}

/// Central beam-splitter angle `½ asin(2/√5)`.
pub fn cz_phi() -> f64 {
    0.5 * (2.0 / 5f64.sqrt()).asin()
}

/// Memory beam-splitter angle `π/4 − φ`.
pub fn cz_phi_prime() -> f64 {
    FRAC_PI_4 - cz_phi()
}

/// Two-mode squeezing of the CZ gate, `asinh(½)`.
pub fn cz_tms_r() -> f64 {
    0.5f64.asinh()
}

/// One gate-level step of the CZ decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CzStep {
    Phase { theta1: f64, theta2: f64 },
    Bs(RamanBS),
    Tms(RamanTMS),
}

/// The CZ gate as gate-level steps and as a memory program.
#[derive(Debug, Clone, PartialEq)]
pub struct CzSequence {
    /// Phases, `BS(φ')`, phases, `TMS(asinh ½)`, `BS(−φ')`, phases.
    pub steps: Vec<CzStep>,
    /// The same sequence with every phase absorbed into control phases.
    pub program: MemoryProgram,
}

/// Builds the CZ decomposition. The memory program has exactly three
/// interactions (BS, TMS, BS) and trivial terminal phases.
pub fn cz_sequence() -> CzSequence {
    let pp = cz_phi_prime();
    let r = cz_tms_r();
    let steps = vec![
        CzStep::Phase { theta1: 0.0, theta2: FRAC_PI_2 },
        CzStep::Bs(RamanBS { phi: pp, theta: 0.0 }),
        CzStep::Phase { theta1: 0.0, theta2: PI },
        CzStep::Tms(RamanTMS { r, psi: 0.0 }),
        CzStep::Bs(RamanBS { phi: -pp, theta: 0.0 }),
        CzStep::Phase { theta1: 0.0, theta2: FRAC_PI_2 },
    ];
    let chain = steps_to_chain(&steps);
    let program = rewrite_chain(2, &chain).expect("CZ chain addresses two modes");
    CzSequence { steps, program }
}

fn steps_to_chain(steps: &[CzStep]) -> Vec<ChainOp> {
    let mut chain = Vec::new();
    for s in steps {
        match *s {
            CzStep::Phase { theta1, theta2 } => {
                chain.push(ChainOp::Phase { mode: 0, theta: theta1 });
                chain.push(ChainOp::Phase { mode: 1, theta: theta2 });
            }
            CzStep::Bs(op) => chain.push(ChainOp::Bs { modes: (0, 1), op }),
            CzStep::Tms(op) => chain.push(ChainOp::Tms { modes: (0, 1), op }),
        }
    }
    chain
}

impl CzSequence {
    /// Composition of the gate-level steps.
    pub fn gate_bogoliubov(&self) -> BogoliubovPair {
        chain_bogoliubov(2, &steps_to_chain(&self.steps)).expect("two-mode chain")
    }

    /// Composition of the memory program, terminal phases included.
    pub fn composed_bogoliubov(&self) -> BogoliubovPair {
        self.program.bogoliubov().expect("two-mode program")
    }

    /// `max |S_composed − S_CZ|` over the quadrature matrices.
    pub fn residual(&self) -> f64 {
        let s = self.composed_bogoliubov().symplectic_matrix();
        let ideal = cz_bogoliubov().symplectic_matrix();
        crate::linalg::max_abs(&(s - ideal))
    }

    /// Memory coupling `sin² φ'` of the beam-splitter steps.
    pub fn coupling_efficiency(&self) -> f64 {
        self.memory_bs().map(|b| b.coupling()).unwrap_or(0.0)
    }

    pub fn squeezing_db(&self) -> f64 {
        self.memory_tms().map(|t| t.squeezing_db()).unwrap_or(0.0)
    }

    pub fn memory_bs(&self) -> Option<RamanBS> {
        self.program.ops.iter().find_map(|op| match op {
            MemoryOp::Bs { op, .. } => Some(*op),
            _ => None,
        })
    }

    pub fn memory_tms(&self) -> Option<RamanTMS> {
        self.program.ops.iter().find_map(|op| match op {
            MemoryOp::Tms { op, .. } => Some(*op),
            _ => None,
        })
    }
}
