//! The two memory interactions, beam splitter and two-mode squeezer, and the
//! algebra that pushes per-mode phase shifts through them into the control
//! field phases.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bogoliubov::BogoliubovPair;
use crate::error::{ensure_finite, Error, Result};
use crate::linalg::{wrap_angle, CMatrix, C64};

/// Beam-splitter interaction between a field mode and a memory mode.
///
/// Stored canonically with `φ ∈ [0, π]` and `θ ∈ (−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RamanBS {
    pub phi: f64,
    pub theta: f64,
}

/// Two-mode squeezing interaction. Stored with `r ≥ 0` and `ψ ∈ (−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RamanTMS {
    pub r: f64,
    pub psi: f64,
}

/// Per-mode phases `(θ₁, θ₂)` applied as `a_k → e^{iθ_k} a_k`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhasePair {
    pub theta1: f64,
    pub theta2: f64,
}

impl RamanBS {
    /// Folds `φ` into `[0, π]`; a negative angle becomes `(−φ, θ + π)`.
    pub fn new(phi: f64, theta: f64) -> Result<Self> {
        ensure_finite("phi", phi)?;
        ensure_finite("theta", theta)?;
        let mut phi = wrap_angle(phi);
        let mut theta = theta;
        if phi < 0.0 {
            phi = -phi;
            theta += PI;
        }
        Ok(Self {
            phi,
            theta: wrap_angle(theta),
        })
    }

    /// `A = [[cos φ, e^{−iθ} sin φ], [−e^{iθ} sin φ, cos φ]]`, `B = 0`.
    pub fn bogoliubov(&self) -> BogoliubovPair {
        let (s, c) = self.phi.sin_cos();
        let a = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(c, 0.0),
                C64::from_polar(s, -self.theta),
                -C64::from_polar(s, self.theta),
                C64::new(c, 0.0),
            ],
        );
        BogoliubovPair::new_unchecked(a, CMatrix::zeros(2, 2))
    }

    /// Fraction of the field excitation transferred into the memory.
    pub fn coupling(&self) -> f64 {
        self.phi.sin().powi(2)
    }
}

impl RamanTMS {
    /// A negative `r` is folded into `(|r|, ψ + π)`.
    pub fn new(r: f64, psi: f64) -> Result<Self> {
        ensure_finite("r", r)?;
        ensure_finite("psi", psi)?;
        let (r, psi) = if r < 0.0 { (-r, psi + PI) } else { (r, psi) };
        Ok(Self {
            r,
            psi: wrap_angle(psi),
        })
    }

    /// `A = cosh r · I`, `B = e^{iψ} sinh r · antidiag(1, 1)`.
    pub fn bogoliubov(&self) -> BogoliubovPair {
        let mu = C64::new(self.r.cosh(), 0.0);
        let nu = C64::from_polar(self.r.sinh(), self.psi);
        let zero = C64::new(0.0, 0.0);
        BogoliubovPair::new_unchecked(
            CMatrix::from_row_slice(2, 2, &[mu, zero, zero, mu]),
            CMatrix::from_row_slice(2, 2, &[zero, nu, nu, zero]),
        )
    }

    pub fn squeezing_db(&self) -> f64 {
        crate::gaussian::r_to_db(self.r)
    }
}

impl PhasePair {
    pub fn new(theta1: f64, theta2: f64) -> Result<Self> {
        ensure_finite("theta1", theta1)?;
        ensure_finite("theta2", theta2)?;
        Ok(Self { theta1, theta2 })
    }

    pub fn bogoliubov(&self) -> BogoliubovPair {
        BogoliubovPair::phases(&[self.theta1, self.theta2])
    }
}

/// Rewrites `phases` followed by a real beam splitter of angle `φ` as a
/// Raman beam splitter with control phase `θ₁ − θ₂` followed by the same
/// phases.
pub fn commute_phases_bs(phases: PhasePair, phi: f64) -> Result<(RamanBS, PhasePair)> {
    Ok((RamanBS::new(phi, phases.theta1 - phases.theta2)?, phases))
}

/// Rewrites `phases` followed by a real two-mode squeezer of strength `r` as
/// a squeezer with control phase `−(θ₁ + θ₂)` followed by the same phases.
pub fn commute_phases_tms(phases: PhasePair, r: f64) -> Result<(RamanTMS, PhasePair)> {
    Ok((RamanTMS::new(r, -(phases.theta1 + phases.theta2))?, phases))
}

/// One step of an N-mode chain of phase shifts and memory interactions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ChainOp {
    Phase { mode: usize, theta: f64 },
    Bs { modes: (usize, usize), op: RamanBS },
    Tms { modes: (usize, usize), op: RamanTMS },
}

/// Memory-implementable operation: an interaction with pre-commuted phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MemoryOp {
    Bs { modes: (usize, usize), op: RamanBS },
    Tms { modes: (usize, usize), op: RamanTMS },
}

/// A chain with every phase shift moved to the end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoryProgram {
    pub n_modes: usize,
    pub ops: Vec<MemoryOp>,
    pub terminal_phases: Vec<f64>,
}

impl ChainOp {
    fn modes(&self) -> Vec<usize> {
        match *self {
            ChainOp::Phase { mode, .. } => vec![mode],
            ChainOp::Bs { modes, .. } | ChainOp::Tms { modes, .. } => vec![modes.0, modes.1],
        }
    }

    pub fn bogoliubov(&self, n_modes: usize) -> Result<BogoliubovPair> {
        match *self {
            ChainOp::Phase { mode, theta } => {
                BogoliubovPair::phases(&[theta]).embed(n_modes, &[mode])
            }
            ChainOp::Bs { modes, op } => op.bogoliubov().embed(n_modes, &[modes.0, modes.1]),
            ChainOp::Tms { modes, op } => op.bogoliubov().embed(n_modes, &[modes.0, modes.1]),
        }
    }
}

impl MemoryOp {
    pub fn bogoliubov(&self, n_modes: usize) -> Result<BogoliubovPair> {
        match *self {
            MemoryOp::Bs { modes, op } => op.bogoliubov().embed(n_modes, &[modes.0, modes.1]),
            MemoryOp::Tms { modes, op } => op.bogoliubov().embed(n_modes, &[modes.0, modes.1]),
        }
    }
}

/// Total transformation of a chain applied in order.
pub fn chain_bogoliubov(n_modes: usize, chain: &[ChainOp]) -> Result<BogoliubovPair> {
    chain.iter().try_fold(BogoliubovPair::identity(n_modes), |acc, op| {
        acc.then(&op.bogoliubov(n_modes)?)
    })
}

/// Moves all phase shifts of `chain` through the interactions, absorbing
/// them into control phases. The result implements the same transformation.
pub fn rewrite_chain(n_modes: usize, chain: &[ChainOp]) -> Result<MemoryProgram> {
    if n_modes == 0 {
        return Err(Error::NoModes);
    }
    let mut pending = vec![0.0; n_modes];
    let mut ops = Vec::new();
    for op in chain {
        let modes = op.modes();
        for (k, &m) in modes.iter().enumerate() {
            if m >= n_modes {
                return Err(Error::ModeOutOfRange { index: m, n_modes });
            }
            if modes[..k].contains(&m) {
                return Err(Error::RepeatedMode(m));
            }
        }
        match *op {
            ChainOp::Phase { mode, theta } => {
                ensure_finite("theta", theta)?;
                pending[mode] += theta;
            }
            ChainOp::Bs { modes: (i, j), op } => {
                let bs = RamanBS::new(op.phi, op.theta + pending[i] - pending[j])?;
                ops.push(MemoryOp::Bs { modes: (i, j), op: bs });
            }
            ChainOp::Tms { modes: (i, j), op } => {
                let tms = RamanTMS::new(op.r, op.psi - pending[i] - pending[j])?;
                ops.push(MemoryOp::Tms { modes: (i, j), op: tms });
            }
        }
    }
    Ok(MemoryProgram {
        n_modes,
        ops,
        terminal_phases: pending.into_iter().map(wrap_angle).collect(),
    })
}

impl MemoryProgram {
    pub fn bogoliubov(&self) -> Result<BogoliubovPair> {
        let body = self
            .ops
            .iter()
            .try_fold(BogoliubovPair::identity(self.n_modes), |acc, op| {
                acc.then(&op.bogoliubov(self.n_modes)?)
            })?;
        body.then(&BogoliubovPair::phases(&self.terminal_phases))
    }
}
