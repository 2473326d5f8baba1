//! Gaussian simulation of time-frequency continuous-variable cluster states
//! generated, linked and measured with Raman quantum memories.
//!
//! Conventions used throughout the crate:
//!
//! - quadratures are ordered `(q₁, p₁, q₂, p₂, …)` and the symplectic form is
//!   block diagonal with blocks `[[0, 1], [-1, 0]]`;
//! - `q = (a + a†)/√2`, `p = (a − a†)/(i√2)` with `ħ = 1`, so the vacuum
//!   covariance is `I/2`;
//! - a Bogoliubov pair `(A, B)` maps annihilation operators as
//!   `a' = A a + B a†`, and composition follows the Heisenberg picture.
//!
//! The modules mirror the pipeline: [`gaussian`] holds states and channels,
//! [`raman`] and [`bogoliubov`] describe the memory interactions,
//! [`bloch_messiah`] synthesises the CZ gate, [`cluster`] runs protocols and
//! [`scheduler`] lowers a lattice into a memory-chain program.

pub mod bloch_messiah;
pub mod bogoliubov;
pub mod cluster;
mod error;
pub mod gaussian;
pub mod linalg;
pub mod raman;
pub mod scheduler;
pub mod sweep;
pub mod symplectic;

pub use bloch_messiah::{cz_bogoliubov, cz_sequence, reduce, BlochMessiahFactors, CzSequence};
pub use bogoliubov::{BogoliubovPair, PairValidation};
pub use cluster::{
    apply_cz, build_2d_cluster, cz_fidelity_closed_form, nullifier_variances, pi_phase_route,
    two_qumode_cluster, two_qumode_fidelity_closed_form, ClusterGraph, CzLoss, NodeLabel,
    ProtocolResult,
};
pub use error::{Error, Result};
pub use gaussian::{db_to_r, fidelity, GaussianState, ModeIndex};
pub use raman::{commute_phases_bs, commute_phases_tms, PhasePair, RamanBS, RamanTMS};
pub use scheduler::{
    compile, execute, memory_count, ArchitectureConstraints, OpKind, Plaquette, Schedule,
    ScheduleEntry,
};
pub use symplectic::SymplecticOp;
