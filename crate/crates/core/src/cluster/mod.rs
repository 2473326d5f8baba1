//! Cluster-state protocols: two-qumode clusters, CZ links through three
//! memories, the 2D time-frequency lattice, nullifiers and measurement
//! routing.

pub mod closed_form;
mod graph;
pub mod protocols;

pub use closed_form::{
    cz_fidelity_closed_form, cz_fidelity_numeric, two_qumode_fidelity_closed_form,
    two_qumode_fidelity_numeric,
};
pub use graph::{ClusterGraph, NodeLabel};
pub use protocols::{
    apply_cz, apply_cz_with_loss, build_2d_cluster, generate_pair, nullifier_variances,
    pi_phase_route, teleport, two_qumode_cluster, CzLoss, ProtocolResult, MAX_MODES,
};
