use nalgebra::DMatrix;
use proptest::prelude::*;

use tfcluster::cluster::{
    apply_cz, build_2d_cluster, cz_fidelity_closed_form, generate_pair, nullifier_variances,
    two_qumode_cluster, two_qumode_fidelity_closed_form, ClusterGraph, NodeLabel, ProtocolResult,
};
use tfcluster::gaussian::{GaussianState, ModeIndex};

fn n(f: usize, t: usize) -> NodeLabel {
    NodeLabel::new(f, t)
}

#[test]
fn fidelities_fall_with_loss_and_squeezing() {
    let dbs: Vec<f64> = (0..=10).map(|k| 2.0 * k as f64).collect();
    let etas: Vec<f64> = (0..=10).map(|k| 1e-6 * 10f64.powf(k as f64 / 2.0)).collect();
    for f in [two_qumode_fidelity_closed_form, cz_fidelity_closed_form] {
        for &db in &dbs[1..] {
            let row: Vec<f64> = etas.iter().map(|&e| f(db, e).unwrap()).collect();
            assert!(row.windows(2).all(|w| w[1] <= w[0] + 1e-12), "dB {db}: {row:?}");
        }
        for &e in &etas {
            let col: Vec<f64> = dbs.iter().map(|&db| f(db, e).unwrap()).collect();
            assert!(col.windows(2).all(|w| w[1] <= w[0] + 1e-12), "δη {e}: {col:?}");
        }
    }
}

#[test]
fn disjoint_czs_commute() {
    let mut state = GaussianState::squeezed_vacuum(0.4).unwrap();
    for r in [-0.2, 0.7, 0.1] {
        state = state.tensor(&GaussianState::squeezed_vacuum(r).unwrap());
    }
    let state = state.displace(ModeIndex(2), 0.3, -0.8).unwrap();
    let labels = vec![n(0, 0), n(0, 1), n(1, 0), n(1, 1)];
    let res = ProtocolResult::from_state(state, labels).unwrap();
    let ab = apply_cz(&apply_cz(&res, n(0, 0), n(0, 1), 0.0).unwrap(), n(1, 0), n(1, 1), 0.0).unwrap();
    let ba = apply_cz(&apply_cz(&res, n(1, 0), n(1, 1), 0.0).unwrap(), n(0, 0), n(0, 1), 0.0).unwrap();
    assert!((ab.state.cov() - ba.state.cov()).amax() < 1e-12);
    assert!((ab.state.mean() - ba.state.mean()).amax() < 1e-12);
    assert_eq!(ab.graph, ba.graph);
}

#[test]
fn lattice_graph_matches_grid() {
    let res = build_2d_cluster(3, 2, 0.3, 0.0).unwrap();
    assert!(res.graph.same_edges(&ClusterGraph::grid(3, 4)));
    let graph = build_2d_cluster(3, 4, 0.1, 0.0).unwrap().graph;
    let mut expected = DMatrix::<f64>::zeros(24, 24);
    for f in 0..3 {
        for t in 0..8 {
            let k = f * 8 + t;
            if t + 1 < 8 {
                expected[(k, k + 1)] = 1.0;
                expected[(k + 1, k)] = 1.0;
            }
            if f + 1 < 3 {
                expected[(k, k + 8)] = 1.0;
                expected[(k + 8, k)] = 1.0;
            }
        }
    }
    assert_eq!(graph.adjacency(), &expected);
}

#[test]
fn minimal_lattice_is_two_pairs_and_one_link() {
    let (r, eta) = (0.9, 0.03);
    let lattice = build_2d_cluster(1, 2, r, eta).unwrap();
    let mut direct = ProtocolResult::vacuum_lattice(1, 2).unwrap();
    direct = generate_pair(&direct, n(0, 0), n(0, 1), r, eta).unwrap();
    direct = generate_pair(&direct, n(0, 2), n(0, 3), r, eta).unwrap();
    direct = apply_cz(&direct, n(0, 1), n(0, 2), eta).unwrap();
    assert!((lattice.state.cov() - direct.state.cov()).amax() < 1e-10);
    assert_eq!(lattice.graph, direct.graph);

    // Each stage-a pair on its own is the two-qumode cluster.
    let pair = two_qumode_cluster(r, eta).unwrap();
    let alone = generate_pair(&ProtocolResult::vacuum_lattice(1, 2).unwrap(), n(0, 0), n(0, 1), r, eta).unwrap();
    let reduced = alone.state.reduced(&[ModeIndex(0), ModeIndex(1)]).unwrap();
    assert!((reduced.cov() - pair.state.cov()).amax() < 1e-12);
}

#[test]
fn lattice_nullifiers_at_r3_are_bounded() {
    let r = 3.0;
    let res = build_2d_cluster(2, 2, r, 0.0).unwrap();
    let bound = 4.0 * (-2.0 * r).exp();
    let v = nullifier_variances(&res);
    assert_eq!(v.len(), 8);
    assert!(v.iter().all(|&x| x < bound), "{v:?} vs {bound}");
}

#[test]
fn nullifiers_fall_with_squeezing() {
    let mut last = vec![f64::INFINITY; 12];
    for k in 0..=12 {
        let r = 0.25 * k as f64;
        let v = nullifier_variances(&build_2d_cluster(2, 3, r, 0.0).unwrap());
        assert!(v.iter().zip(&last).all(|(a, b)| a < b), "r = {r}");
        last = v;
    }
}

#[test]
fn total_loss_leaves_linked_modes_in_vacuum() {
    let res = build_2d_cluster(2, 2, 1.2, 1.0).unwrap();
    let vac = GaussianState::vacuum(8).unwrap();
    assert!((res.state.cov() - vac.cov()).amax() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lattices_stay_physical(d in 1usize..4, pairs in 2usize..4, r in 0.0..1.5f64, eta in 0.0..0.2f64) {
        let res = build_2d_cluster(d, pairs, r, eta).unwrap();
        prop_assert!(res.state.min_symplectic_eigenvalue() >= 0.5 - 1e-9);
        prop_assert_eq!(res.graph.edges().len(), d * (2 * pairs - 1) + (d - 1) * 2 * pairs);
        if eta == 0.0 {
            prop_assert!((res.state.purity() - 1.0).abs() < 1e-9);
        }
    }
}
