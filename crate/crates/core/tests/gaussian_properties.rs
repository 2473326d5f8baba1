use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use tfcluster::gaussian::{fidelity, GaussianState, ModeIndex};
use tfcluster::linalg::omega;
use tfcluster::raman::{chain_bogoliubov, ChainOp, RamanBS, RamanTMS};
use tfcluster::symplectic::SymplecticOp;

#[derive(Debug, Clone)]
enum Step {
    Phase(usize, f64),
    Bs(usize, usize, f64, f64),
    Tms(usize, usize, f64, f64),
}

fn step(n: usize) -> impl Strategy<Value = Step> {
    let pair = (0..n, 1..n).prop_map(move |(i, k)| (i, (i + k) % n));
    prop_oneof![
        (0..n, -3.0..3.0f64).prop_map(|(m, t)| Step::Phase(m, t)),
        (pair.clone(), -3.0..3.0f64, -3.0..3.0f64).prop_map(|((i, j), phi, th)| Step::Bs(i, j, phi, th)),
        (pair, 0.0..0.8f64, -3.0..3.0f64).prop_map(|((i, j), r, psi)| Step::Tms(i, j, r, psi)),
    ]
}

fn symplectic(n: usize, steps: &[Step]) -> SymplecticOp {
    let chain: Vec<ChainOp> = steps
        .iter()
        .map(|s| match *s {
            Step::Phase(mode, theta) => ChainOp::Phase { mode, theta },
            Step::Bs(i, j, phi, theta) => ChainOp::Bs {
                modes: (i, j),
                op: RamanBS::new(phi, theta).unwrap(),
            },
            Step::Tms(i, j, r, psi) => ChainOp::Tms {
                modes: (i, j),
                op: RamanTMS::new(r, psi).unwrap(),
            },
        })
        .collect();
    chain_bogoliubov(n, &chain).unwrap().to_symplectic().unwrap()
}

/// Thermal product state with random occupations and displacements.
fn mixed_state(nbar: &[f64], shift: &[f64]) -> GaussianState {
    let mut s = GaussianState::thermal(nbar[0]).unwrap();
    for &x in &nbar[1..] {
        s = s.tensor(&GaussianState::thermal(x).unwrap());
    }
    for (m, pair) in shift.chunks(2).enumerate() {
        s = s.displace(ModeIndex(m), pair[0], pair[1]).unwrap();
    }
    s
}

/// Symplectic spectrum from the eigenvalues `±iν` of `Ω V`.
fn spectrum_oracle(cov: &DMatrix<f64>) -> Vec<f64> {
    let n = cov.nrows() / 2;
    let mut nu: Vec<f64> = (omega(n) * cov)
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im > 0.0)
        .map(|z| z.im)
        .collect();
    nu.sort_by(f64::total_cmp);
    nu
}

fn all_modes(n: usize) -> Vec<ModeIndex> {
    (0..n).map(ModeIndex).collect()
}

fn state_strategy(n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (
        prop::collection::vec(0.0..2.0f64, n),
        prop::collection::vec(-1.5..1.5f64, 2 * n),
    )
}

const N: usize = 3;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn apply_preserves_symplectic_spectrum(
        (nbar, shift) in state_strategy(N),
        steps in prop::collection::vec(step(N), 1..8),
    ) {
        let s = mixed_state(&nbar, &shift);
        let out = s.apply(&symplectic(N, &steps), &all_modes(N)).unwrap();
        let before = spectrum_oracle(s.cov());
        let after = spectrum_oracle(out.cov());
        let lib = out.symplectic_eigenvalues();
        for k in 0..N {
            prop_assert!((before[k] - after[k]).abs() < 1e-9, "{before:?} vs {after:?}");
            prop_assert!((lib[k] - after[k]).abs() < 1e-9, "{lib:?} vs {after:?}");
        }
    }

    #[test]
    fn fidelity_is_symmetric_bounded_and_invariant(
        (nbar_a, shift_a) in state_strategy(2),
        (nbar_b, shift_b) in state_strategy(2),
        steps in prop::collection::vec(step(2), 1..6),
    ) {
        let a = mixed_state(&nbar_a, &shift_a);
        let b = mixed_state(&nbar_b, &shift_b);
        let s = symplectic(2, &steps);
        let f = fidelity(&a, &b).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f));
        prop_assert!((f - fidelity(&b, &a).unwrap()).abs() < 1e-12);
        let sa = a.apply(&s, &all_modes(2)).unwrap();
        let sb = b.apply(&s, &all_modes(2)).unwrap();
        prop_assert!((f - fidelity(&sa, &sb).unwrap()).abs() < 1e-9);
        prop_assert!((fidelity(&sa, &sa).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn lossy_coupling_composes(
        (nbar, shift) in state_strategy(2),
        steps in prop::collection::vec(step(2), 1..5),
        e1 in 0.0..1.0f64,
        e2 in 0.0..1.0f64,
    ) {
        let s = mixed_state(&nbar, &shift).apply(&symplectic(2, &steps), &all_modes(2)).unwrap();
        let twice = s.lossy_coupling(ModeIndex(1), e1).unwrap().lossy_coupling(ModeIndex(1), e2).unwrap();
        let once = s.lossy_coupling(ModeIndex(1), 1.0 - (1.0 - e1) * (1.0 - e2)).unwrap();
        prop_assert!((twice.cov() - once.cov()).amax() < 1e-12);
        prop_assert!((twice.mean() - once.mean()).amax() < 1e-12);
        prop_assert_eq!(s.lossy_coupling(ModeIndex(0), 0.0).unwrap(), s);
    }

    #[test]
    fn lossless_sequences_stay_pure_and_losses_stay_physical(
        steps in prop::collection::vec(step(N), 1..10),
        losses in prop::collection::vec((0..N, 0.0..1.0f64), 1..6),
    ) {
        let pure = GaussianState::vacuum(N).unwrap().apply(&symplectic(N, &steps), &all_modes(N)).unwrap();
        prop_assert!((pure.purity() - 1.0).abs() < 1e-9);
        let mut s = pure;
        for (m, eta) in losses {
            s = s.lossy_coupling(ModeIndex(m), eta).unwrap();
            prop_assert!(s.purity() <= 1.0 + 1e-9);
            prop_assert!(s.min_symplectic_eigenvalue() >= 0.5 - 1e-9);
        }
    }

    #[test]
    fn homodyne_cov_ignores_outcome(
        steps in prop::collection::vec(step(2), 1..6),
        angle in -3.0..3.0f64,
        x in -4.0..4.0f64,
    ) {
        let s = GaussianState::vacuum(2).unwrap().apply(&symplectic(2, &steps), &all_modes(2)).unwrap();
        let a = s.homodyne(ModeIndex(0), angle, 0.0).unwrap();
        let b = s.homodyne(ModeIndex(0), angle, x).unwrap();
        prop_assert!((a.cov() - b.cov()).amax() < 1e-12);
    }
}

#[test]
fn tensor_and_trace_out_examples() {
    let v = GaussianState::vacuum(1).unwrap();
    assert_eq!(v.tensor(&v), GaussianState::vacuum(2).unwrap());
    let s = mixed_state(&[0.3, 1.1], &[0.2, -0.4, 1.0, 0.5]);
    let back = s.tensor(&GaussianState::thermal(0.7).unwrap()).trace_out(&[ModeIndex(2)]).unwrap();
    assert_eq!(back, s);
    assert!(s.trace_out(&[ModeIndex(0), ModeIndex(1)]).is_err());
    assert!(s.trace_out(&[ModeIndex(5)]).is_err());
}

#[test]
fn swap_beam_splitter_moves_squeezing() {
    let s = GaussianState::vacuum(1).unwrap().tensor(&GaussianState::squeezed_vacuum(0.7).unwrap());
    let bs = RamanBS::new(std::f64::consts::FRAC_PI_2, 0.0).unwrap().bogoliubov().to_symplectic().unwrap();
    let out = s.apply(&bs, &all_modes(2)).unwrap();
    let expected = DMatrix::from_diagonal(&DVector::from_vec(vec![
        0.5 * 1.4f64.exp(),
        0.5 * (-1.4f64).exp(),
        0.5,
        0.5,
    ]));
    assert!((out.cov() - expected).amax() < 1e-12);
}

#[test]
fn loss_can_purify_a_mixed_state() {
    // Damping a thermal mode towards vacuum raises its purity, so purity is
    // only monotone along a loss sequence that starts from a pure state.
    let hot = GaussianState::thermal(2.0).unwrap();
    let cooled = hot.lossy_coupling(ModeIndex(0), 0.5).unwrap();
    assert!(cooled.purity() > hot.purity());
    assert!((hot.lossy_coupling(ModeIndex(0), 1.0).unwrap().purity() - 1.0).abs() < 1e-15);
}
