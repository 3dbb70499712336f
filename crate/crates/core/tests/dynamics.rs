//! Integrator checks against closed-form and independently computed oracles.

mod common;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use urp_core::models::{build_gate_full, build_two_atom_full, gate_states, GateParams, UrpTwoAtomParams};
use urp_core::{
    evolve_master, evolve_unitary, ComplexOperator, DensityMatrix, HamiltonianTerm, IntegratorConfig, LindbladChannel,
    ObservableSpec, ProductBasis, PureState,
};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn qubit() -> ProductBasis {
    ProductBasis::uniform(1, &["0", "1"]).unwrap()
}

#[test]
fn rabi_oscillation_matches_sin_squared() {
    let b = qubit();
    let omega = 1.3;
    let h = HamiltonianTerm::static_term(b.site_operator(0, "1", "0").unwrap().plus_hc().scale(omega)).unwrap();
    let rho0 = b.ket(&["0"]).unwrap().projector();
    let obs = [ObservableSpec::population("P1", b.ket(&["1"]).unwrap())];
    for cfg in [IntegratorConfig::adaptive(0.05), IntegratorConfig::fixed(0.005)] {
        let traj = evolve_master(std::slice::from_ref(&h), &[], &rho0, 6.0, &cfg, &obs).unwrap();
        for (t, p) in traj.times.iter().zip(traj.observable("P1").unwrap()) {
            assert!((p - (omega * t).sin().powi(2)).abs() < 1e-6, "t = {t}: {p}");
        }
    }
}

#[test]
fn amplitude_damping_matches_exponential() {
    let b = qubit();
    let gamma = 0.7;
    let ch = LindbladChannel::with_rate(gamma, &b.site_operator(0, "0", "1").unwrap()).unwrap();
    let zero = HamiltonianTerm::static_term(ComplexOperator::zeros(2)).unwrap();
    let rho0 = b.ket(&["1"]).unwrap().projector();
    let obs = [ObservableSpec::population("P1", b.ket(&["1"]).unwrap())];
    for cfg in [IntegratorConfig::adaptive(0.1), IntegratorConfig::fixed(0.01)] {
        let traj = evolve_master(std::slice::from_ref(&zero), std::slice::from_ref(&ch), &rho0, 5.0, &cfg, &obs).unwrap();
        for (t, p) in traj.times.iter().zip(traj.observable("P1").unwrap()) {
            assert!((p - (-gamma * t).exp()).abs() < 1e-6, "t = {t}: {p}");
        }
    }
}

#[test]
fn zero_hamiltonian_leaves_state_unchanged() {
    let b = qubit();
    let psi = b.superposition(&[(c(0.6), &["0"][..]), (Complex64::new(0.0, 0.8), &["1"][..])]).unwrap();
    let zero = HamiltonianTerm::static_term(ComplexOperator::zeros(2)).unwrap();
    let traj = evolve_unitary(&[zero], &psi, 3.0, &IntegratorConfig::adaptive(0.5), &[]).unwrap();
    let end = traj.final_state.unwrap().density();
    let start = psi.projector();
    for a in 0..2 {
        for k in 0..2 {
            assert!((end.get(a, k) - start.get(a, k)).norm() < 1e-14);
        }
    }
}

fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(d, d, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    (&a + a.adjoint()) * c(0.5)
}

#[test]
fn static_evolution_matches_eigendecomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let d = 9;
    let h = random_hermitian(&mut rng, d);
    let psi0 = PureState::normalized(DVector::from_fn(d, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }))
    .unwrap();
    let t = 2.5;
    // e^{−iHt} = V e^{−iEt} V†
    let eig = h.clone().symmetric_eigen();
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|e| Complex64::from_polar(1.0, -e * t)));
    let u = &eig.eigenvectors * phases * eig.eigenvectors.adjoint();
    let expected = u * psi0.amplitudes();

    let term = HamiltonianTerm::static_term(ComplexOperator::from_matrix(h).unwrap()).unwrap();
    for cfg in [IntegratorConfig::adaptive(0.05), IntegratorConfig::fixed(1e-3)] {
        let traj = evolve_unitary(std::slice::from_ref(&term), &psi0, t, &cfg, &[]).unwrap();
        let urp_core::dynamics::Snapshot::Pure(end) = traj.final_state.unwrap() else {
            panic!("unitary evolution must end in a pure state")
        };
        let err = (end.amplitudes() - &expected).camax();
        assert!(err < 1e-8, "{cfg:?}: {err}");
        assert!((end.norm() - 1.0).abs() < 1e-8);
    }
}

#[test]
fn far_detuned_drive_barely_moves_population() {
    let b = qubit();
    let (omega, w) = (1.0, 1000.0);
    let term = HamiltonianTerm::rotating(b.site_operator(0, "1", "0").unwrap().scale(omega), w).unwrap();
    let psi0 = b.ket(&["0"]).unwrap();
    let obs = [ObservableSpec::population("P1", b.ket(&["1"]).unwrap())];
    let cfg = IntegratorConfig::adaptive(IntegratorConfig::resolution_limit(w));
    let traj = evolve_unitary(&[term], &psi0, 10.0, &cfg, &obs).unwrap();
    // detuned two-level bound: P₁ ≤ 4Ω²/(ω² + 4Ω²)
    let bound = 4.0 * omega * omega / (w * w + 4.0 * omega * omega);
    let max = traj.observable("P1").unwrap().iter().cloned().fold(0.0, f64::max);
    assert!(max <= bound * (1.0 + 1e-3), "{max} > {bound}");
    assert!(max > 0.5 * bound);
}

#[test]
fn rotating_frame_preserves_populations() {
    common::frame_invariance().unwrap();
}

fn small_gate() -> (urp_core::models::Model, DensityMatrix, Vec<ObservableSpec>) {
    let p =
        GateParams { delta: 20.0, u_rr: 20.0, omega2: 0.1, gamma: 0.01, stark_cancel: true, ..GateParams::default() };
    let m = build_gate_full(&p).unwrap();
    let (psi0, target) = gate_states().unwrap();
    let obs = vec![ObservableSpec::fidelity("F", target)];
    (m, psi0.projector(), obs)
}

#[test]
fn halving_the_step_changes_little() {
    common::step_halving().unwrap();
}

#[test]
fn integrating_factor_agrees_with_adaptive() {
    let (m, rho0, obs) = small_gate();
    let bound = IntegratorConfig::resolution_limit(m.max_abs_omega());
    let fixed = IntegratorConfig::fixed(bound).aligned(10.0, 20, bound / 4.0);
    let adaptive = IntegratorConfig::adaptive(bound).aligned(10.0, 20, bound);
    let a = evolve_master(&m.terms, &m.channels, &rho0, 10.0, &fixed, &obs).unwrap();
    let b = evolve_master(&m.terms, &m.channels, &rho0, 10.0, &adaptive, &obs).unwrap();
    assert!(urp_core::trajectory_deviation(&a, &b, "F").unwrap() < 1e-6);
}

#[test]
fn closed_master_equation_matches_schroedinger() {
    let p = UrpTwoAtomParams { omega1: 1.0, omega2: 0.1, delta: 10.0, u_rr: 10.0, stark_cancel: false };
    let m = build_two_atom_full(&p).unwrap();
    let psi0 = m.basis.ket(&["1", "0"]).unwrap();
    let bound = IntegratorConfig::resolution_limit(p.delta);
    let mut cfg = IntegratorConfig::adaptive(bound).aligned(8.0, 16, bound);
    cfg.keep_snapshots = true;
    let a = evolve_master(&m.terms, &[], &psi0.projector(), 8.0, &cfg, &[]).unwrap();
    let b = evolve_unitary(&m.terms, &psi0, 8.0, &cfg, &[]).unwrap();
    assert_eq!(a.snapshots.len(), b.snapshots.len());
    assert!(!a.snapshots.is_empty());
    for (x, y) in a.snapshots.iter().zip(&b.snapshots) {
        let (x, y) = (x.density(), y.density());
        let err = (x.operator().matrix() - y.operator().matrix()).camax();
        assert!(err < 1e-6, "{err}");
    }
}

#[test]
fn coarse_steps_are_rejected_for_fast_terms() {
    let (m, rho0, obs) = small_gate();
    let limit = IntegratorConfig::resolution_limit(m.max_abs_omega());
    let cfg = IntegratorConfig::adaptive(limit * 1.5);
    assert!(matches!(
        evolve_master(&m.terms, &m.channels, &rho0, 1.0, &cfg, &obs),
        Err(urp_core::SimError::StepTooLarge { .. })
    ));
}
