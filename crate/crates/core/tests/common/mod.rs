//! Checks shared by the property tests and the acceptance harness. Each
//! returns `Err` with a short diagnostic instead of panicking.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use urp_core::models::{
    bell_states, build_bell_effective, build_bell_full, build_gate_full, build_qec_full, build_threed_effective,
    build_threed_full, build_two_atom_full, gate_states, qec_states, threed_states, BellParams, GateParams, Model,
    QecParams, ThreeDParams, UrpTwoAtomParams,
};
use urp_core::observables::vectorize;
use urp_core::{
    evolve_master, lindblad_rhs, liouvillian_matrix, rotating_frame, ComplexOperator, DensityMatrix, HamiltonianTerm,
    IntegratorConfig, LindbladChannel, ObservableSpec, ProductBasis, PureState,
};

pub type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Trace, Hermiticity and positivity of every recorded state of a short run.
pub fn physical_states(name: &str, m: &Model, psi0: &PureState, t_final: f64) -> Check {
    let bound = IntegratorConfig::resolution_limit(m.max_abs_omega());
    let mut cfg = IntegratorConfig::adaptive(bound).aligned(t_final, 10, bound);
    cfg.keep_snapshots = true;
    let traj = evolve_master(&m.terms, &m.channels, &psi0.projector(), t_final, &cfg, &[])
        .map_err(|e| format!("{name}: {e}"))?;
    ensure(traj.snapshots.len() == traj.times.len(), || format!("{name}: snapshot count"))?;
    for (t, s) in traj.times.iter().zip(&traj.snapshots) {
        let rho = s.density();
        ensure((rho.trace() - 1.0).norm() < 1e-7, || format!("{name} t = {t}: trace {}", rho.trace()))?;
        ensure(rho.operator().hermiticity_error() < 1e-12, || format!("{name} t = {t}: not Hermitian"))?;
        let min = rho.min_eigenvalue();
        ensure(min >= -1e-6, || format!("{name} t = {t}: eigenvalue {min}"))?;
    }
    Ok(())
}

/// [`physical_states`] for the full model of every experiment family.
pub fn all_models_physical() -> Check {
    let two = build_two_atom_full(&UrpTwoAtomParams::default()).map_err(|e| e.to_string())?;
    let psi = two.basis.ket(&["1", "0"]).map_err(|e| e.to_string())?;
    physical_states("two-atom", &two, &psi, 5.0)?;

    let gate = build_gate_full(&GateParams { gamma: 0.05, stark_cancel: true, ..GateParams::default() }).unwrap();
    physical_states("gate", &gate, &gate_states().unwrap().0, 5.0)?;

    let bell = build_bell_full(&BellParams { stark_cancel: true, ..BellParams::default() }).unwrap();
    physical_states("bell", &bell, &bell_states().unwrap().psi_minus, 5.0)?;

    let three = build_threed_full(&ThreeDParams { stark_cancel: true, ..ThreeDParams::default() }).unwrap();
    physical_states("3d", &three, &threed_states().unwrap().1, 5.0)?;

    let p = QecParams { gamma_flip: 0.01, gamma: 0.001, stark_cancel: true, ..QecParams::default() };
    let qec = build_qec_full(&p, true).unwrap();
    physical_states("qec", &qec, &qec_states().unwrap().flipped, 0.5)
}

fn random_operator(rng: &mut ChaCha8Rng, d: usize) -> ComplexOperator {
    ComplexOperator::from_fn(d, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// `lindblad_rhs` against the column-stacked Liouvillian on seeded random input.
pub fn rhs_matches_liouvillian(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = 4;
    let a = random_operator(&mut rng, d);
    let h = (&a + &a.dagger()).scale(0.5);
    let terms = vec![HamiltonianTerm::static_term(h).unwrap()];
    let channels: Vec<_> = (0..2).map(|_| LindbladChannel::new(random_operator(&mut rng, d)).unwrap()).collect();
    let b = random_operator(&mut rng, d).into_matrix();
    let m = &b * b.adjoint();
    let tr = m.trace();
    let rho = DensityMatrix::new(ComplexOperator::from_matrix(m / tr).unwrap()).unwrap();
    let lv = liouvillian_matrix(&terms, &channels).unwrap();
    let direct = vectorize(&lindblad_rhs(&terms, &channels, &rho, 0.0).unwrap());
    let err = (&lv * vectorize(rho.operator()) - direct).camax();
    ensure(err < 1e-12, || format!("rhs vs Liouvillian: {err}"))
}

fn qubit() -> ProductBasis {
    ProductBasis::uniform(1, &["0", "1"]).unwrap()
}

/// Resonant Rabi flopping, `P₁ = sin²(Ωt)`.
pub fn rabi_oracle() -> Check {
    let b = qubit();
    let omega = 1.3;
    let h = HamiltonianTerm::static_term(b.site_operator(0, "1", "0").unwrap().plus_hc().scale(omega)).unwrap();
    let obs = [ObservableSpec::population("P1", b.ket(&["1"]).unwrap())];
    let rho0 = b.ket(&["0"]).unwrap().projector();
    let traj = evolve_master(&[h], &[], &rho0, 6.0, &IntegratorConfig::adaptive(0.05), &obs).unwrap();
    let err = traj
        .times
        .iter()
        .zip(traj.observable("P1").unwrap())
        .map(|(t, p)| (p - (omega * t).sin().powi(2)).abs())
        .fold(0.0, f64::max);
    ensure(err < 1e-6, || format!("Rabi: {err}"))
}

/// Amplitude damping, `P₁ = e^{−γt}`.
pub fn decay_oracle() -> Check {
    let b = qubit();
    let gamma = 0.7;
    let ch = LindbladChannel::with_rate(gamma, &b.site_operator(0, "0", "1").unwrap()).unwrap();
    let zero = HamiltonianTerm::static_term(ComplexOperator::zeros(2)).unwrap();
    let obs = [ObservableSpec::population("P1", b.ket(&["1"]).unwrap())];
    let rho0 = b.ket(&["1"]).unwrap().projector();
    let traj = evolve_master(&[zero], &[ch], &rho0, 5.0, &IntegratorConfig::adaptive(0.1), &obs).unwrap();
    let err = traj
        .times
        .iter()
        .zip(traj.observable("P1").unwrap())
        .map(|(t, p)| (p - (-gamma * t).exp()).abs())
        .fold(0.0, f64::max);
    ensure(err < 1e-6, || format!("decay: {err}"))
}

/// Populations of the two-atom model in the lab frame and in the frame
/// rotating with `Δ Σᵢ |r⟩ᵢ⟨r|`.
pub fn frame_invariance() -> Check {
    let p = UrpTwoAtomParams { omega1: 1.0, omega2: 0.1, delta: 10.0, u_rr: 10.0, stark_cancel: false };
    let m = build_two_atom_full(&p).unwrap();
    let b = &m.basis;
    let gen = &b.site_operator(0, "r", "r").unwrap() + &b.site_operator(1, "r", "r").unwrap();
    let (terms, channels) = rotating_frame(&m.terms, &gen.scale(p.delta), &m.channels).unwrap();
    let s = Complex64::new(0.5f64.sqrt(), 0.0);
    let rho0 = b.superposition(&[(s, &["1", "0"][..]), (s, &["1", "1"][..])]).unwrap().projector();
    let obs: Vec<_> = (0..b.dim())
        .map(|k| {
            let labels = b.labels_of(k).unwrap();
            ObservableSpec::population(labels.concat(), b.ket(&labels).unwrap())
        })
        .collect();
    let cfg = IntegratorConfig::adaptive(IntegratorConfig::resolution_limit(p.delta)).aligned(20.0, 40, 0.06);
    let lab = evolve_master(&m.terms, &m.channels, &rho0, 20.0, &cfg, &obs).unwrap();
    let rot = evolve_master(&terms, &channels, &rho0, 20.0, &cfg, &obs).unwrap();
    for o in &obs {
        let err = urp_core::trajectory_deviation(&lab, &rot, &o.name).unwrap();
        ensure(err < 1e-6, || format!("frame invariance {}: {err}", o.name))?;
    }
    Ok(())
}

/// Halving `max_step` moves the recorded fidelity by less than `10 × rel_tol`.
pub fn step_halving() -> Check {
    let p =
        GateParams { delta: 20.0, u_rr: 20.0, omega2: 0.1, gamma: 0.01, stark_cancel: true, ..GateParams::default() };
    let m = build_gate_full(&p).unwrap();
    let (psi0, target) = gate_states().unwrap();
    let obs = [ObservableSpec::fidelity("F", target)];
    let bound = IntegratorConfig::resolution_limit(m.max_abs_omega());
    let coarse_cfg = IntegratorConfig::adaptive(bound).aligned(10.0, 20, bound);
    let fine_cfg = IntegratorConfig::adaptive(bound).aligned(10.0, 20, bound / 2.0);
    let rho0 = psi0.projector();
    let coarse = evolve_master(&m.terms, &m.channels, &rho0, 10.0, &coarse_cfg, &obs).unwrap();
    let fine = evolve_master(&m.terms, &m.channels, &rho0, 10.0, &fine_cfg, &obs).unwrap();
    let err = urp_core::trajectory_deviation(&coarse, &fine, "F").unwrap();
    ensure(err < 10.0 * coarse_cfg.rel_tol, || format!("step halving: {err}"))
}

/// `H_eff|ψ⟩ = L_k|ψ⟩ = 0` for the Bell and 3D dark states (3D at δ = 0).
pub fn dark_state_identities() -> Check {
    let dark = |name: &str, m: &Model, psi: &PureState| -> Check {
        let h = m.static_hamiltonian().unwrap();
        let hn = h.apply(psi).unwrap().norm();
        ensure(hn < 1e-15, || format!("{name}: |H psi| = {hn}"))?;
        for (k, ch) in m.channels.iter().enumerate() {
            let ln = ch.operator().apply(psi).unwrap().norm();
            ensure(ln < 1e-15, || format!("{name}: |L_{k} psi| = {ln}"))?;
        }
        Ok(())
    };
    let bell = build_bell_effective(&BellParams::default()).unwrap();
    dark("bell", &bell, &bell_states().unwrap().phi_plus)?;
    let three = build_threed_effective(&ThreeDParams { delta_small: 0.0, ..ThreeDParams::default() }).unwrap();
    dark("3d", &three, &threed_states().unwrap().0)
}

/// The property suite in one list, named for reporting.
pub fn property_suite() -> Vec<(&'static str, Check)> {
    vec![
        ("trace, Hermiticity and positivity of recorded states", all_models_physical()),
        ("lindblad_rhs vs liouvillian_matrix (1e-12)", rhs_matches_liouvillian(11)),
        ("Rabi oracle (1e-6)", rabi_oracle()),
        ("decay oracle (1e-6)", decay_oracle()),
        ("frame invariance of populations (1e-6)", frame_invariance()),
        ("step-halving convergence", step_halving()),
        ("dark-state identities", dark_state_identities()),
    ]
}
