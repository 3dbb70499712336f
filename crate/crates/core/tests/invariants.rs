//! Property checks: basis bookkeeping, generator structure and the physical
//! invariants of every model's recorded states.

mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use urp_core::models::BellParams;
use urp_core::observables::vectorize;
use urp_core::{
    kron, lindblad_rhs, liouvillian_matrix, ComplexOperator, DensityMatrix, HamiltonianTerm, LindbladChannel,
    ProductBasis,
};

fn complex_entries(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| Complex64::new(a, b)), n)
}

fn operator(d: usize, entries: &[Complex64]) -> ComplexOperator {
    ComplexOperator::from_row_major(d, entries).unwrap()
}

fn hermitian(d: usize, entries: &[Complex64]) -> ComplexOperator {
    let a = operator(d, entries);
    (&a + &a.dagger()).scale(0.5)
}

/// A random density matrix `AA†/tr(AA†)`.
fn density(d: usize, entries: &[Complex64]) -> DensityMatrix {
    let a = operator(d, entries).into_matrix();
    let m = &a * a.adjoint();
    let tr = m.trace();
    DensityMatrix::new(ComplexOperator::from_matrix(m / tr).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn basis_index_round_trip(levels in prop::collection::vec(1usize..5, 1..4), seed in 0usize..10_000) {
        let sites = levels
            .iter()
            .map(|&n| {
                let labels: Vec<String> = (0..n).map(|k| format!("s{k}")).collect();
                urp_core::LevelScheme::new(&labels).unwrap()
            })
            .collect();
        let basis = ProductBasis::new(sites).unwrap();
        let index = seed % basis.dim();
        let labels = basis.labels_of(index).unwrap();
        prop_assert_eq!(basis.basis_index(&labels).unwrap(), index);
        // leftmost site most significant
        let digits = basis.digits_of(index);
        let mut back = 0;
        for (d, n) in digits.iter().zip(&levels) {
            back = back * n + d;
        }
        prop_assert_eq!(back, index);
    }

    #[test]
    fn site_operators_compose_like_ket_bras(a in 0usize..3, b in 0usize..3, c in 0usize..3, site in 0usize..2) {
        let basis = ProductBasis::uniform(2, &["0", "1", "r"]).unwrap();
        let l = ["0", "1", "r"];
        // |a⟩⟨b| · |b⟩⟨c| = |a⟩⟨c| and |a⟩⟨b| · |c⟩⟨c'| = 0 for b ≠ c
        let ab = basis.site_operator(site, l[a], l[b]).unwrap();
        let bc = basis.site_operator(site, l[b], l[c]).unwrap();
        let ac = basis.site_operator(site, l[a], l[c]).unwrap();
        prop_assert!((ab.matrix() * bc.matrix() - ac.matrix()).camax() < 1e-15);
        let other = basis.site_operator(1 - site, l[c], l[a]).unwrap();
        prop_assert!((ab.matrix() * other.matrix() - other.matrix() * ab.matrix()).camax() < 1e-15);
    }

    #[test]
    fn kron_mixed_product(x in complex_entries(4), y in complex_entries(9), u in complex_entries(4), v in complex_entries(9)) {
        let (a, b, c, d) = (operator(2, &x), operator(3, &y), operator(2, &u), operator(3, &v));
        let lhs = kron(&a, &b).unwrap().matrix() * kron(&c, &d).unwrap().matrix();
        let ac = ComplexOperator::from_matrix(a.matrix() * c.matrix()).unwrap();
        let bd = ComplexOperator::from_matrix(b.matrix() * d.matrix()).unwrap();
        prop_assert!((lhs - kron(&ac, &bd).unwrap().matrix()).camax() < 1e-12);
    }

    #[test]
    fn rhs_is_traceless_and_hermitian(
        h in complex_entries(16),
        w in complex_entries(16),
        l1 in complex_entries(16),
        l2 in complex_entries(16),
        re in complex_entries(16),
        omega in -5.0..5.0f64,
        t in 0.0..10.0f64,
    ) {
        let terms = vec![
            HamiltonianTerm::static_term(hermitian(4, &h)).unwrap(),
            HamiltonianTerm::rotating(operator(4, &w), omega).unwrap(),
        ];
        let channels = vec![LindbladChannel::new(operator(4, &l1)).unwrap(), LindbladChannel::new(operator(4, &l2)).unwrap()];
        let rho = density(4, &re);
        let out = lindblad_rhs(&terms, &channels, &rho, t).unwrap();
        prop_assert!(out.trace().norm() < 1e-12);
        prop_assert!(out.hermiticity_error() < 1e-12);
    }

    #[test]
    fn rhs_matches_liouvillian(h in complex_entries(9), l in complex_entries(9), re in complex_entries(9)) {
        let terms = vec![HamiltonianTerm::static_term(hermitian(3, &h)).unwrap()];
        let channels = vec![LindbladChannel::new(operator(3, &l)).unwrap()];
        let rho = density(3, &re);
        let m = liouvillian_matrix(&terms, &channels).unwrap();
        let from_m = &m * vectorize(rho.operator());
        let direct = vectorize(&lindblad_rhs(&terms, &channels, &rho, 0.0).unwrap());
        prop_assert!((from_m - direct).camax() < 1e-12);
    }
}

#[test]
fn recorded_states_stay_physical() {
    common::all_models_physical().unwrap();
}

#[test]
fn dark_states_are_annihilated() {
    common::dark_state_identities().unwrap();
}

#[test]
fn liouvillian_of_static_models_matches_rhs() {
    let p = BellParams::default();
    let m = urp_core::models::build_bell_effective(&p).unwrap();
    let d = m.dim();
    let lv = liouvillian_matrix(&m.terms, &m.channels).unwrap();
    let rho = DensityMatrix::maximally_mixed(d);
    let direct = vectorize(&lindblad_rhs(&m.terms, &m.channels, &rho, 0.0).unwrap());
    let err = (&lv * vectorize(rho.operator()) - direct).camax();
    assert!(err < 1e-12, "{err}");
    assert_eq!(lv.shape(), (d * d, d * d));
}
