//! The acceptance checker reads only the written files, and each criterion
//! depends only on the outputs it names.

use std::collections::BTreeMap;
use std::path::Path;

use urp_core::experiments::{check_acceptance, ExperimentResult, Provenance, Status};
use urp_core::Trajectory;

fn series(names: &[(&str, f64)]) -> Trajectory {
    let times = vec![0.0, 1.0, 2.0];
    let obs = names.iter().map(|(n, v)| (n.to_string(), vec![0.0, *v, *v])).collect();
    Trajectory::from_series(times, obs).unwrap()
}

fn write(root: &Path, experiment: &str, trajs: Vec<(&str, Trajectory)>, summary: &[(&str, f64)]) {
    let result = ExperimentResult {
        trajectories: trajs.into_iter().map(|(n, t)| (n.to_string(), t)).collect(),
        summary: summary.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        steady_states: BTreeMap::new(),
        provenance: Provenance {
            experiment: experiment.into(),
            registry_entry: experiment.into(),
            figure: String::new(),
            parameters: BTreeMap::new(),
            overridden: vec![],
            assumed_defaults: vec![],
            reduced: false,
            time_unit: "1/omega1".into(),
            integrators: BTreeMap::new(),
            code_version: "test".into(),
            notes: BTreeMap::new(),
        },
        output_dir: None,
    };
    result.write(root).unwrap();
}

/// Synthetic outputs chosen to sit inside every tolerance band.
fn passing_outputs(root: &Path) {
    let both = |obs: &[(&str, f64)]| vec![("full", series(obs)), ("effective", series(obs))];
    write(root, "fig4", both(&[("F", 0.9994)]), &[]);
    write(root, "gate-dissipative", vec![("full", series(&[("F", 0.9937)]))], &[]);
    let bell = [("phi_plus", 0.9935), ("phi_minus", 0.002), ("psi_plus", 0.002), ("psi_minus", 0.002)];
    write(
        root,
        "fig6",
        both(&bell),
        &[("converged", 1.0), ("steady_null_dimension", 1.0), ("steady_population_phi_plus", 1.0)],
    );
    write(root, "fig6-exp", both(&bell), &[("converged", 1.0)]);
    write(
        root,
        "fig8",
        both(&[("T1", 0.988), ("F_00", 0.572), ("F_11", 0.572), ("F_22", 0.572)]),
        &[("steady_null_dimension_delta0", 2.0), ("steady_null_dimension", 1.0), ("steady_population_T1", 1.0)],
    );
    write(root, "fig10", both(&[("F", 0.996)]), &[]);
    write(root, "fig10-exp", both(&[("F", 0.9734)]), &[]);
    write(
        root,
        "fig11",
        vec![
            ("baseline", series(&[("F", 0.4277)])),
            ("g500", series(&[("F", 0.6805)])),
            ("g1000", series(&[("F", 0.7777)])),
        ],
        &[],
    );
}

fn statuses(root: &Path) -> BTreeMap<String, Status> {
    check_acceptance(root).unwrap().criteria.into_iter().map(|c| (c.id.to_string(), c.status)).collect()
}

#[test]
fn synthetic_outputs_pass_and_optional_point_is_skipped() {
    let dir = tempfile::tempdir().unwrap();
    passing_outputs(dir.path());
    let s = statuses(dir.path());
    for (id, status) in &s {
        let expected = if id == "8d" { Status::Skip } else { Status::Pass };
        assert_eq!(*status, expected, "criterion {id}");
    }
    assert!(check_acceptance(dir.path()).unwrap().passed());
}

#[test]
fn corrupting_one_value_fails_only_its_criterion() {
    let dir = tempfile::tempdir().unwrap();
    passing_outputs(dir.path());
    let baseline = statuses(dir.path());

    let path = dir.path().join("gate-dissipative/full.csv");
    let text = std::fs::read_to_string(&path).unwrap().replace("2,0.9937", "2,0.95");
    std::fs::write(&path, text).unwrap();
    let after = statuses(dir.path());
    for (id, status) in &after {
        if id == "2" {
            assert_eq!(*status, Status::Fail);
        } else {
            assert_eq!(status, &baseline[id], "criterion {id} changed");
        }
    }

    // an unreadable file is reported against its own experiment only
    std::fs::write(dir.path().join("fig6/full.csv"), "t,phi_plus\n0,oops\n").unwrap();
    let report = check_acceptance(dir.path()).unwrap();
    for c in &report.criteria {
        let broken = ["2", "3a", "3b"].contains(&c.id);
        assert_eq!(c.status == Status::Fail, broken, "criterion {}: {}", c.id, c.detail);
    }
}

#[test]
fn reduced_qec_runs_do_not_pass() {
    let dir = tempfile::tempdir().unwrap();
    passing_outputs(dir.path());
    let meta_path = dir.path().join("fig11/metadata.json");
    let text = std::fs::read_to_string(&meta_path).unwrap().replace("\"reduced\": false", "\"reduced\": true");
    std::fs::write(&meta_path, text).unwrap();
    let s = statuses(dir.path());
    for id in ["8a", "8b", "8c"] {
        assert_eq!(s[id], Status::Fail, "criterion {id}");
    }
    assert_eq!(s["7a"], Status::Pass);
}
