//! Registry of reproducible experiments, their runner and the acceptance
//! checker.
//!
//! Each run writes `<out>/<experiment>/<trajectory>.csv` and
//! `<out>/<experiment>/metadata.json`. Summary scalars in the metadata are
//! recomputable from the CSV files, which is what [`check_acceptance`] does.

mod check;
mod config;
mod output;
mod registry;
mod runners;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use check::{check_acceptance, AcceptanceReport, CriterionResult, Status};
pub use config::{ExperimentConfig, IntegratorOverrides, Resolved};
pub use output::{read_csv, trajectory_csv, write_csv};
pub use registry::{list_experiments, lookup, ExperimentInfo, Variant};
pub use runners::calibrate_delta;

use crate::dynamics::{IntegratorConfig, Trajectory};
use crate::error::{Result, SimError};
use crate::observables::SteadyStateReport;

/// Everything needed to trace a number in the output back to its inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub experiment: String,
    pub registry_entry: String,
    pub figure: String,
    pub parameters: BTreeMap<String, f64>,
    pub overridden: Vec<String>,
    pub assumed_defaults: Vec<String>,
    pub reduced: bool,
    pub time_unit: String,
    pub integrators: BTreeMap<String, IntegratorConfig>,
    pub code_version: String,
    #[serde(default)]
    pub notes: BTreeMap<String, serde_json::Value>,
}

/// Per-trajectory entry in the metadata file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryFile {
    pub name: String,
    pub file: String,
    pub observables: Vec<String>,
    pub samples: usize,
}

/// Contents of `metadata.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Metadata {
    pub provenance: Provenance,
    pub summary: BTreeMap<String, f64>,
    pub steady_states: BTreeMap<String, SteadyStateReport>,
    pub trajectories: Vec<TrajectoryFile>,
}

impl Metadata {
    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join("metadata.json");
        if !path.exists() {
            return Err(SimError::MissingOutput(path.display().to_string()));
        }
        let text = std::fs::read_to_string(&path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub trajectories: Vec<(String, Trajectory)>,
    pub summary: BTreeMap<String, f64>,
    pub steady_states: BTreeMap<String, SteadyStateReport>,
    pub provenance: Provenance,
    /// Directory the files were written to, if an output directory was set.
    pub output_dir: Option<PathBuf>,
}

impl ExperimentResult {
    pub fn trajectory(&self, name: &str) -> Option<&Trajectory> {
        self.trajectories.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn metadata(&self) -> Metadata {
        Metadata {
            provenance: self.provenance.clone(),
            summary: self.summary.clone(),
            steady_states: self.steady_states.clone(),
            trajectories: self
                .trajectories
                .iter()
                .map(|(name, t)| TrajectoryFile {
                    name: name.clone(),
                    file: format!("{name}.csv"),
                    observables: t.observables.iter().map(|(n, _)| n.clone()).collect(),
                    samples: t.times.len(),
                })
                .collect(),
        }
    }

    /// Writes the CSV files and `metadata.json` into `<root>/<experiment>/`.
    pub fn write(&self, root: &Path) -> Result<PathBuf> {
        let dir = output::ensure_dir(&root.join(&self.provenance.experiment))?;
        for (name, traj) in &self.trajectories {
            write_csv(&dir.join(format!("{name}.csv")), traj)?;
        }
        let text = serde_json::to_string_pretty(&self.metadata())?;
        std::fs::write(dir.join("metadata.json"), text + "\n")?;
        Ok(dir)
    }
}

/// Runs one experiment and writes its files when `cfg.out_dir` is set.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let resolved = cfg.resolve()?;
    let mut result = runners::run(&resolved)?;
    if let Some(root) = &cfg.out_dir {
        result.output_dir = Some(result.write(root)?);
    }
    Ok(result)
}
