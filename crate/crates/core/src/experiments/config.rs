use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::registry::{lookup, ExperimentInfo};
use crate::dynamics::{IntegratorConfig, Method};
use crate::error::{Result, SimError};

/// Integrator settings a run may override.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
}

/// What to run and where to put the output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub integrator: IntegratorOverrides,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    /// Grid intervals per recorded sample; replaces the experiment's `records` setting.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record_stride: Option<usize>,
    /// Cheaper settings for the QEC experiments (`Δ = U_rr = 200g`).
    #[serde(default)]
    pub reduced: bool,
}

impl ExperimentConfig {
    pub fn new(experiment: impl Into<String>) -> Self {
        Self {
            experiment: experiment.into(),
            params: BTreeMap::new(),
            integrator: IntegratorOverrides::default(),
            out_dir: None,
            record_stride: None,
            reduced: false,
        }
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn with_out_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.out_dir = Some(dir.into());
        self
    }

    /// Parses `key=value` and stores it as a parameter override.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| SimError::InvalidConfig(format!("expected key=value, got `{assignment}`")))?;
        let value: f64 = v.trim().parse().map_err(|_| SimError::InvalidConfig(format!("`{v}` is not a number")))?;
        self.params.insert(k.trim().to_string(), value);
        Ok(())
    }

    /// Registry defaults, then variant presets, then the overrides.
    pub fn resolve(&self) -> Result<Resolved> {
        let (info, variant) =
            lookup(&self.experiment).ok_or_else(|| SimError::UnknownExperiment(self.experiment.clone()))?;
        let mut values: BTreeMap<String, f64> = info.defaults.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        if let Some(v) = &variant {
            for (k, x) in &v.overrides {
                values.insert(k.to_string(), *x);
            }
        }
        if self.reduced {
            if info.default_of("u_rr").is_none() || info.default_of("g").is_none() {
                return Err(SimError::InvalidConfig(format!(
                    "--reduced applies only to the error-correction experiments, not {}",
                    self.experiment
                )));
            }
            values.insert("delta".into(), 200.0);
            values.insert("u_rr".into(), 200.0);
        }
        for (k, v) in &self.params {
            if !values.contains_key(k) {
                return Err(SimError::InvalidConfig(format!(
                    "unknown key `{k}` for {}; known: {}",
                    self.experiment,
                    values.keys().cloned().collect::<Vec<_>>().join(", ")
                )));
            }
            if !v.is_finite() {
                return Err(SimError::InvalidConfig(format!("{k} = {v} is not finite")));
            }
            values.insert(k.clone(), *v);
        }
        let o = &self.integrator;
        for (name, v) in [("max_step", o.max_step), ("rel_tol", o.rel_tol), ("abs_tol", o.abs_tol)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(SimError::InvalidConfig(format!("{name} = {v} must be > 0")));
                }
            }
        }
        if self.record_stride == Some(0) {
            return Err(SimError::InvalidConfig("record_stride must be ≥ 1".into()));
        }
        Ok(Resolved {
            name: self.experiment.clone(),
            info,
            values,
            overridden: self.params.keys().cloned().collect(),
            integrator: self.integrator.clone(),
            record_stride: self.record_stride,
            reduced: self.reduced,
        })
    }
}

/// A config merged with its registry entry.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub name: String,
    pub info: ExperimentInfo,
    pub values: BTreeMap<String, f64>,
    pub overridden: Vec<String>,
    pub integrator: IntegratorOverrides,
    pub record_stride: Option<usize>,
    pub reduced: bool,
}

impl Resolved {
    pub fn get(&self, key: &str) -> f64 {
        self.values.get(key).copied().unwrap_or(f64::NAN)
    }

    pub fn flag(&self, key: &str) -> bool {
        self.get(key) != 0.0
    }

    pub fn is_overridden(&self, key: &str) -> bool {
        self.overridden.iter().any(|k| k == key)
    }

    /// A non-negative integer parameter.
    pub fn count(&self, key: &str) -> Result<usize> {
        let v = self.get(key);
        if v < 1.0 || v.fract() != 0.0 || v > 1e9 {
            return Err(SimError::InvalidConfig(format!("{key} = {v} must be a positive integer")));
        }
        Ok(v as usize)
    }

    /// Integrator settings for a model whose fastest drive has angular
    /// frequency `omega`, recording `records` equal intervals of `[0, t_final]`.
    ///
    /// `default_method` applies unless the config overrides it; fixed steps
    /// use `fixed_refine` grid intervals per resolution limit.
    pub fn integrator_for(
        &self,
        omega: f64,
        t_final: f64,
        records: usize,
        default_method: Method,
        fixed_refine: f64,
    ) -> IntegratorConfig {
        let method = self.integrator.method.unwrap_or(default_method);
        let mut cfg = IntegratorConfig { method, ..IntegratorConfig::default() };
        if let Some(r) = self.integrator.rel_tol {
            cfg.rel_tol = r;
        }
        if let Some(a) = self.integrator.abs_tol {
            cfg.abs_tol = a;
        }
        let limit = IntegratorConfig::resolution_limit(omega);
        let refine = if method == Method::Fixed { fixed_refine } else { 1.0 };
        let bound = self.integrator.max_step.unwrap_or(cfg.max_step).min(limit / refine);
        match self.record_stride {
            Some(stride) => {
                cfg.max_step = bound;
                cfg.record_stride = stride;
                cfg
            }
            None => cfg.aligned(t_final, records, bound),
        }
    }
}
