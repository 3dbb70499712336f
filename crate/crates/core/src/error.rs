use thiserror::Error;

/// Errors raised by basis construction, integration and experiment plumbing.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("unknown level `{label}` for site {site}")]
    UnknownLevel { site: usize, label: String },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("site index {site} out of range for {sites} sites")]
    InvalidSite { site: usize, sites: usize },
    #[error("pair projector requires two distinct sites, got {0} twice")]
    SameSite(usize),
    #[error("level scheme is invalid: {0}")]
    InvalidLevels(String),
    #[error("dimension {dim} exceeds the configured cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),
    #[error("max_step {max_step} does not resolve the fastest rotating term (limit {limit})")]
    StepTooLarge { max_step: f64, limit: f64 },
    #[error("adaptive step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("trace drift {drift:e} at t = {t} exceeds 1e-5")]
    TraceDrift { t: f64, drift: f64 },
    #[error("norm drift {drift:e} at t = {t}")]
    NormDrift { t: f64, drift: f64 },
    #[error("generator must be diagonal (off-diagonal magnitude {0:e})")]
    NonDiagonalGenerator(f64),
    #[error("channel {0} couples levels with different frame gaps")]
    MixedGapChannel(usize),
    #[error("the Liouvillian needs a time-independent generator; found a rotating term")]
    RotatingTerm,
    #[error("time grids differ ({0})")]
    GridMismatch(String),
    #[error("unknown observable `{0}`")]
    UnknownObservable(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),
    #[error("missing experiment output: {0}")]
    MissingOutput(String),
    #[error("malformed output file {path}: {reason}")]
    MalformedOutput { path: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, SimError>;
