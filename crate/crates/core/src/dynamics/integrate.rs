use std::f64::consts::PI;

use log::debug;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Generator, HamiltonianTerm, LindbladChannel};
use crate::error::{Result, SimError};
use crate::hilbert::{check_dim, ComplexOperator, DensityMatrix, PureState};
use crate::observables::ObservableSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Fourth-order Runge–Kutta, one step per grid interval, with the static
    /// diagonal of the generator integrated exactly (integrating factor).
    Fixed,
    /// Dormand–Prince 5(4) with error control inside each grid interval.
    Adaptive,
}

/// Integration settings.
///
/// The interval `[0, t_final]` is split into `ceil(t_final / max_step)` equal
/// grid intervals. The fixed method takes one step per interval; the adaptive
/// method takes as many sub-steps as its tolerances require. Every
/// `record_stride`-th grid point (and the final one) is recorded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: Method,
    pub max_step: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub hermitize_every_step: bool,
    pub record_stride: usize,
    #[serde(default)]
    pub keep_snapshots: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::Adaptive,
            max_step: 0.1,
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            hermitize_every_step: true,
            record_stride: 1,
            keep_snapshots: false,
        }
    }
}

impl IntegratorConfig {
    pub fn fixed(max_step: f64) -> Self {
        Self { method: Method::Fixed, max_step, ..Self::default() }
    }

    pub fn adaptive(max_step: f64) -> Self {
        Self { method: Method::Adaptive, max_step, ..Self::default() }
    }

    /// Chooses `max_step ≤ step_bound` and `record_stride` so that exactly
    /// `records` equal intervals of `[0, t_final]` are recorded. Two models
    /// aligned with the same `records` share a time grid.
    pub fn aligned(mut self, t_final: f64, records: usize, step_bound: f64) -> Self {
        let records = records.max(1);
        let interval = t_final / records as f64;
        let stride = (interval / step_bound * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        self.max_step = interval / stride as f64;
        self.record_stride = stride;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.max_step > 0.0 && self.max_step.is_finite()) {
            return Err(SimError::InvalidConfig(format!("max_step {} must be > 0", self.max_step)));
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(SimError::InvalidConfig("tolerances must be > 0".into()));
        }
        if self.record_stride == 0 {
            return Err(SimError::InvalidConfig("record_stride must be ≥ 1".into()));
        }
        Ok(())
    }

    /// Largest admissible step for a generator whose fastest rotating term has
    /// angular frequency `omega`.
    pub fn resolution_limit(omega: f64) -> f64 {
        if omega > 0.0 {
            2.0 * PI / (10.0 * omega)
        } else {
            f64::INFINITY
        }
    }
}

/// Early termination once an observable has settled: stop at the first
/// recorded `t ≥ window` where every value over `[t − window, t]` lies within
/// `rate · window` of the current one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StopRule {
    pub observable: String,
    pub window: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Snapshot {
    Density(DensityMatrix),
    Pure(PureState),
}

impl Snapshot {
    pub fn density(&self) -> DensityMatrix {
        match self {
            Self::Density(r) => r.clone(),
            Self::Pure(p) => p.projector(),
        }
    }
}

/// Sampled observables along an integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub observables: Vec<(String, Vec<f64>)>,
    pub snapshots: Vec<Snapshot>,
    pub final_state: Option<Snapshot>,
}

impl Trajectory {
    pub fn from_series(times: Vec<f64>, observables: Vec<(String, Vec<f64>)>) -> Result<Self> {
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SimError::GridMismatch("times must be strictly increasing".into()));
        }
        for (name, v) in &observables {
            if v.len() != times.len() {
                return Err(SimError::GridMismatch(format!(
                    "observable `{name}` has {} samples for {} times",
                    v.len(),
                    times.len()
                )));
            }
        }
        Ok(Self { times, observables, snapshots: Vec::new(), final_state: None })
    }

    pub fn observable(&self, name: &str) -> Result<&[f64]> {
        self.observables
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
            .ok_or_else(|| SimError::UnknownObservable(name.to_owned()))
    }

    pub fn final_value(&self, name: &str) -> Result<f64> {
        self.observable(name)?.last().copied().ok_or_else(|| SimError::UnknownObservable(name.to_owned()))
    }

    /// Linear interpolation of an observable at time `t`.
    pub fn value_at(&self, name: &str, t: f64) -> Result<f64> {
        let v = self.observable(name)?;
        let k = self.times.partition_point(|x| *x < t);
        if k == 0 {
            return Ok(v[0]);
        }
        if k >= self.times.len() {
            return Ok(*v.last().unwrap_or(&f64::NAN));
        }
        let (t0, t1) = (self.times[k - 1], self.times[k]);
        let w = (t - t0) / (t1 - t0);
        Ok(v[k - 1] * (1.0 - w) + v[k] * w)
    }

    pub fn t_final(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }
}

struct Recorder<'a> {
    traj: Trajectory,
    stop: Option<(&'a StopRule, usize)>,
}

impl<'a> Recorder<'a> {
    fn new(observables: &'a [ObservableSpec], stop: Option<&'a StopRule>) -> Result<Self> {
        let stop = match stop {
            Some(rule) => {
                let idx = observables
                    .iter()
                    .position(|o| o.name == rule.observable)
                    .ok_or_else(|| SimError::UnknownObservable(rule.observable.clone()))?;
                Some((rule, idx))
            }
            None => None,
        };
        Ok(Self {
            traj: Trajectory {
                times: Vec::new(),
                observables: observables.iter().map(|o| (o.name.clone(), Vec::new())).collect(),
                snapshots: Vec::new(),
                final_state: None,
            },
            stop,
        })
    }

    fn push(&mut self, t: f64, values: impl Iterator<Item = f64>) -> bool {
        self.traj.times.push(t);
        for ((_, series), v) in self.traj.observables.iter_mut().zip(values) {
            series.push(v);
        }
        let Some((rule, idx)) = self.stop else { return false };
        let times = &self.traj.times;
        if t - times[0] < rule.window {
            return false;
        }
        let series = &self.traj.observables[idx].1;
        let now = *series.last().unwrap_or(&0.0);
        let start = times.partition_point(|x| *x < t - rule.window);
        series[start..].iter().all(|x| (x - now).abs() <= rule.rate * rule.window)
    }
}

fn check_resolution(gen: &Generator, cfg: &IntegratorConfig) -> Result<()> {
    cfg.validate()?;
    let limit = IntegratorConfig::resolution_limit(gen.max_abs_omega());
    if cfg.max_step > limit * (1.0 + 1e-9) {
        return Err(SimError::StepTooLarge { max_step: cfg.max_step, limit });
    }
    Ok(())
}

/// Integrates the Lindblad master equation from `rho0` to `t_final`.
pub fn evolve_master(
    terms: &[HamiltonianTerm],
    channels: &[LindbladChannel],
    rho0: &DensityMatrix,
    t_final: f64,
    cfg: &IntegratorConfig,
    observables: &[ObservableSpec],
) -> Result<Trajectory> {
    MasterEquation::new(terms, channels)?.evolve(rho0, t_final, cfg, observables, None)
}

/// Integrates the Schrödinger equation from `psi0` to `t_final`.
pub fn evolve_unitary(
    terms: &[HamiltonianTerm],
    psi0: &PureState,
    t_final: f64,
    cfg: &IntegratorConfig,
    observables: &[ObservableSpec],
) -> Result<Trajectory> {
    let gen = Generator::new(terms, &[])?;
    check_dim(gen.dim(), psi0.dim())?;
    check_resolution(&gen, cfg)?;
    for o in observables {
        check_dim(gen.dim(), o.dim())?;
    }
    let mut rec = Recorder::new(observables, None)?;
    let y0: Vec<Complex64> = psi0.amplitudes().iter().cloned().collect();
    let lambda: Vec<Complex64> = gen.static_diagonal().iter().map(|k| Complex64::new(k.im, -k.re)).collect();
    let y = run(
        y0,
        t_final,
        cfg,
        &lambda,
        |t, y, out| gen.apply_vector(t, y, out),
        |_| {},
        |t, y| {
            let norm = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-5 {
                return Err(SimError::NormDrift { t, drift: norm - 1.0 });
            }
            Ok(())
        },
        |t, y, rec_snap: bool| {
            let stop = rec.push(t, observables.iter().map(|o| o.eval_vector(y)));
            if rec_snap {
                rec.traj.snapshots.push(Snapshot::Pure(PureState::from_raw(y.to_vec().into())));
            }
            stop
        },
    )?;
    let mut traj = rec.traj;
    traj.final_state = Some(Snapshot::Pure(PureState::from_raw(y.into())));
    Ok(traj)
}

/// A compiled master equation that can be evolved repeatedly.
#[derive(Debug, Clone)]
pub struct MasterEquation {
    gen: Generator,
}

impl MasterEquation {
    pub fn new(terms: &[HamiltonianTerm], channels: &[LindbladChannel]) -> Result<Self> {
        Ok(Self { gen: Generator::new(terms, channels)? })
    }

    pub fn generator(&self) -> &Generator {
        &self.gen
    }

    pub fn evolve(
        &self,
        rho0: &DensityMatrix,
        t_final: f64,
        cfg: &IntegratorConfig,
        observables: &[ObservableSpec],
        stop: Option<&StopRule>,
    ) -> Result<Trajectory> {
        let gen = &self.gen;
        let d = gen.dim();
        check_dim(d, rho0.dim())?;
        check_resolution(gen, cfg)?;
        for o in observables {
            check_dim(d, o.dim())?;
        }
        let mut rec = Recorder::new(observables, stop)?;
        let y0: Vec<Complex64> = (0..d * d).map(|k| rho0.get(k / d, k % d)).collect();
        let to_snapshot = |y: &[Complex64]| -> Result<Snapshot> {
            Ok(Snapshot::Density(DensityMatrix::from_operator_unchecked(ComplexOperator::from_row_major(d, y)?)))
        };
        let hermitize = cfg.hermitize_every_step;
        let mut snap_err = None;
        let diag = gen.static_diagonal();
        let i = Complex64::new(0.0, 1.0);
        let lambda: Vec<Complex64> = (0..d * d).map(|k| -i * (diag[k / d] - diag[k % d].conj())).collect();
        let y = run(
            y0,
            t_final,
            cfg,
            &lambda,
            |t, y, out| gen.apply_hermitian(t, y, out),
            |y| {
                if hermitize {
                    for a in 0..d {
                        y[a * d + a].im = 0.0;
                        for b in a + 1..d {
                            let m = (y[a * d + b] + y[b * d + a].conj()) * 0.5;
                            y[a * d + b] = m;
                            y[b * d + a] = m.conj();
                        }
                    }
                }
            },
            |t, y| {
                let tr: Complex64 = (0..d).map(|a| y[a * d + a]).sum();
                let drift = (tr - 1.0).norm();
                if drift > 1e-5 || !drift.is_finite() {
                    return Err(SimError::TraceDrift { t, drift });
                }
                Ok(())
            },
            |t, y, keep: bool| {
                let stop = rec.push(t, observables.iter().map(|o| o.eval_density(d, y)));
                if keep {
                    match to_snapshot(y) {
                        Ok(s) => rec.traj.snapshots.push(s),
                        Err(e) => snap_err = Some(e),
                    }
                }
                stop
            },
        )?;
        if let Some(e) = snap_err {
            return Err(e);
        }
        let mut traj = rec.traj;
        traj.final_state = Some(to_snapshot(&y)?);
        Ok(traj)
    }
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Drives either method across the recording grid.
///
/// `lambda` holds per-component rates of the stiff diagonal part of the
/// right-hand side (`rhs(y)_i = λ_i y_i + …`). The fixed method integrates
/// that part exactly (Lawson's integrating-factor RK4); an all-zero `lambda`
/// reduces it to the classical scheme. `post_step` runs after every accepted
/// step, `check` after every grid interval, and `record(t, y, keep_snapshot)`
/// at every recorded point; it returns `true` to stop early.
#[allow(clippy::too_many_arguments)]
fn run<F, P, C, R>(
    mut y: Vec<Complex64>,
    t_final: f64,
    cfg: &IntegratorConfig,
    lambda: &[Complex64],
    rhs: F,
    mut post_step: P,
    mut check: C,
    mut record: R,
) -> Result<Vec<Complex64>>
where
    F: Fn(f64, &[Complex64], &mut [Complex64]),
    P: FnMut(&mut [Complex64]),
    C: FnMut(f64, &[Complex64]) -> Result<()>,
    R: FnMut(f64, &[Complex64], bool) -> bool,
{
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(SimError::InvalidConfig(format!("t_final {t_final} must be ≥ 0")));
    }
    let n = y.len();
    let intervals = ((t_final / cfg.max_step) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let h_grid = if t_final > 0.0 { t_final / intervals as f64 } else { 0.0 };
    let keep = cfg.keep_snapshots;
    if record(0.0, &y, keep) {
        return Ok(y);
    }
    if t_final == 0.0 {
        return Ok(y);
    }
    let mut ws = Workspace::new(n);
    let factors = (cfg.method == Method::Fixed && lambda.iter().any(|l| l.norm() > 0.0)).then(|| {
        let half: Vec<Complex64> = lambda.iter().map(|l| (l * (0.5 * h_grid)).exp()).collect();
        let full: Vec<Complex64> = half.iter().map(|e| e * e).collect();
        (half, full)
    });
    let mut h_try = h_grid;
    let mut fsal_valid = false;
    let mut steps = 0usize;
    for k in 0..intervals {
        let t0 = k as f64 * h_grid;
        let t1 = if k + 1 == intervals { t_final } else { (k + 1) as f64 * h_grid };
        match cfg.method {
            Method::Fixed => {
                match &factors {
                    Some((half, full)) => lawson_step(&rhs, lambda, half, full, t0, h_grid, &mut y, &mut ws),
                    None => rk4_step(&rhs, t0, t1 - t0, &mut y, &mut ws),
                }
                post_step(&mut y);
                steps += 1;
            }
            Method::Adaptive => {
                let mut t = t0;
                while t < t1 {
                    let remaining = t1 - t;
                    let last = h_try >= remaining * (1.0 - 1e-10);
                    let h = if last { remaining } else { h_try };
                    if !fsal_valid {
                        rhs(t, &y, &mut ws.k[0]);
                    }
                    let err = dp45_step(&rhs, t, h, &y, &mut ws, cfg);
                    if err <= 1.0 {
                        std::mem::swap(&mut y, &mut ws.y_new);
                        post_step(&mut y);
                        ws.k.swap(0, 6);
                        // Hermitization only moves y at rounding level; keep the FSAL slope.
                        fsal_valid = true;
                        t = if last { t1 } else { t + h };
                        steps += 1;
                        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                        // Keep the proposal from the full step, not the shortened last one.
                        if !last || factor < 1.0 {
                            h_try = (h * factor).min(h_grid);
                        }
                    } else {
                        h_try = h * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
                        fsal_valid = true;
                        if h_try < 1e-13 * t1.abs().max(1.0) {
                            return Err(SimError::StepUnderflow { t, h: h_try });
                        }
                    }
                }
            }
        }
        check(t1, &y)?;
        let is_last = k + 1 == intervals;
        if ((k + 1) % cfg.record_stride == 0 || is_last) && record(t1, &y, keep) {
            debug!("stop rule met at t = {t1}");
            break;
        }
    }
    debug!("integration finished after {steps} steps");
    Ok(y)
}

struct Workspace {
    k: Vec<Vec<Complex64>>,
    tmp: Vec<Complex64>,
    y_new: Vec<Complex64>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); n];
        Self { k: vec![z.clone(); 7], tmp: z.clone(), y_new: z }
    }
}

fn combine(out: &mut [Complex64], y: &[Complex64], h: f64, parts: &[(f64, &[Complex64])]) {
    out.copy_from_slice(y);
    for (c, k) in parts {
        if *c != 0.0 {
            let s = h * c;
            for (o, ki) in out.iter_mut().zip(k.iter()) {
                *o += ki * s;
            }
        }
    }
}

fn rk4_step<F>(rhs: &F, t: f64, h: f64, y: &mut [Complex64], ws: &mut Workspace)
where
    F: Fn(f64, &[Complex64], &mut [Complex64]),
{
    let (k, tmp) = (&mut ws.k, &mut ws.tmp);
    rhs(t, y, &mut k[0]);
    combine(tmp, y, h, &[(0.5, &k[0])]);
    rhs(t + 0.5 * h, tmp, &mut k[1]);
    combine(tmp, y, h, &[(0.5, &k[1])]);
    rhs(t + 0.5 * h, tmp, &mut k[2]);
    combine(tmp, y, h, &[(1.0, &k[2])]);
    rhs(t + h, tmp, &mut k[3]);
    let s = h / 6.0;
    for i in 0..y.len() {
        y[i] += (k[0][i] + (k[1][i] + k[2][i]) * 2.0 + k[3][i]) * s;
    }
}

/// Integrating-factor RK4 for `y' = λ⊙y + N(t, y)` with `N = rhs − λ⊙y`;
/// `half` and `full` are `exp(λh/2)` and `exp(λh)`.
#[allow(clippy::too_many_arguments)]
fn lawson_step<F>(
    rhs: &F,
    lambda: &[Complex64],
    half: &[Complex64],
    full: &[Complex64],
    t: f64,
    h: f64,
    y: &mut [Complex64],
    ws: &mut Workspace,
) where
    F: Fn(f64, &[Complex64], &mut [Complex64]),
{
    let n = y.len();
    let (k, tmp) = (&mut ws.k, &mut ws.tmp);
    let nonlinear = |t: f64, u: &[Complex64], out: &mut [Complex64]| {
        rhs(t, u, out);
        for i in 0..n {
            out[i] -= lambda[i] * u[i];
        }
    };
    nonlinear(t, y, &mut k[0]);
    for i in 0..n {
        tmp[i] = half[i] * (y[i] + k[0][i] * (0.5 * h));
    }
    nonlinear(t + 0.5 * h, tmp, &mut k[1]);
    for i in 0..n {
        tmp[i] = half[i] * y[i] + k[1][i] * (0.5 * h);
    }
    nonlinear(t + 0.5 * h, tmp, &mut k[2]);
    for i in 0..n {
        tmp[i] = full[i] * y[i] + half[i] * k[2][i] * h;
    }
    nonlinear(t + h, tmp, &mut k[3]);
    let s = h / 6.0;
    for i in 0..n {
        y[i] = full[i] * (y[i] + k[0][i] * s) + half[i] * (k[1][i] + k[2][i]) * (2.0 * s) + k[3][i] * s;
    }
}

/// One Dormand–Prince attempt; `ws.k[0]` must hold `rhs(t, y)`. Returns the
/// scaled error norm and leaves the candidate in `ws.y_new` and its slope in
/// `ws.k[6]`.
fn dp45_step<F>(rhs: &F, t: f64, h: f64, y: &[Complex64], ws: &mut Workspace, cfg: &IntegratorConfig) -> f64
where
    F: Fn(f64, &[Complex64], &mut [Complex64]),
{
    let Workspace { k, tmp, y_new } = ws;
    let (k0, rest) = k.split_at_mut(1);
    let (k1, rest) = rest.split_at_mut(1);
    let (k2, rest) = rest.split_at_mut(1);
    let (k3, rest) = rest.split_at_mut(1);
    let (k4, rest) = rest.split_at_mut(1);
    let (k5, k6) = rest.split_at_mut(1);
    let (k0, k1, k2, k3, k4, k5, k6) =
        (&mut k0[0], &mut k1[0], &mut k2[0], &mut k3[0], &mut k4[0], &mut k5[0], &mut k6[0]);
    combine(tmp, y, h, &[(A21, k0)]);
    rhs(t + h / 5.0, tmp, k1);
    combine(tmp, y, h, &[(A31, k0), (A32, k1)]);
    rhs(t + 0.3 * h, tmp, k2);
    combine(tmp, y, h, &[(A41, k0), (A42, k1), (A43, k2)]);
    rhs(t + 0.8 * h, tmp, k3);
    combine(tmp, y, h, &[(A51, k0), (A52, k1), (A53, k2), (A54, k3)]);
    rhs(t + 8.0 / 9.0 * h, tmp, k4);
    combine(tmp, y, h, &[(A61, k0), (A62, k1), (A63, k2), (A64, k3), (A65, k4)]);
    rhs(t + h, tmp, k5);
    combine(y_new, y, h, &[(B1, k0), (B3, k2), (B4, k3), (B5, k4), (B6, k5)]);
    rhs(t + h, y_new, k6);
    let mut err = 0.0f64;
    for i in 0..y.len() {
        let e = (k0[i] * E1 + k2[i] * E3 + k3[i] * E4 + k4[i] * E5 + k5[i] * E6 + k6[i] * E7) * h;
        let scale = cfg.abs_tol + cfg.rel_tol * y[i].norm().max(y_new[i].norm());
        err = err.max(e.norm() / scale);
    }
    if err.is_finite() {
        err
    } else {
        f64::INFINITY
    }
}
