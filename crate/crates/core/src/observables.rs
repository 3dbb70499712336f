//! Populations, fidelities, Liouvillian spectra and steady states.
//!
//! Superoperators use column-stacking: `vec(ρ)[i + j·d] = ρ[i][j]`, so that
//! `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{HamiltonianTerm, LindbladChannel, Trajectory};
use crate::error::{Result, SimError};
use crate::hilbert::{check_dim, ComplexOperator, DensityMatrix, PureState};

/// `⟨ψ|ρ|ψ⟩` clamped to [0, 1].
pub fn population(rho: &DensityMatrix, psi: &PureState) -> Result<f64> {
    Ok(rho.expectation(psi)?.clamp(0.0, 1.0))
}

/// `√⟨ψ|ρ|ψ⟩`.
pub fn fidelity_sqrt(rho: &DensityMatrix, psi: &PureState) -> Result<f64> {
    Ok(population(rho, psi)?.sqrt())
}

/// `|⟨ψ_s|ψ_t⟩|`, clamped to [0, 1].
pub fn overlap_amplitude(psi_t: &PureState, psi_s: &PureState) -> Result<f64> {
    Ok(psi_s.inner(psi_t)?.norm().min(1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ObservableKind {
    Population(PureState),
    FidelitySqrt(PureState),
    /// `|⟨target|ψ⟩|`; on a density matrix this coincides with `FidelitySqrt`.
    OverlapAmplitude(PureState),
    /// `Σ_i w_i ρ_ii`.
    CustomDiagonal(Vec<f64>),
}

/// A named scalar recorded along a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSpec {
    pub name: String,
    pub kind: ObservableKind,
    support: Vec<(usize, Complex64)>,
}

impl ObservableSpec {
    pub fn new(name: impl Into<String>, kind: ObservableKind) -> Self {
        let support = match &kind {
            ObservableKind::Population(t) | ObservableKind::FidelitySqrt(t) | ObservableKind::OverlapAmplitude(t) => {
                t.amplitudes().iter().enumerate().filter(|(_, z)| z.norm() > 0.0).map(|(i, z)| (i, *z)).collect()
            }
            ObservableKind::CustomDiagonal(w) => {
                w.iter().enumerate().filter(|(_, w)| **w != 0.0).map(|(i, w)| (i, Complex64::from(*w))).collect()
            }
        };
        Self { name: name.into(), kind, support }
    }

    pub fn population(name: impl Into<String>, target: PureState) -> Self {
        Self::new(name, ObservableKind::Population(target))
    }

    pub fn fidelity(name: impl Into<String>, target: PureState) -> Self {
        Self::new(name, ObservableKind::FidelitySqrt(target))
    }

    pub fn overlap(name: impl Into<String>, target: PureState) -> Self {
        Self::new(name, ObservableKind::OverlapAmplitude(target))
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            ObservableKind::Population(t) | ObservableKind::FidelitySqrt(t) | ObservableKind::OverlapAmplitude(t) => {
                t.dim()
            }
            ObservableKind::CustomDiagonal(w) => w.len(),
        }
    }

    /// Evaluates on a row-major `d×d` density matrix.
    pub(crate) fn eval_density(&self, d: usize, rho: &[Complex64]) -> f64 {
        match &self.kind {
            ObservableKind::CustomDiagonal(_) => self.support.iter().map(|(i, w)| w.re * rho[i * d + i].re).sum(),
            _ => {
                let mut acc = Complex64::new(0.0, 0.0);
                for &(a, ca) in &self.support {
                    for &(b, cb) in &self.support {
                        acc += ca.conj() * rho[a * d + b] * cb;
                    }
                }
                let p = acc.re.clamp(0.0, 1.0);
                match self.kind {
                    ObservableKind::Population(_) => p,
                    _ => p.sqrt(),
                }
            }
        }
    }

    pub(crate) fn eval_vector(&self, psi: &[Complex64]) -> f64 {
        match &self.kind {
            ObservableKind::CustomDiagonal(_) => self.support.iter().map(|(i, w)| w.re * psi[*i].norm_sqr()).sum(),
            _ => {
                let amp: Complex64 = self.support.iter().map(|(i, c)| c.conj() * psi[*i]).sum();
                let a = amp.norm().min(1.0);
                match self.kind {
                    ObservableKind::Population(_) => a * a,
                    _ => a,
                }
            }
        }
    }

    pub fn evaluate(&self, rho: &DensityMatrix) -> Result<f64> {
        check_dim(self.dim(), rho.dim())?;
        let d = rho.dim();
        let flat: Vec<Complex64> = (0..d * d).map(|k| rho.get(k / d, k % d)).collect();
        Ok(self.eval_density(d, &flat))
    }

    pub fn evaluate_pure(&self, psi: &PureState) -> Result<f64> {
        check_dim(self.dim(), psi.dim())?;
        Ok(self.eval_vector(psi.amplitudes().as_slice()))
    }
}

/// Column-stacking superoperator `M` with `vec(dρ/dt) = M vec(ρ)`.
pub fn liouvillian_matrix(terms: &[HamiltonianTerm], channels: &[LindbladChannel]) -> Result<DMatrix<Complex64>> {
    let dim = terms
        .first()
        .map(|t| t.dim())
        .or_else(|| channels.first().map(|c| c.dim()))
        .ok_or_else(|| SimError::InvalidParameter("empty generator".into()))?;
    let mut h = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for term in terms {
        match term {
            HamiltonianTerm::Static(op) => {
                check_dim(dim, op.dim())?;
                h += op.matrix();
            }
            HamiltonianTerm::Rotating { .. } => return Err(SimError::RotatingTerm),
        }
    }
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let i = Complex64::new(0.0, 1.0);
    // -i(I⊗H - Hᵀ⊗I)
    let mut m = (id.kronecker(&h) - h.transpose().kronecker(&id)) * (-i);
    for ch in channels {
        check_dim(dim, ch.dim())?;
        let l = ch.operator().matrix();
        let ldl = l.adjoint() * l;
        m += l.conjugate().kronecker(l);
        m -= (id.kronecker(&ldl) + ldl.transpose().kronecker(&id)) * Complex64::from(0.5);
    }
    Ok(m)
}

pub fn vectorize(rho: &ComplexOperator) -> DVector<Complex64> {
    let d = rho.dim();
    DVector::from_iterator(d * d, rho.matrix().iter().cloned())
}

pub fn unvectorize(v: &DVector<Complex64>) -> Result<ComplexOperator> {
    let d = (v.len() as f64).sqrt().round() as usize;
    check_dim(d * d, v.len())?;
    ComplexOperator::from_matrix(DMatrix::from_column_slice(d, d, v.as_slice()))
}

/// Null-space analysis of a Liouvillian.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SteadyStateReport {
    pub null_dimension: usize,
    #[serde(skip)]
    pub basis: Vec<DensityMatrix>,
    pub residuals: Vec<f64>,
    /// Ascending singular values (at most the smallest 8).
    pub smallest_singular_values: Vec<f64>,
    /// Set when the gap between retained and discarded singular values is
    /// below `10 × tol`.
    pub ill_conditioned: bool,
}

/// Null space of `m` from its singular value decomposition.
pub fn steady_states(m: &DMatrix<Complex64>, tol: f64) -> Result<SteadyStateReport> {
    if m.nrows() != m.ncols() {
        return Err(SimError::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
    }
    let n = m.nrows();
    let d = (n as f64).sqrt().round() as usize;
    check_dim(d * d, n)?;
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().ok_or_else(|| SimError::InvalidParameter("SVD did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|a, b| svd.singular_values[*a].total_cmp(&svd.singular_values[*b]));
    let sv: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let null_dimension = sv.iter().take_while(|s| **s < tol).count();
    let largest_kept = if null_dimension > 0 { sv[null_dimension - 1] } else { 0.0 };
    let smallest_dropped = sv.get(null_dimension).copied().unwrap_or(f64::INFINITY);
    let ill_conditioned = smallest_dropped - largest_kept < 10.0 * tol;

    let mut basis = Vec::with_capacity(null_dimension);
    let mut residuals = Vec::with_capacity(null_dimension);
    // Hermitian combinations of the null vectors, trace-normalized where possible.
    let null_vecs: Vec<DVector<Complex64>> = order[..null_dimension].iter().map(|&k| v_t.row(k).adjoint()).collect();
    let herm_basis = hermitian_null_basis(&null_vecs, d);
    for mut rho in herm_basis {
        let tr = rho.trace();
        if tr.norm() > 1e-8 {
            rho /= tr;
        }
        let vecd = DVector::from_iterator(n, rho.iter().cloned());
        residuals.push((m * &vecd).norm());
        basis.push(DensityMatrix::from_operator_unchecked(ComplexOperator::from_matrix(rho)?));
    }
    Ok(SteadyStateReport {
        null_dimension,
        basis,
        residuals,
        smallest_singular_values: sv.iter().take(8).cloned().collect(),
        ill_conditioned,
    })
}

/// Re-expresses a complex null-space basis as Hermitian matrices spanning the
/// same space. The Liouvillian commutes with `ρ ↦ ρ†`, so the Hermitian and
/// anti-Hermitian parts of each null vector stay in the null space.
fn hermitian_null_basis(vecs: &[DVector<Complex64>], d: usize) -> Vec<DMatrix<Complex64>> {
    let half = Complex64::from(0.5);
    let i = Complex64::new(0.0, 1.0);
    let mut candidates = Vec::with_capacity(2 * vecs.len());
    for v in vecs {
        let m = DMatrix::from_column_slice(d, d, v.as_slice());
        candidates.push((&m + m.adjoint()) * half);
        candidates.push((&m - m.adjoint()) * (half * -i));
    }
    // Gram-Schmidt in the Hilbert-Schmidt inner product; keep as many as the null dimension.
    let mut kept: Vec<DMatrix<Complex64>> = Vec::with_capacity(vecs.len());
    // Prefer candidates with large trace first so a physical state leads the basis.
    candidates.sort_by(|a, b| b.trace().norm().total_cmp(&a.trace().norm()));
    for c in candidates {
        if kept.len() == vecs.len() {
            break;
        }
        let mut r = c.clone();
        for k in &kept {
            let proj = k.iter().zip(r.iter()).map(|(a, b)| a.conj() * b).sum::<Complex64>();
            r -= k * proj;
        }
        let norm = r.norm();
        if norm > 1e-6 {
            r /= Complex64::from(norm);
            // Hermitian up to rounding: proj coefficients are real for Hermitian inputs.
            kept.push(r);
        }
    }
    kept
}

/// Max over the shared time grid of `|a − b|` for the named observable.
pub fn trajectory_deviation(a: &Trajectory, b: &Trajectory, observable: &str) -> Result<f64> {
    if a.times.len() != b.times.len() {
        return Err(SimError::GridMismatch(format!("{} vs {} samples", a.times.len(), b.times.len())));
    }
    for (ta, tb) in a.times.iter().zip(&b.times) {
        if (ta - tb).abs() > 1e-9 * ta.abs().max(1.0) {
            return Err(SimError::GridMismatch(format!("t = {ta} vs {tb}")));
        }
    }
    let xa = a.observable(observable)?;
    let xb = b.observable(observable)?;
    Ok(xa.iter().zip(xb).fold(0.0, |m, (x, y)| m.max((x - y).abs())))
}
