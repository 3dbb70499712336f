//! Tensor-product Hilbert spaces of heterogeneous multi-level sites.
//!
//! Basis ordering is lexicographic with the leftmost site most significant,
//! so for two sites with levels `{0, 1, r}` the basis runs
//! `|00⟩, |01⟩, |0r⟩, |10⟩, … , |rr⟩`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Default upper bound on the dimension of any constructed space or operator.
pub const DEFAULT_DIM_CAP: usize = 4096;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Named levels of a single site, e.g. `["0", "1", "r"]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelScheme {
    labels: Vec<String>,
}

impl LevelScheme {
    pub fn new<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        if labels.is_empty() {
            return Err(SimError::InvalidLevels("a site needs at least one level".into()));
        }
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_owned()).collect();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(SimError::InvalidLevels(format!("duplicate level `{l}`")));
            }
        }
        Ok(Self { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Ordered list of sites spanning a product space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductBasis {
    sites: Vec<LevelScheme>,
    strides: Vec<usize>,
    dim: usize,
}

impl ProductBasis {
    pub fn new(sites: Vec<LevelScheme>) -> Result<Self> {
        Self::with_cap(sites, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(sites: Vec<LevelScheme>, cap: usize) -> Result<Self> {
        if sites.is_empty() {
            return Err(SimError::InvalidLevels("a basis needs at least one site".into()));
        }
        let mut dim = 1usize;
        for s in &sites {
            dim = dim
                .checked_mul(s.len())
                .filter(|d| *d <= cap)
                .ok_or(SimError::DimensionCap { dim: dim.saturating_mul(s.len()), cap })?;
        }
        let mut strides = vec![1usize; sites.len()];
        for i in (0..sites.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * sites[i + 1].len();
        }
        Ok(Self { sites, strides, dim })
    }

    /// `n` identical sites.
    pub fn uniform<S: AsRef<str>>(n: usize, labels: &[S]) -> Result<Self> {
        let scheme = LevelScheme::new(labels)?;
        Self::new(vec![scheme; n])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[LevelScheme] {
        &self.sites
    }

    fn level(&self, site: usize, label: &str) -> Result<usize> {
        let scheme = self.sites.get(site).ok_or(SimError::InvalidSite { site, sites: self.sites.len() })?;
        scheme.position(label).ok_or_else(|| SimError::UnknownLevel { site, label: label.to_owned() })
    }

    /// Per-site level indices of a basis index.
    pub fn digits_of(&self, index: usize) -> Vec<usize> {
        self.sites.iter().zip(&self.strides).map(|(s, stride)| (index / stride) % s.len()).collect()
    }

    pub fn basis_index<S: AsRef<str>>(&self, labels: &[S]) -> Result<usize> {
        if labels.len() != self.sites.len() {
            return Err(SimError::LabelCount { expected: self.sites.len(), got: labels.len() });
        }
        labels
            .iter()
            .enumerate()
            .try_fold(0usize, |acc, (site, l)| Ok(acc + self.level(site, l.as_ref())? * self.strides[site]))
    }

    pub fn labels_of(&self, index: usize) -> Result<Vec<String>> {
        if index >= self.dim {
            return Err(SimError::DimensionMismatch { expected: self.dim, got: index });
        }
        Ok(self.digits_of(index).into_iter().zip(&self.sites).map(|(d, s)| s.labels[d].clone()).collect())
    }

    /// Concatenated label string, e.g. `"r0"` or `"p00"`.
    pub fn label_string(&self, index: usize) -> Result<String> {
        Ok(self.labels_of(index)?.concat())
    }

    pub fn ket<S: AsRef<str>>(&self, labels: &[S]) -> Result<PureState> {
        let idx = self.basis_index(labels)?;
        let mut v = DVector::from_element(self.dim, ZERO);
        v[idx] = ONE;
        Ok(PureState { amplitudes: v })
    }

    /// Normalized superposition `Σ c_k |labels_k⟩`.
    pub fn superposition<S: AsRef<str>>(&self, terms: &[(Complex64, &[S])]) -> Result<PureState> {
        let mut v = DVector::from_element(self.dim, ZERO);
        for (c, labels) in terms {
            v[self.basis_index(labels)?] += c;
        }
        PureState::normalized(v)
    }

    /// `|a⟩⟨b|` between two full-space basis states.
    pub fn ket_bra<S: AsRef<str>>(&self, ket: &[S], bra: &[S]) -> Result<ComplexOperator> {
        let i = self.basis_index(ket)?;
        let j = self.basis_index(bra)?;
        let mut m = DMatrix::from_element(self.dim, self.dim, ZERO);
        m[(i, j)] = ONE;
        Ok(ComplexOperator(m))
    }

    /// `|to⟩⟨from|` acting on `site`, identity on every other site.
    pub fn site_operator(&self, site: usize, to: &str, from: &str) -> Result<ComplexOperator> {
        let a = self.level(site, to)?;
        let b = self.level(site, from)?;
        let stride = self.strides[site];
        let mut m = DMatrix::from_element(self.dim, self.dim, ZERO);
        for col in 0..self.dim {
            let digit = (col / stride) % self.sites[site].len();
            if digit == b {
                let row = col - b * stride + a * stride;
                m[(row, col)] = ONE;
            }
        }
        Ok(ComplexOperator(m))
    }

    /// Sum of `|to⟩⟨from|` over every site.
    pub fn collective_operator(&self, to: &str, from: &str) -> Result<ComplexOperator> {
        let mut acc = ComplexOperator::zeros(self.dim);
        for site in 0..self.num_sites() {
            acc = &acc + &self.site_operator(site, to, from)?;
        }
        Ok(acc)
    }

    /// Projector onto "site `i` in `level_a` and site `j` in `level_b`".
    pub fn pair_projector(
        &self,
        site_i: usize,
        level_a: &str,
        site_j: usize,
        level_b: &str,
    ) -> Result<ComplexOperator> {
        if site_i == site_j {
            return Err(SimError::SameSite(site_i));
        }
        let a = self.level(site_i, level_a)?;
        let b = self.level(site_j, level_b)?;
        let mut m = DMatrix::from_element(self.dim, self.dim, ZERO);
        for idx in 0..self.dim {
            let d = self.digits_of(idx);
            if d[site_i] == a && d[site_j] == b {
                m[(idx, idx)] = ONE;
            }
        }
        Ok(ComplexOperator(m))
    }
}

/// Dense complex square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexOperator(DMatrix<Complex64>);

impl ComplexOperator {
    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::from_element(dim, dim, ZERO))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(SimError::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SimError::NonFinite("operator entries"));
        }
        Ok(Self(m))
    }

    /// Builds from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(SimError::DimensionMismatch { expected: dim * dim, got: entries.len() });
        }
        Self::from_matrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(dim, dim, f))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn dagger(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        Self(&self.0 * c.into())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    /// `A + A†`.
    pub fn plus_hc(&self) -> Self {
        Self(&self.0 + self.0.adjoint())
    }

    /// Largest entrywise |A − A†|.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn apply(&self, psi: &PureState) -> Result<DVector<Complex64>> {
        check_dim(self.dim(), psi.dim())?;
        Ok(&self.0 * &psi.amplitudes)
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.off_diagonal_max() <= tol
    }

    pub(crate) fn off_diagonal_max(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    worst = worst.max(self.0[(i, j)].norm());
                }
            }
        }
        worst
    }
}

impl std::ops::Add for &ComplexOperator {
    type Output = ComplexOperator;
    fn add(self, rhs: Self) -> ComplexOperator {
        ComplexOperator(&self.0 + &rhs.0)
    }
}

impl std::ops::Sub for &ComplexOperator {
    type Output = ComplexOperator;
    fn sub(self, rhs: Self) -> ComplexOperator {
        ComplexOperator(&self.0 - &rhs.0)
    }
}

impl std::ops::Mul for &ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, rhs: Self) -> ComplexOperator {
        ComplexOperator(&self.0 * &rhs.0)
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(SimError::DimensionMismatch { expected, got })
    }
}

/// Kronecker product `A ⊗ B`, consistent with leftmost-most-significant ordering.
pub fn kron(a: &ComplexOperator, b: &ComplexOperator) -> Result<ComplexOperator> {
    kron_with_cap(a, b, DEFAULT_DIM_CAP)
}

pub fn kron_with_cap(a: &ComplexOperator, b: &ComplexOperator, cap: usize) -> Result<ComplexOperator> {
    let dim = a.dim().checked_mul(b.dim()).ok_or(SimError::DimensionCap { dim: usize::MAX, cap })?;
    if dim > cap {
        return Err(SimError::DimensionCap { dim, cap });
    }
    Ok(ComplexOperator(a.0.kronecker(&b.0)))
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: DVector<Complex64>,
}

impl PureState {
    /// Accepts amplitudes whose norm is 1 within 1e-12.
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        let n = amplitudes.norm();
        if (n - 1.0).abs() > 1e-12 {
            return Err(SimError::NotNormalized(n));
        }
        Ok(Self { amplitudes })
    }

    pub fn normalized(amplitudes: DVector<Complex64>) -> Result<Self> {
        let n = amplitudes.norm();
        if !n.is_finite() || n == 0.0 {
            return Err(SimError::NotNormalized(n));
        }
        Ok(Self { amplitudes: amplitudes.unscale(n) })
    }

    pub(crate) fn from_raw(amplitudes: DVector<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix(ComplexOperator(&self.amplitudes * self.amplitudes.adjoint()))
    }

    pub fn with_global_phase(&self, phase: f64) -> Self {
        Self { amplitudes: &self.amplitudes * Complex64::from_polar(1.0, phase) }
    }
}

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexOperator);

impl DensityMatrix {
    /// Validates Hermiticity (1e-10), unit trace (1e-10) and eigenvalues ≥ −1e-8.
    pub fn new(op: ComplexOperator) -> Result<Self> {
        let herm = op.hermiticity_error();
        if herm > 1e-10 {
            return Err(SimError::InvalidDensityMatrix(format!("not Hermitian ({herm:e})")));
        }
        let tr = op.trace();
        if (tr - ONE).norm() > 1e-10 {
            return Err(SimError::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let rho = Self(op);
        let min = rho.min_eigenvalue();
        if min < -1e-8 {
            return Err(SimError::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    /// Wraps an operator without checks; used for integrator output, whose
    /// tolerances are looser than the construction ones.
    pub fn from_operator_unchecked(op: ComplexOperator) -> Self {
        Self(op)
    }

    /// `Σ w_k |ψ_k⟩⟨ψ_k|`; weights must be nonnegative and sum to one.
    pub fn mixture(components: &[(f64, &PureState)]) -> Result<Self> {
        let first = components.first().ok_or_else(|| SimError::InvalidDensityMatrix("empty mixture".into()))?;
        let dim = first.1.dim();
        let mut m = DMatrix::from_element(dim, dim, ZERO);
        for (w, psi) in components {
            check_dim(dim, psi.dim())?;
            if *w < 0.0 {
                return Err(SimError::InvalidDensityMatrix(format!("negative weight {w}")));
            }
            m += psi.amplitudes() * psi.amplitudes().adjoint() * Complex64::from(*w);
        }
        Self::new(ComplexOperator(m))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexOperator::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn operator(&self) -> &ComplexOperator {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0.get(row, col)
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// `⟨ψ|ρ|ψ⟩`, unclamped.
    pub fn expectation(&self, psi: &PureState) -> Result<f64> {
        check_dim(self.dim(), psi.dim())?;
        let v = self.0.matrix() * psi.amplitudes();
        Ok(psi.amplitudes().dotc(&v).re)
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let m = self.0.matrix();
        let h = (m + m.adjoint()) * Complex64::from(0.5);
        h.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
    }
}
