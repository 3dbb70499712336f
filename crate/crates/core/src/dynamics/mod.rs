//! Time-dependent Hamiltonians and Lindblad master-equation integration.

mod frame;
mod generator;
mod integrate;

use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::hilbert::{check_dim, ComplexOperator, DensityMatrix};

pub use frame::rotating_frame;
pub use generator::Generator;
pub use integrate::{
    evolve_master, evolve_unitary, IntegratorConfig, MasterEquation, Method, Snapshot, StopRule, Trajectory,
};

/// One piece of `H(t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum HamiltonianTerm {
    /// Time-independent Hermitian operator.
    Static(ComplexOperator),
    /// Contributes `A e^{−iωt} + A† e^{+iωt}`.
    Rotating { op: ComplexOperator, omega: f64 },
}

impl HamiltonianTerm {
    pub fn static_term(op: ComplexOperator) -> Result<Self> {
        let err = op.hermiticity_error();
        if err > 1e-12 {
            return Err(SimError::NotHermitian(err));
        }
        Ok(Self::Static(op))
    }

    pub fn rotating(op: ComplexOperator, omega: f64) -> Result<Self> {
        if !omega.is_finite() {
            return Err(SimError::NonFinite("rotating frequency"));
        }
        Ok(Self::Rotating { op, omega })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Static(op) | Self::Rotating { op, .. } => op.dim(),
        }
    }

    pub fn is_static(&self) -> bool {
        matches!(self, Self::Static(_))
    }

    pub fn evaluate(&self, t: f64) -> ComplexOperator {
        match self {
            Self::Static(h) => h.clone(),
            Self::Rotating { op, omega } => {
                let ph = Complex64::from_polar(1.0, -omega * t);
                &op.scale(ph) + &op.dagger().scale(ph.conj())
            }
        }
    }
}

/// A jump operator with its rate folded in, `L = √rate · J`.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladChannel {
    op: ComplexOperator,
}

impl LindbladChannel {
    pub fn new(op: ComplexOperator) -> Result<Self> {
        if op.matrix().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SimError::NonFinite("jump operator"));
        }
        Ok(Self { op })
    }

    /// `√rate · jump`.
    pub fn with_rate(rate: f64, jump: &ComplexOperator) -> Result<Self> {
        if rate.is_nan() || rate < 0.0 {
            return Err(SimError::InvalidParameter(format!("negative rate {rate}")));
        }
        Self::new(jump.scale(rate.sqrt()))
    }

    pub fn operator(&self) -> &ComplexOperator {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }
}

pub(crate) fn common_dim(terms: &[HamiltonianTerm], channels: &[LindbladChannel]) -> Result<usize> {
    let dim = terms
        .first()
        .map(HamiltonianTerm::dim)
        .or_else(|| channels.first().map(LindbladChannel::dim))
        .ok_or_else(|| SimError::InvalidParameter("no terms or channels".into()))?;
    for t in terms {
        check_dim(dim, t.dim())?;
    }
    for c in channels {
        check_dim(dim, c.dim())?;
    }
    Ok(dim)
}

/// `H(t)` as a dense operator.
pub fn hamiltonian_at(terms: &[HamiltonianTerm], t: f64) -> Result<ComplexOperator> {
    let dim = common_dim(terms, &[])?;
    let mut h = ComplexOperator::zeros(dim);
    for term in terms {
        h = &h + &term.evaluate(t);
    }
    Ok(h)
}

/// `−i[H(t), ρ] + Σ_k (L_k ρ L_k† − ½{L_k†L_k, ρ})`.
pub fn lindblad_rhs(
    terms: &[HamiltonianTerm],
    channels: &[LindbladChannel],
    rho: &DensityMatrix,
    t: f64,
) -> Result<ComplexOperator> {
    let gen = Generator::new(terms, channels)?;
    check_dim(gen.dim(), rho.dim())?;
    let d = gen.dim();
    let flat: Vec<Complex64> = (0..d * d).map(|k| rho.get(k / d, k % d)).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); d * d];
    gen.apply_density(t, &flat, &mut out);
    ComplexOperator::from_row_major(d, &out)
}
