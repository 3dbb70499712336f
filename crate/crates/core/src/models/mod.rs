//! Full and effective models for the pumping schemes.
//!
//! Frequencies are in units of a declared scale (`Ω₁ = 1` for the two-atom,
//! gate and entanglement schemes, `g = 1` for error correction) and times in
//! its inverse.
//!
//! Full models carry the fast `e^{−iΔt}` drive as a rotating term. The
//! detuned drive also produces AC Stark shifts of order `Ω₁²/Δ` on each driven
//! ground level and its Rydberg partner; the effective models assume these are
//! cancelled externally. Setting `stark_cancel` appends a static diagonal
//! term `Σᵢ s (|e⟩ᵢ⟨e| − |g⟩ᵢ⟨g|)` with `s = Ω₁²/Δ` for every driven pair
//! `g ↔ e`, which removes them to leading order.

mod bell;
mod gate;
mod qec;
mod three_d;
mod two_atom;

pub use bell::{bell_states, build_bell_effective, build_bell_full, BellParams, BellStates};
pub use gate::{build_gate_effective, build_gate_full, gate_states, GateParams};
pub use qec::{build_qec_effective, build_qec_full, effective_kappa, qec_states, QecParams, QecStates};
pub use three_d::{build_threed_effective, build_threed_full, threed_states, ThreeDParams};
pub use two_atom::{build_two_atom_effective, build_two_atom_full, UrpTwoAtomParams};

use crate::dynamics::{HamiltonianTerm, LindbladChannel};
use crate::error::{Result, SimError};
use crate::hilbert::{ComplexOperator, ProductBasis};

/// A basis with its Hamiltonian terms and dissipation channels.
#[derive(Debug, Clone)]
pub struct Model {
    pub basis: ProductBasis,
    pub terms: Vec<HamiltonianTerm>,
    pub channels: Vec<LindbladChannel>,
}

impl Model {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Fastest rotating frequency, 0 for a static model.
    pub fn max_abs_omega(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| match t {
                HamiltonianTerm::Rotating { omega, .. } => omega.abs(),
                HamiltonianTerm::Static(_) => 0.0,
            })
            .fold(0.0, f64::max)
    }

    /// Sum of every static term.
    pub fn static_hamiltonian(&self) -> Result<ComplexOperator> {
        let mut h = ComplexOperator::zeros(self.dim());
        for t in &self.terms {
            match t {
                HamiltonianTerm::Static(op) => h = &h + op,
                HamiltonianTerm::Rotating { .. } => return Err(SimError::RotatingTerm),
            }
        }
        Ok(h)
    }
    /// Basis indices touched by the static Hamiltonian or a jump operator.
    ///
    /// Effective models act on a subspace of their basis. Levels outside it
    /// are left alone by the generator and add trivially stationary
    /// populations and coherences to the Liouvillian null space.
    pub fn dynamical_support(&self) -> Result<Vec<usize>> {
        let h = self.static_hamiltonian()?;
        let d = self.dim();
        let touched =
            |op: &ComplexOperator, k: usize| (0..d).any(|j| op.get(k, j).norm() > 0.0 || op.get(j, k).norm() > 0.0);
        Ok((0..d).filter(|&k| touched(&h, k) || self.channels.iter().any(|c| touched(c.operator(), k))).collect())
    }

    /// Static Hamiltonian and channels restricted to the listed basis indices.
    pub fn restricted(&self, support: &[usize]) -> Result<(Vec<HamiltonianTerm>, Vec<LindbladChannel>)> {
        let restrict =
            |op: &ComplexOperator| ComplexOperator::from_fn(support.len(), |a, b| op.get(support[a], support[b]));
        let h = restrict(&self.static_hamiltonian()?);
        let channels =
            self.channels.iter().map(|c| LindbladChannel::new(restrict(c.operator()))).collect::<Result<Vec<_>>>()?;
        Ok((vec![HamiltonianTerm::Static(h)], channels))
    }
}

pub(crate) fn check_params(values: &[(&str, f64)]) -> Result<()> {
    for (name, v) in values {
        if !v.is_finite() || *v < 0.0 {
            return Err(SimError::InvalidParameter(format!("{name} = {v} must be finite and ≥ 0")));
        }
    }
    Ok(())
}

/// Leading-order AC Stark shift of a level driven at Rabi frequency `omega1`
/// and detuning `delta`.
pub fn stark_shift(omega1: f64, delta: f64) -> f64 {
    if delta == 0.0 {
        0.0
    } else {
        omega1 * omega1 / delta
    }
}

/// `Σᵢ Σ_(g,e) s (|e⟩ᵢ⟨e| − |g⟩ᵢ⟨g|)` over the listed sites and driven pairs.
pub(crate) fn stark_cancellation(
    basis: &ProductBasis,
    sites: &[usize],
    pairs: &[(&str, &str)],
    shift: f64,
) -> Result<HamiltonianTerm> {
    let mut h = ComplexOperator::zeros(basis.dim());
    for &site in sites {
        for (g, e) in pairs {
            h = &h + &basis.site_operator(site, e, e)?.scale(shift);
            h = &h - &basis.site_operator(site, g, g)?.scale(shift);
        }
    }
    Ok(HamiltonianTerm::Static(h))
}

/// `Σ_{i<j} Σ_levels |ll⟩_{ij}⟨ll|`, scaled.
pub(crate) fn pair_interactions(basis: &ProductBasis, levels: &[&str], strength: f64) -> Result<ComplexOperator> {
    let n = basis.num_sites();
    let mut h = ComplexOperator::zeros(basis.dim());
    for i in 0..n {
        for j in i + 1..n {
            for l in levels {
                h = &h + &basis.pair_projector(i, l, j, l)?;
            }
        }
    }
    Ok(h.scale(strength))
}

/// Spontaneous emission `√(γ/n) |g⟩ᵢ⟨r|` to each of the `n` listed ground levels.
pub(crate) fn decay_channels(
    basis: &ProductBasis,
    rydberg: &str,
    grounds: &[&str],
    gamma: f64,
) -> Result<Vec<LindbladChannel>> {
    if gamma == 0.0 {
        return Ok(Vec::new());
    }
    let rate = gamma / grounds.len() as f64;
    let mut out = Vec::new();
    for site in 0..basis.num_sites() {
        for g in grounds {
            out.push(LindbladChannel::with_rate(rate, &basis.site_operator(site, g, rydberg)?)?);
        }
    }
    Ok(out)
}

/// Sum of `c · |ket⟩⟨bra|` over full-space basis labels.
pub(crate) fn transitions(basis: &ProductBasis, items: &[(f64, &str, &str)]) -> Result<ComplexOperator> {
    let mut h = ComplexOperator::zeros(basis.dim());
    for (c, ket, bra) in items {
        let k: Vec<String> = split_labels(basis, ket)?;
        let b: Vec<String> = split_labels(basis, bra)?;
        h = &h + &basis.ket_bra(&k, &b)?.scale(*c);
    }
    Ok(h)
}

/// Splits a compact label such as `"r0"` into per-site labels (single-character levels).
pub(crate) fn split_labels(basis: &ProductBasis, s: &str) -> Result<Vec<String>> {
    let labels: Vec<String> = s.chars().map(|c| c.to_string()).collect();
    if labels.len() != basis.num_sites() {
        return Err(SimError::LabelCount { expected: basis.num_sites(), got: labels.len() });
    }
    Ok(labels)
}
