use serde::{Deserialize, Serialize};

use super::{check_params, stark_cancellation, stark_shift, transitions, Model};
use crate::dynamics::HamiltonianTerm;
use crate::error::Result;
use crate::hilbert::ProductBasis;

/// Two three-level atoms `{0, 1, r}` with a detuned and a resonant drive on `1 ↔ r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UrpTwoAtomParams {
    pub omega1: f64,
    pub omega2: f64,
    pub delta: f64,
    pub u_rr: f64,
    #[serde(default)]
    pub stark_cancel: bool,
}

impl Default for UrpTwoAtomParams {
    fn default() -> Self {
        Self { omega1: 1.0, omega2: 0.05, delta: 50.0, u_rr: 50.0, stark_cancel: false }
    }
}

impl UrpTwoAtomParams {
    /// `U_rr = Δ ≥ 10 Ω₁` and `Ω₁ ≥ 10 Ω₂`.
    pub fn urp_regime(&self) -> bool {
        self.u_rr == self.delta && self.delta >= 10.0 * self.omega1 && self.omega1 >= 10.0 * self.omega2
    }

    pub fn validate(&self) -> Result<()> {
        check_params(&[("omega1", self.omega1), ("omega2", self.omega2), ("delta", self.delta), ("u_rr", self.u_rr)])
    }
}

pub(crate) fn basis() -> Result<ProductBasis> {
    ProductBasis::uniform(2, &["0", "1", "r"])
}

/// `Σᵢ Ω₁e^{−iΔt}|r⟩ᵢ⟨1| + Ω₂|r⟩ᵢ⟨1| + h.c. + U_rr|rr⟩⟨rr|`.
pub fn build_two_atom_full(p: &UrpTwoAtomParams) -> Result<Model> {
    p.validate()?;
    let basis = basis()?;
    let up = basis.collective_operator("r", "1")?;
    let mut terms = vec![
        HamiltonianTerm::rotating(up.scale(p.omega1), p.delta)?,
        HamiltonianTerm::Static(up.scale(p.omega2).plus_hc()),
        HamiltonianTerm::Static(basis.pair_projector(0, "r", 1, "r")?.scale(p.u_rr)),
    ];
    if p.stark_cancel {
        terms.push(stark_cancellation(&basis, &[0, 1], &[("1", "r")], stark_shift(p.omega1, p.delta))?);
    }
    Ok(Model { basis, terms, channels: Vec::new() })
}

/// `Ω₂(|r0⟩⟨10| + |0r⟩⟨01|) + h.c.`
pub fn build_two_atom_effective(p: &UrpTwoAtomParams) -> Result<Model> {
    p.validate()?;
    let basis = basis()?;
    let h = transitions(&basis, &[(p.omega2, "r0", "10"), (p.omega2, "0r", "01")])?.plus_hc();
    Ok(Model { basis, terms: vec![HamiltonianTerm::Static(h)], channels: Vec::new() })
}
