use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_params, decay_channels, stark_cancellation, stark_shift, transitions, Model};
use crate::dynamics::{HamiltonianTerm, LindbladChannel};
use crate::error::Result;
use crate::hilbert::{ComplexOperator, PureState};

/// Dissipative Bell-state preparation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellParams {
    pub omega1: f64,
    pub omega2: f64,
    /// Microwave Rabi frequency ω, applied with sign `(−1)^{i−1}` on atom `i`.
    pub omega_mw: f64,
    pub delta: f64,
    pub u_rr: f64,
    pub gamma: f64,
    #[serde(default)]
    pub stark_cancel: bool,
}

impl Default for BellParams {
    fn default() -> Self {
        Self { omega1: 1.0, omega2: 0.02, omega_mw: 0.01, delta: 100.0, u_rr: 100.0, gamma: 0.05, stark_cancel: false }
    }
}

impl BellParams {
    pub fn validate(&self) -> Result<()> {
        check_params(&[
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("omega_mw", self.omega_mw),
            ("delta", self.delta),
            ("u_rr", self.u_rr),
            ("gamma", self.gamma),
        ])
    }
}

/// The four Bell states on the ground manifold of two `{0, 1, r}` atoms.
#[derive(Debug, Clone)]
pub struct BellStates {
    pub phi_plus: PureState,
    pub phi_minus: PureState,
    pub psi_plus: PureState,
    pub psi_minus: PureState,
}

pub fn bell_states() -> Result<BellStates> {
    let b = super::two_atom::basis()?;
    let one = Complex64::new(1.0, 0.0);
    let pair = |a: &[&str], c: Complex64, d: &[&str]| b.superposition(&[(one, a), (c, d)]);
    Ok(BellStates {
        phi_plus: pair(&["0", "0"], one, &["1", "1"])?,
        phi_minus: pair(&["0", "0"], -one, &["1", "1"])?,
        psi_plus: pair(&["0", "1"], one, &["1", "0"])?,
        psi_minus: pair(&["0", "1"], -one, &["1", "0"])?,
    })
}

/// `H_L + H_MW` with `H_MW = Σᵢ (−1)^{i−1} ω|1⟩ᵢ⟨0| + h.c.`, decay `√(γ/2)|0(1)⟩ᵢ⟨r|`.
pub fn build_bell_full(p: &BellParams) -> Result<Model> {
    p.validate()?;
    let basis = super::two_atom::basis()?;
    let up = basis.collective_operator("r", "1")?;
    let mw = microwave(&basis, p.omega_mw)?;
    let mut terms = vec![
        HamiltonianTerm::rotating(up.scale(p.omega1), p.delta)?,
        HamiltonianTerm::Static(&up.scale(p.omega2).plus_hc() + &mw),
        HamiltonianTerm::Static(basis.pair_projector(0, "r", 1, "r")?.scale(p.u_rr)),
    ];
    if p.stark_cancel {
        terms.push(stark_cancellation(&basis, &[0, 1], &[("1", "r")], stark_shift(p.omega1, p.delta))?);
    }
    let channels = decay_channels(&basis, "r", &["0", "1"], p.gamma)?;
    Ok(Model { basis, terms, channels })
}

pub(crate) fn microwave(basis: &crate::hilbert::ProductBasis, omega: f64) -> Result<ComplexOperator> {
    let a = basis.site_operator(0, "1", "0")?;
    let b = basis.site_operator(1, "1", "0")?;
    Ok((&a - &b).scale(omega).plus_hc())
}

/// `Ω₂(|10⟩⟨r0| + |01⟩⟨0r|) + ω(|11⟩ − |00⟩)(⟨01| − ⟨10|) + h.c.` with the four
/// effective decay channels at rate γ/2.
pub fn build_bell_effective(p: &BellParams) -> Result<Model> {
    p.validate()?;
    let basis = super::two_atom::basis()?;
    let (w2, w) = (p.omega2, p.omega_mw);
    let h = transitions(
        &basis,
        &[(w2, "10", "r0"), (w2, "01", "0r"), (w, "11", "01"), (-w, "11", "10"), (-w, "00", "01"), (w, "00", "10")],
    )?
    .plus_hc();
    let rate = p.gamma / 2.0;
    let channels = [("01", "0r"), ("00", "0r"), ("10", "r0"), ("00", "r0")]
        .iter()
        .map(|(k, b)| LindbladChannel::with_rate(rate, &transitions(&basis, &[(1.0, k, b)])?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Model { basis, terms: vec![HamiltonianTerm::Static(h)], channels })
}
