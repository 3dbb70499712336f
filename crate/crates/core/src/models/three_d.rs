use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_params, decay_channels, stark_cancellation, stark_shift, transitions, Model};
use crate::dynamics::{HamiltonianTerm, LindbladChannel};
use crate::error::Result;
use crate::hilbert::{ComplexOperator, ProductBasis, PureState};

/// Dissipative preparation of the two-qutrit state `|T₁⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreeDParams {
    pub omega1: f64,
    pub omega2: f64,
    /// Microwave on `0 ↔ 1` (ω₁).
    pub omega_mw1: f64,
    /// Microwave on `2 ↔ 1` (ω₂).
    pub omega_mw2: f64,
    pub delta: f64,
    /// Small detuning δ that lifts the degeneracy between the two dark states.
    pub delta_small: f64,
    pub u: f64,
    pub gamma: f64,
    #[serde(default)]
    pub stark_cancel: bool,
}

impl Default for ThreeDParams {
    fn default() -> Self {
        Self {
            omega1: 1.0,
            omega2: 0.02,
            omega_mw1: 0.01,
            omega_mw2: 0.01,
            delta: 100.0,
            delta_small: 0.02,
            u: 100.0,
            gamma: 0.05,
            stark_cancel: false,
        }
    }
}

impl ThreeDParams {
    pub fn validate(&self) -> Result<()> {
        check_params(&[
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("omega_mw1", self.omega_mw1),
            ("omega_mw2", self.omega_mw2),
            ("delta", self.delta),
            ("delta_small", self.delta_small),
            ("u", self.u),
            ("gamma", self.gamma),
        ])
    }
}

pub(crate) fn basis() -> Result<ProductBasis> {
    ProductBasis::uniform(2, &["0", "1", "2", "r"])
}

/// `|T₁⟩ = (|00⟩+|11⟩+|22⟩)/√3` and `|T₂⟩ = (3|20⟩+3|02⟩+2|11⟩−|00⟩−|22⟩)/2√6`.
pub fn threed_states() -> Result<(PureState, PureState)> {
    let b = basis()?;
    let c = |x: f64| Complex64::new(x, 0.0);
    let t1 = b.superposition(&[(c(1.0), &["0", "0"][..]), (c(1.0), &["1", "1"]), (c(1.0), &["2", "2"])])?;
    let t2 = b.superposition(&[
        (c(3.0), &["2", "0"][..]),
        (c(3.0), &["0", "2"]),
        (c(2.0), &["1", "1"]),
        (c(-1.0), &["0", "0"]),
        (c(-1.0), &["2", "2"]),
    ])?;
    Ok((t1, t2))
}

/// Microwave couplings with signs `(−1)^{i−1}` plus the δ shifts on
/// `|0⟩₁, |1⟩₁, |2⟩₂`.
pub(crate) fn microwave(basis: &ProductBasis, p: &ThreeDParams) -> Result<ComplexOperator> {
    let mut h = ComplexOperator::zeros(basis.dim());
    for (site, sign) in [(0usize, 1.0), (1, -1.0)] {
        let c01 = basis.site_operator(site, "1", "0")?.scale(sign * p.omega_mw1);
        let c21 = basis.site_operator(site, "1", "2")?.scale(sign * p.omega_mw2);
        h = &h + &(&c01 + &c21).plus_hc();
    }
    let shifts = &(&basis.site_operator(0, "0", "0")? + &basis.site_operator(0, "1", "1")?)
        + &basis.site_operator(1, "2", "2")?;
    Ok(&h + &shifts.scale(p.delta_small))
}

/// `H_R + H_MW` with decay `√(γ/3)|0,1,2⟩ᵢ⟨r|`.
pub fn build_threed_full(p: &ThreeDParams) -> Result<Model> {
    p.validate()?;
    let basis = basis()?;
    let up = basis.collective_operator("r", "1")?;
    let mut terms = vec![
        HamiltonianTerm::rotating(up.scale(p.omega1), p.delta)?,
        HamiltonianTerm::Static(&up.scale(p.omega2).plus_hc() + &microwave(&basis, p)?),
        HamiltonianTerm::Static(basis.pair_projector(0, "r", 1, "r")?.scale(p.u)),
    ];
    if p.stark_cancel {
        terms.push(stark_cancellation(&basis, &[0, 1], &[("1", "r")], stark_shift(p.omega1, p.delta))?);
    }
    let channels = decay_channels(&basis, "r", &["0", "1", "2"], p.gamma)?;
    Ok(Model { basis, terms, channels })
}

/// Effective pumping/microwave Hamiltonian with decay `√(γ/3)|g⟩⟨r|` out of
/// every pumped state (`|0r⟩, |r0⟩, |r2⟩, |2r⟩`), twelve channels in all.
pub fn build_threed_effective(p: &ThreeDParams) -> Result<Model> {
    p.validate()?;
    let basis = basis()?;
    let (w2, a, b) = (p.omega2, p.omega_mw1, p.omega_mw2);
    let pumping = transitions(&basis, &[(w2, "10", "r0"), (w2, "01", "0r"), (w2, "12", "r2"), (w2, "21", "2r")])?;
    let mw = transitions(
        &basis,
        &[
            (a, "11", "01"),
            (-a, "11", "10"),
            (-a, "00", "01"),
            (a, "00", "10"),
            (a, "02", "12"),
            (-a, "20", "21"),
            (b, "11", "21"),
            (-b, "11", "12"),
            (-b, "22", "21"),
            (b, "22", "12"),
            (b, "10", "20"),
            (-b, "01", "02"),
        ],
    )?;
    let d = p.delta_small;
    let shifts = transitions(
        &basis,
        &[
            (d, "00", "00"),
            (d, "11", "11"),
            (d, "22", "22"),
            (d, "10", "10"),
            (d, "01", "01"),
            (2.0 * d, "12", "12"),
            (2.0 * d, "02", "02"),
        ],
    )?;
    let h = &(&pumping + &mw).plus_hc() + &shifts;
    let rate = p.gamma / 3.0;
    let mut channels = Vec::with_capacity(12);
    for excited in ["0r", "r0", "r2", "2r"] {
        for g in ["0", "1", "2"] {
            let ground = excited.replace('r', g);
            channels.push(LindbladChannel::with_rate(rate, &transitions(&basis, &[(1.0, &ground, excited)])?)?);
        }
    }
    Ok(Model { basis, terms: vec![HamiltonianTerm::Static(h)], channels })
}
