use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_params, decay_channels, pair_interactions, stark_cancellation, stark_shift, transitions, Model};
use crate::dynamics::{HamiltonianTerm, LindbladChannel};
use crate::error::{Result, SimError};
use crate::hilbert::{ProductBasis, PureState};

/// Autonomous bit-flip correction of the three-atom repetition code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QecParams {
    pub omega1: f64,
    pub omega2: f64,
    pub delta: f64,
    pub u_rr: f64,
    /// Cavity coupling; the frequency unit of this scheme.
    pub g: f64,
    pub kappa: f64,
    /// Engineered decay rate, `4g²/κ` when derived from the cavity.
    pub kappa_e: f64,
    /// Bit-flip rate Γ of the noise channels.
    pub gamma_flip: f64,
    /// Optional Rydberg decay, split equally from `|p⟩` and `|r⟩` to `|0⟩` and `|1⟩`.
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub stark_cancel: bool,
}

impl Default for QecParams {
    fn default() -> Self {
        Self {
            omega1: 3.0,
            omega2: 0.05,
            delta: 800.0,
            u_rr: 800.0,
            g: 1.0,
            kappa: 200.0,
            kappa_e: 0.02,
            gamma_flip: 0.0,
            gamma: 0.0,
            stark_cancel: false,
        }
    }
}

impl QecParams {
    pub fn validate(&self) -> Result<()> {
        check_params(&[
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("delta", self.delta),
            ("u_rr", self.u_rr),
            ("g", self.g),
            ("kappa", self.kappa),
            ("kappa_e", self.kappa_e),
            ("gamma_flip", self.gamma_flip),
            ("gamma", self.gamma),
        ])
    }

    /// Sets `κ` and derives `κ_e = 4g²/κ`.
    pub fn with_cavity(mut self, g: f64, kappa: f64) -> Result<Self> {
        self.kappa_e = effective_kappa(g, kappa)?;
        self.g = g;
        self.kappa = kappa;
        Ok(self)
    }
}

/// Adiabatic-elimination rate `4g²/κ`.
pub fn effective_kappa(g: f64, kappa: f64) -> Result<f64> {
    if !kappa.is_finite() || kappa <= 0.0 {
        return Err(SimError::InvalidParameter(format!("kappa = {kappa} must be > 0")));
    }
    Ok(4.0 * g * g / kappa)
}

pub(crate) fn basis() -> Result<ProductBasis> {
    ProductBasis::uniform(3, &["0", "1", "p", "r"])
}

/// Logical target and single-error input states.
#[derive(Debug, Clone)]
pub struct QecStates {
    /// `(|000⟩ + i|111⟩)/√2`.
    pub target: PureState,
    /// `(|100⟩ + i|011⟩)/√2`, the target after a flip on atom 1.
    pub flipped: PureState,
}

pub fn qec_states() -> Result<QecStates> {
    let b = basis()?;
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    Ok(QecStates {
        target: b.superposition(&[(one, &["0", "0", "0"][..]), (i, &["1", "1", "1"])])?,
        flipped: b.superposition(&[(one, &["1", "0", "0"][..]), (i, &["0", "1", "1"])])?,
    })
}

fn engineered_channels(basis: &ProductBasis, kappa_e: f64) -> Result<Vec<LindbladChannel>> {
    (0..3)
        .map(|s| {
            let jump = &basis.site_operator(s, "0", "r")? + &basis.site_operator(s, "1", "p")?;
            LindbladChannel::with_rate(kappa_e, &jump)
        })
        .collect()
}

/// `H_full` with drives on `0 ↔ p` and `1 ↔ r`, `U_rr(|rr⟩⟨rr| + |pp⟩⟨pp|)` for
/// every pair, engineered decay `L_e`, and bit-flip noise `√Γ σ_x` if requested.
pub fn build_qec_full(p: &QecParams, include_noise: bool) -> Result<Model> {
    p.validate()?;
    let basis = basis()?;
    let up = &basis.collective_operator("p", "0")? + &basis.collective_operator("r", "1")?;
    let mut terms = vec![
        HamiltonianTerm::rotating(up.scale(p.omega1), p.delta)?,
        HamiltonianTerm::Static(up.scale(p.omega2).plus_hc()),
        HamiltonianTerm::Static(pair_interactions(&basis, &["r", "p"], p.u_rr)?),
    ];
    if p.stark_cancel {
        terms.push(stark_cancellation(&basis, &[0, 1, 2], &[("0", "p"), ("1", "r")], stark_shift(p.omega1, p.delta))?);
    }
    let mut channels = engineered_channels(&basis, p.kappa_e)?;
    if include_noise && p.gamma_flip > 0.0 {
        for s in 0..3 {
            let flip = basis.site_operator(s, "0", "1")?.plus_hc();
            channels.push(LindbladChannel::with_rate(p.gamma_flip, &flip)?);
        }
    }
    if p.gamma > 0.0 {
        channels.extend(decay_channels(&basis, "r", &["0", "1"], p.gamma)?);
        channels.extend(decay_channels(&basis, "p", &["0", "1"], p.gamma)?);
    }
    Ok(Model { basis, terms, channels })
}

/// Six single-error couplings at `Ω₂` plus the engineered channels.
///
/// The flipped atom is excited while the other two stay put, so `|011⟩`
/// couples to `|p11⟩` and `L_e` on the same atom returns it to `|111⟩`.
pub fn build_qec_effective(p: &QecParams) -> Result<Model> {
    p.validate()?;
    let basis = basis()?;
    let w = p.omega2;
    let h = transitions(
        &basis,
        &[
            (w, "100", "r00"),
            (w, "010", "0r0"),
            (w, "001", "00r"),
            (w, "110", "11p"),
            (w, "101", "1p1"),
            (w, "011", "p11"),
        ],
    )?
    .plus_hc();
    let channels = engineered_channels(&basis, p.kappa_e)?;
    Ok(Model { basis, terms: vec![HamiltonianTerm::Static(h)], channels })
}
