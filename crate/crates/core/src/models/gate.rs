use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_params, decay_channels, pair_interactions, stark_cancellation, stark_shift, transitions, Model};
use crate::dynamics::HamiltonianTerm;
use crate::error::Result;
use crate::hilbert::{ProductBasis, PureState};

/// Three-qubit controlled-phase gate driven by pumping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateParams {
    pub omega1: f64,
    pub omega2: f64,
    pub delta: f64,
    pub u_rr: f64,
    /// Total Rydberg decay rate, split equally to `|0⟩` and `|1⟩`.
    pub gamma: f64,
    #[serde(default)]
    pub stark_cancel: bool,
}

impl Default for GateParams {
    fn default() -> Self {
        Self { omega1: 1.0, omega2: 0.05, delta: 58.0, u_rr: 58.0, gamma: 0.0, stark_cancel: false }
    }
}

impl GateParams {
    pub fn validate(&self) -> Result<()> {
        check_params(&[
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("delta", self.delta),
            ("u_rr", self.u_rr),
            ("gamma", self.gamma),
        ])
    }

    /// Gate time `π/Ω₂`.
    pub fn gate_time(&self) -> f64 {
        std::f64::consts::PI / self.omega2
    }
}

pub(crate) fn basis() -> Result<ProductBasis> {
    ProductBasis::uniform(3, &["0", "1", "r"])
}

/// Three atoms with both drives on every `1 ↔ r`, pairwise `U_rr|rr⟩⟨rr|`,
/// and decay `√(γ/2)|0(1)⟩ᵢ⟨r|`.
pub fn build_gate_full(p: &GateParams) -> Result<Model> {
    p.validate()?;
    let basis = basis()?;
    let up = basis.collective_operator("r", "1")?;
    let mut terms = vec![
        HamiltonianTerm::rotating(up.scale(p.omega1), p.delta)?,
        HamiltonianTerm::Static(up.scale(p.omega2).plus_hc()),
        HamiltonianTerm::Static(pair_interactions(&basis, &["r"], p.u_rr)?),
    ];
    if p.stark_cancel {
        terms.push(stark_cancellation(&basis, &[0, 1, 2], &[("1", "r")], stark_shift(p.omega1, p.delta))?);
    }
    let channels = decay_channels(&basis, "r", &["0", "1"], p.gamma)?;
    Ok(Model { basis, terms, channels })
}

/// `Ω₂(|r00⟩⟨100| + |0r0⟩⟨010| + |00r⟩⟨001|) + h.c.`
pub fn build_gate_effective(p: &GateParams) -> Result<Model> {
    p.validate()?;
    let basis = basis()?;
    let w = p.omega2;
    let h = transitions(&basis, &[(w, "r00", "100"), (w, "0r0", "010"), (w, "00r", "001")])?.plus_hc();
    Ok(Model { basis, terms: vec![HamiltonianTerm::Static(h)], channels: Vec::new() })
}

/// The product input `|ψ₀⟩ = (|0⟩+|1⟩)^{⊗3}/2√2` and the target `|ψ_s⟩`, which
/// flips the sign of the three single-excitation components.
pub fn gate_states() -> Result<(PureState, PureState)> {
    let basis = basis()?;
    let mut psi0 = Vec::new();
    let mut psis = Vec::new();
    for bits in 0..8u32 {
        let labels: Vec<&str> = (0..3).map(|k| if bits >> (2 - k) & 1 == 1 { "1" } else { "0" }).collect();
        let sign = if bits.count_ones() == 1 { -1.0 } else { 1.0 };
        psi0.push((Complex64::new(1.0, 0.0), labels.clone()));
        psis.push((Complex64::new(sign, 0.0), labels));
    }
    let build = |v: Vec<(Complex64, Vec<&str>)>| -> Result<PureState> {
        let refs: Vec<(Complex64, &[&str])> = v.iter().map(|(c, l)| (*c, l.as_slice())).collect();
        basis.superposition(&refs)
    };
    Ok((build(psi0)?, build(psis)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve_unitary, IntegratorConfig, Snapshot};
    use crate::models::test_util::{assert_hermitian_at_samples, element};
    use crate::observables::overlap_amplitude;

    #[test]
    fn full_model_structure() {
        let p = GateParams { gamma: 0.002, ..GateParams::default() };
        let m = build_gate_full(&p).unwrap();
        assert_eq!(m.dim(), 27);
        assert_eq!(m.channels.len(), 6);
        assert!((element(&m, "rrr", "rrr", 0.4).re - 3.0 * p.u_rr).abs() < 1e-12);
        assert_hermitian_at_samples(&m);
        let m0 = build_gate_full(&GateParams::default()).unwrap();
        assert!(m0.channels.is_empty());
    }

    #[test]
    fn effective_model_darkness() {
        let p = GateParams::default();
        let m = build_gate_effective(&p).unwrap();
        let h = m.static_hamiltonian().unwrap();
        for l in ["000", "110", "101", "011", "111"] {
            let labels: Vec<String> = l.chars().map(String::from).collect();
            let v = h.apply(&m.basis.ket(&labels).unwrap()).unwrap();
            assert_eq!(v.norm(), 0.0, "{l}");
        }
    }

    #[test]
    fn states() {
        let (psi0, psis) = gate_states().unwrap();
        assert!((psi0.norm() - 1.0).abs() < 1e-14);
        assert!((psi0.inner(&psis).unwrap().re - 0.25).abs() < 1e-14);
        for z in psi0.amplitudes().iter().filter(|z| z.norm() > 0.0) {
            assert!((z.re - 1.0 / 8f64.sqrt()).abs() < 1e-15);
        }
        assert!((overlap_amplitude(&psi0, &psis).unwrap() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn effective_gate_implements_phase() {
        let p = GateParams::default();
        let m = build_gate_effective(&p).unwrap();
        let t = p.gate_time();
        let cfg = IntegratorConfig::fixed(0.01).aligned(t, 1, 0.01);
        let k100 = m.basis.ket(&["1", "0", "0"]).unwrap();
        let traj = evolve_unitary(&m.terms, &k100, t, &cfg, &[]).unwrap();
        let Some(Snapshot::Pure(out)) = traj.final_state else { panic!() };
        let amp = k100.inner(&out).unwrap();
        assert!((amp.re + 1.0).abs() < 1e-9 && amp.im.abs() < 1e-9);

        let (psi0, psis) = gate_states().unwrap();
        let traj = evolve_unitary(&m.terms, &psi0, t, &cfg, &[]).unwrap();
        let Some(Snapshot::Pure(out)) = traj.final_state else { panic!() };
        assert!((overlap_amplitude(&out, &psis).unwrap() - 1.0).abs() < 1e-10);
    }
}
