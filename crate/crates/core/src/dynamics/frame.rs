use num_complex::Complex64;

use super::{HamiltonianTerm, LindbladChannel};
use crate::error::{Result, SimError};
use crate::hilbert::{check_dim, ComplexOperator};

const GAP_TOL: f64 = 1e-12;

type Entries = Vec<(usize, usize, Complex64)>;

/// Splits `m` into pieces whose nonzero entries share one gap `g_a − g_b`.
fn split_by_gap(m: &ComplexOperator, g: &[f64]) -> Vec<(f64, ComplexOperator)> {
    let d = m.dim();
    let mut groups: Vec<(f64, Entries)> = Vec::new();
    for a in 0..d {
        for b in 0..d {
            let z = m.get(a, b);
            if z.norm() == 0.0 {
                continue;
            }
            let gap = g[a] - g[b];
            match groups.iter_mut().find(|(x, _)| (x - gap).abs() <= GAP_TOL * (1.0 + gap.abs())) {
                Some((_, v)) => v.push((a, b, z)),
                None => groups.push((gap, vec![(a, b, z)])),
            }
        }
    }
    groups
        .into_iter()
        .map(|(gap, entries)| {
            let mut op = vec![Complex64::new(0.0, 0.0); d * d];
            for (a, b, z) in entries {
                op[a * d + b] = z;
            }
            (gap, ComplexOperator::from_row_major(d, &op).expect("square by construction"))
        })
        .collect()
}

/// Transforms a Hamiltonian into the frame `U(t) = exp(i·G·t)` for diagonal `G`.
///
/// Every rotating frequency is shifted by the level gaps it connects, a static
/// `−G` is added, and channels connecting levels with a single gap are kept
/// (their phase drops out of the dissipator).
pub fn rotating_frame(
    terms: &[HamiltonianTerm],
    generator: &ComplexOperator,
    channels: &[LindbladChannel],
) -> Result<(Vec<HamiltonianTerm>, Vec<LindbladChannel>)> {
    let d = generator.dim();
    let off = generator.off_diagonal_max();
    if off > GAP_TOL {
        return Err(SimError::NonDiagonalGenerator(off));
    }
    let herm = generator.hermiticity_error();
    if herm > GAP_TOL {
        return Err(SimError::NotHermitian(herm));
    }
    let g: Vec<f64> = (0..d).map(|k| generator.get(k, k).re).collect();

    let mut statics = ComplexOperator::zeros(d);
    let mut rotating: Vec<(f64, ComplexOperator)> = Vec::new();
    let mut push_rot = |omega: f64, op: ComplexOperator, statics: &mut ComplexOperator| {
        if omega.abs() <= GAP_TOL * (1.0 + omega.abs()) {
            *statics = &*statics + &op.plus_hc();
            return;
        }
        match rotating.iter_mut().find(|(w, _)| (w - omega).abs() <= GAP_TOL * (1.0 + omega.abs())) {
            Some((_, acc)) => *acc = &*acc + &op,
            None => rotating.push((omega, op)),
        }
    };
    for term in terms {
        check_dim(d, term.dim())?;
        match term {
            HamiltonianTerm::Static(h) => {
                for (gap, piece) in split_by_gap(h, &g) {
                    if gap.abs() <= GAP_TOL * (1.0 + gap.abs()) {
                        statics = &statics + &piece;
                    } else if gap > 0.0 {
                        // the gap < 0 piece is its adjoint
                        push_rot(-gap, piece, &mut statics);
                    }
                }
            }
            HamiltonianTerm::Rotating { op, omega } => {
                for (gap, piece) in split_by_gap(op, &g) {
                    push_rot(omega - gap, piece, &mut statics);
                }
            }
        }
    }
    statics = &statics - generator;

    let mut out = vec![HamiltonianTerm::Static(statics)];
    out.extend(rotating.into_iter().map(|(omega, op)| HamiltonianTerm::Rotating { op, omega }));

    for (k, ch) in channels.iter().enumerate() {
        check_dim(d, ch.dim())?;
        if split_by_gap(ch.operator(), &g).len() > 1 {
            return Err(SimError::MixedGapChannel(k));
        }
    }
    Ok((out, channels.to_vec()))
}
