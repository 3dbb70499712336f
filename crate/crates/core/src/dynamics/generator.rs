use num_complex::Complex64;

use super::{common_dim, HamiltonianTerm, LindbladChannel};
use crate::error::Result;
use crate::hilbert::ComplexOperator;

type Entry = (usize, usize, Complex64);

fn sparse(op: &ComplexOperator) -> Vec<Entry> {
    let d = op.dim();
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let z = op.get(i, j);
            if z.re != 0.0 || z.im != 0.0 {
                out.push((i, j, z));
            }
        }
    }
    out
}

#[inline]
fn axpy(y: &mut [Complex64], a: Complex64, x: &[Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

#[derive(Debug, Clone)]
struct RotatingPart {
    a: Vec<Entry>,
    a_dag: Vec<Entry>,
    omega: f64,
}

/// Sparse compiled form of a master-equation generator.
///
/// Holds `K = H_static − ½i Σ L†L`, the rotating pieces of `H(t)` and the
/// recycling terms `Σ L ρ L†` flattened to `(out, in, coefficient)` triples.
#[derive(Debug, Clone)]
pub struct Generator {
    dim: usize,
    k_static: Vec<Entry>,
    rotating: Vec<RotatingPart>,
    recycling: Vec<(usize, usize, Complex64)>,
    max_omega: f64,
}

impl Generator {
    pub fn new(terms: &[HamiltonianTerm], channels: &[LindbladChannel]) -> Result<Self> {
        let dim = common_dim(terms, channels)?;
        let mut k = ComplexOperator::zeros(dim);
        let mut rotating = Vec::new();
        let mut max_omega = 0.0f64;
        for term in terms {
            match term {
                HamiltonianTerm::Static(h) => k = &k + h,
                HamiltonianTerm::Rotating { op, omega } => {
                    if *omega == 0.0 {
                        k = &k + &op.plus_hc();
                    } else {
                        max_omega = max_omega.max(omega.abs());
                        rotating.push(RotatingPart { a: sparse(op), a_dag: sparse(&op.dagger()), omega: *omega });
                    }
                }
            }
        }
        let mut recycling = std::collections::BTreeMap::<(usize, usize), Complex64>::new();
        let half_i = Complex64::new(0.0, -0.5);
        for ch in channels {
            let l = ch.operator();
            k = &k + &(&l.dagger() * l).scale(half_i);
            let entries = sparse(l);
            // (LρL†)[a][c] = Σ L[a][b] ρ[b][e] conj(L[c][e])
            for &(a, b, lab) in &entries {
                for &(c, e, lce) in &entries {
                    *recycling.entry((a * dim + c, b * dim + e)).or_default() += lab * lce.conj();
                }
            }
        }
        Ok(Self {
            dim,
            k_static: sparse(&k),
            rotating,
            recycling: recycling.into_iter().filter(|(_, v)| v.norm() > 0.0).map(|((o, i), v)| (o, i, v)).collect(),
            max_omega,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Largest |ω| among rotating terms (0 if there are none).
    pub fn max_abs_omega(&self) -> f64 {
        self.max_omega
    }

    pub fn has_dissipation(&self) -> bool {
        !self.recycling.is_empty()
    }

    /// Nonzero entries touched per evaluation; a rough cost measure.
    pub fn nnz(&self) -> usize {
        self.k_static.len()
            + self.rotating.iter().map(|r| r.a.len() + r.a_dag.len()).sum::<usize>()
            + self.recycling.len() / self.dim.max(1)
    }

    /// Diagonal of the static part of `K`.
    pub fn static_diagonal(&self) -> Vec<Complex64> {
        let mut diag = vec![Complex64::new(0.0, 0.0); self.dim];
        for &(i, j, v) in &self.k_static {
            if i == j {
                diag[i] += v;
            }
        }
        diag
    }

    /// `out = K(t)·X` for a row-major `X` with `cols` columns.
    fn apply_k(&self, t: f64, x: &[Complex64], cols: usize, out: &mut [Complex64]) {
        out.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for &(i, j, v) in &self.k_static {
            axpy(&mut out[i * cols..(i + 1) * cols], v, &x[j * cols..(j + 1) * cols]);
        }
        for r in &self.rotating {
            let ph = Complex64::from_polar(1.0, -r.omega * t);
            for &(i, j, v) in &r.a {
                axpy(&mut out[i * cols..(i + 1) * cols], v * ph, &x[j * cols..(j + 1) * cols]);
            }
            let phc = ph.conj();
            for &(i, j, v) in &r.a_dag {
                axpy(&mut out[i * cols..(i + 1) * cols], v * phc, &x[j * cols..(j + 1) * cols]);
            }
        }
    }

    /// Master-equation right-hand side for a Hermitian row-major `ρ`.
    ///
    /// Uses `ρK† = (Kρ)†`, valid only when `ρ = ρ†`; the result is exactly
    /// Hermitian up to the recycling sum.
    pub fn apply_hermitian(&self, t: f64, rho: &[Complex64], out: &mut [Complex64]) {
        let d = self.dim;
        self.apply_k(t, rho, d, out);
        for a in 0..d {
            let x = out[a * d + a];
            out[a * d + a] = Complex64::new(2.0 * x.im, 0.0);
            for b in a + 1..d {
                let xab = out[a * d + b];
                let xba = out[b * d + a];
                // -i(x_ab - conj(x_ba))
                let v = xab - xba.conj();
                out[a * d + b] = Complex64::new(v.im, -v.re);
                out[b * d + a] = Complex64::new(v.im, v.re);
            }
        }
        for &(o, i, c) in &self.recycling {
            out[o] += c * rho[i];
        }
    }

    /// Master-equation right-hand side for an arbitrary row-major `ρ`.
    pub fn apply_density(&self, t: f64, rho: &[Complex64], out: &mut [Complex64]) {
        let d = self.dim;
        // Kρ
        let mut x = vec![Complex64::new(0.0, 0.0); d * d];
        self.apply_k(t, rho, d, &mut x);
        // ρK† = (Kρ†)†
        let rho_dag: Vec<Complex64> = (0..d * d).map(|k| rho[(k % d) * d + k / d].conj()).collect();
        let mut y = vec![Complex64::new(0.0, 0.0); d * d];
        self.apply_k(t, &rho_dag, d, &mut y);
        let mi = Complex64::new(0.0, -1.0);
        for a in 0..d {
            for b in 0..d {
                out[a * d + b] = mi * (x[a * d + b] - y[b * d + a].conj());
            }
        }
        for &(o, i, c) in &self.recycling {
            out[o] += c * rho[i];
        }
    }

    /// Schrödinger right-hand side `−i H(t) ψ`. Dissipative parts of `K` are
    /// included, so this is only meaningful without channels.
    pub fn apply_vector(&self, t: f64, psi: &[Complex64], out: &mut [Complex64]) {
        self.apply_k(t, psi, 1, out);
        for z in out.iter_mut() {
            *z = Complex64::new(z.im, -z.re);
        }
    }
}
