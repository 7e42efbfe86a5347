use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{c, Basis, QubitId, StateRegister};
use crate::{Error, Result, TOLERANCE};

/// Density operator on a small Hilbert space, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![c(0.0, 0.0); dim * dim] }
    }

    /// `|ψ⟩⟨ψ|`
    pub fn pure(psi: &[Complex64]) -> Self {
        let dim = psi.len();
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for k in 0..dim {
                m.data[r * dim + k] = psi[r] * psi[k].conj();
            }
        }
        m
    }

    /// Reduced state of `qs` (in the given order), tracing out the rest.
    pub fn reduced(reg: &StateRegister, qs: &[QubitId]) -> Result<Self> {
        let cols = reg.projections(qs, &Basis::computational(qs.len()))?;
        let dim = cols.len();
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for k in r..dim {
                let v: Complex64 = cols[r].iter().zip(&cols[k]).map(|(a, b)| a * b.conj()).sum();
                m.data[r * dim + k] = v;
                m.data[k * dim + r] = v.conj();
            }
        }
        Ok(m)
    }

    /// `Σ pᵢ ρᵢ`
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let dim = parts.first().map_or(0, |(_, m)| m.dim);
        let mut out = Self::zeros(dim);
        for (p, m) in parts {
            if m.dim != dim {
                return Err(Error::AmplitudeLength { qubits: dim, got: m.dim });
            }
            for (o, v) in out.data.iter_mut().zip(&m.data) {
                *o += v * *p;
            }
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|k| self.get(k, k).re).sum()
    }

    pub fn purity(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        // A Hermitian H = A + iB has the same spectrum as the real symmetric
        // [[A, -B], [B, A]], with every eigenvalue doubled.
        let n = self.dim;
        let m = 2 * n;
        let mut s = vec![0.0; m * m];
        for r in 0..n {
            for k in 0..n {
                let v = self.get(r, k);
                s[r * m + k] = v.re;
                s[(r + n) * m + k + n] = v.re;
                s[r * m + k + n] = -v.im;
                s[(r + n) * m + k] = v.im;
            }
        }
        let mut ev = jacobi_eigenvalues(&mut s, m);
        ev.sort_by(|a, b| a.total_cmp(b));
        ev.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        self.eigenvalues()
            .into_iter()
            .filter(|&l| l > TOLERANCE)
            .map(|l| -l * libm::log2(l))
            .sum()
    }
}

fn jacobi_eigenvalues(a: &mut [f64], n: usize) -> Vec<f64> {
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|r| (0..n).filter(move |&k| k != r).map(move |k| (r, k)))
            .map(|(r, k)| a[r * n + k] * a[r * n + k])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / libm::sqrt(t * t + 1.0);
                let sn = t * cs;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = cs * akp - sn * akq;
                    a[k * n + q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = cs * apk - sn * aqk;
                    a[q * n + k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    (0..n).map(|k| a[k * n + k]).collect()
}

/// Holevo quantity `S(Σ pᵢρᵢ) − Σ pᵢ S(ρᵢ)` of an ensemble, in bits.
pub fn holevo_chi(ensemble: &[(f64, DensityMatrix)]) -> Result<f64> {
    let avg = DensityMatrix::mixture(ensemble)?;
    let inner: f64 = ensemble.iter().map(|(p, m)| p * m.entropy()).sum();
    Ok((avg.entropy() - inner).max(0.0))
}
