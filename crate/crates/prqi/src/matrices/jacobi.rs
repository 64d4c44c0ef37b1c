//! Cyclic Jacobi eigendecomposition for complex Hermitian matrices.
//!
//! This is the test oracle: slow, simple, and accurate. Each rotation first
//! strips the phase of the targeted off-diagonal entry, then applies the
//! classic real rotation with the smaller-angle root, which guarantees the
//! off-diagonal mass is nonincreasing.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::HermitianOperator;

const MAX_SWEEPS: usize = 100;
const OFF_RTOL: f64 = 1e-12;

/// Full spectral decomposition: `values` ascending, `vectors[k]` the unit
/// eigenvector for `values[k]` under the global phase convention.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Index of the eigenvalue closest to `x` (first one on ties).
    pub fn nearest_index(&self, x: f64) -> usize {
        let mut best = 0;
        let mut dist = f64::INFINITY;
        for (i, &v) in self.values.iter().enumerate() {
            let d = (v - x).abs();
            if d < dist {
                dist = d;
                best = i;
            }
        }
        best
    }
}

fn off_diag_frobenius_sq(n: usize, m: &[Complex64]) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[i * n + j].norm_sqr();
            }
        }
    }
    s
}

/// Diagonalize a Hermitian operator by cyclic Jacobi sweeps. Fails with
/// `OracleNoConvergence` if the off-diagonal Frobenius norm has not dropped
/// below 1e-12 of the matrix norm after 100 sweeps.
pub fn oracle_eig(a: &HermitianOperator) -> Result<EigenDecomposition> {
    let n = a.dim();
    let mut m = a.to_full();
    let norm_f = m.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let tol = OFF_RTOL * norm_f;

    // eigenvector accumulator, starts as identity
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }

    if n > 1 {
        let mut converged = false;
        for _sweep in 0..MAX_SWEEPS {
            if off_diag_frobenius_sq(n, &m).sqrt() <= tol {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = m[p * n + q];
                    let abs = apq.norm();
                    if abs == 0.0 {
                        continue;
                    }
                    // strip the phase, then the real rotation zeroing (p,q)
                    let phase = apq / abs; // e^{i phi}
                    let app = m[p * n + p].re;
                    let aqq = m[q * n + q].re;
                    let tau = (aqq - app) / (2.0 * abs);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        1.0 / (tau - (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let e_minus = phase.conj();
                    let e_plus = phase;

                    // columns p, q of M and of the accumulator: M <- M U
                    for k in 0..n {
                        let mkp = m[k * n + p];
                        let mkq = m[k * n + q];
                        m[k * n + p] = c * mkp - s * e_minus * mkq;
                        m[k * n + q] = s * mkp + c * e_minus * mkq;
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * e_minus * vkq;
                        v[k * n + q] = s * vkp + c * e_minus * vkq;
                    }
                    // rows p, q: M <- U* M
                    for k in 0..n {
                        let mpk = m[p * n + k];
                        let mqk = m[q * n + k];
                        m[p * n + k] = c * mpk - s * e_plus * mqk;
                        m[q * n + k] = s * mpk + c * e_plus * mqk;
                    }
                    // enforce the exact zeros and real diagonal this rotation created
                    m[p * n + q] = Complex64::new(0.0, 0.0);
                    m[q * n + p] = Complex64::new(0.0, 0.0);
                    m[p * n + p] = Complex64::new(m[p * n + p].re, 0.0);
                    m[q * n + q] = Complex64::new(m[q * n + q].re, 0.0);
                }
            }
        }
        if !converged && off_diag_frobenius_sq(n, &m).sqrt() > tol {
            return Err(Error::OracleNoConvergence(MAX_SWEEPS));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].re.partial_cmp(&m[j * n + j].re).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| m[i * n + i].re).collect();
    let vectors: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&col| {
            let mut vec_col: Vec<Complex64> = (0..n).map(|row| v[row * n + col]).collect();
            linalg::fix_phase(&mut vec_col);
            vec_col
        })
        .collect();
    Ok(EigenDecomposition { values, vectors })
}
