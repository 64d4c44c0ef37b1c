//! Dense complex LU factorization with partial pivoting.
//!
//! Shifted systems (A - sigma I) y = b are re-factored from scratch on every
//! call; robustness over speed at the dimensions used here. The factorization
//! flags near-singularity (smallest pivot < 1e-14 times the largest) but still
//! completes whenever no pivot is exactly zero, so callers can recover the
//! dominant near-null direction by back-substitution.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative pivot threshold below which a factorization counts as singular.
pub const NEAR_SINGULAR_RTOL: f64 = 1e-14;

pub struct LuFactors {
    n: usize,
    /// Row-major packed L\U (unit lower diagonal implicit).
    lu: Vec<Complex64>,
    /// Row permutation: `perm[k]` is the original row in elimination slot k.
    perm: Vec<usize>,
    pub near_singular: bool,
    /// Set when a pivot is exactly zero; back-substitution is impossible.
    pub breakdown: bool,
}

/// Factor a row-major dense matrix in place.
pub fn factor(n: usize, mut a: Vec<Complex64>) -> LuFactors {
    assert_eq!(a.len(), n * n, "matrix buffer must be n*n");
    let mut perm: Vec<usize> = (0..n).collect();
    let mut min_piv = f64::INFINITY;
    let mut max_piv: f64 = 0.0;
    let mut breakdown = false;
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].norm();
        for r in k + 1..n {
            let v = a[r * n + k].norm();
            if v > best {
                best = v;
                p = r;
            }
        }
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            perm.swap(k, p);
        }
        let piv = a[k * n + k];
        let piv_abs = piv.norm();
        min_piv = min_piv.min(piv_abs);
        max_piv = max_piv.max(piv_abs);
        if piv_abs == 0.0 {
            breakdown = true;
            continue;
        }
        for r in k + 1..n {
            let m = a[r * n + k] / piv;
            a[r * n + k] = m;
            if m != Complex64::new(0.0, 0.0) {
                for c in k + 1..n {
                    let akc = a[k * n + c];
                    a[r * n + c] -= m * akc;
                }
            }
        }
    }
    let near_singular = breakdown || min_piv < NEAR_SINGULAR_RTOL * max_piv;
    LuFactors {
        n,
        lu: a,
        perm,
        near_singular,
        breakdown,
    }
}

impl LuFactors {
    /// Solve for one right-hand side. `None` on exact breakdown.
    pub fn solve(&self, b: &[Complex64]) -> Option<Vec<Complex64>> {
        if self.breakdown {
            return None;
        }
        let n = self.n;
        assert_eq!(b.len(), n, "rhs length must match dimension");
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..n {
            let mut s = b[self.perm[k]];
            for c in 0..k {
                s -= self.lu[k * n + c] * y[c];
            }
            y[k] = s;
        }
        for k in (0..n).rev() {
            let mut s = y[k];
            for c in k + 1..n {
                s -= self.lu[k * n + c] * y[c];
            }
            y[k] = s / self.lu[k * n + k];
        }
        if y.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            Some(y)
        } else {
            None
        }
    }
}

/// Factor and solve, mapping near-singularity to the crate error contract.
pub fn solve_dense(n: usize, a: Vec<Complex64>, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let f = factor(n, a);
    if f.near_singular {
        return Err(Error::NearSingular {
            direction: f.solve(b),
        });
    }
    f.solve(b).ok_or(Error::NearSingular { direction: None })
}

/// Cholesky positive-definiteness probe for a Hermitian row-major matrix.
/// Returns the pivot sequence error when some pivot is not strictly positive.
pub fn cholesky_pd_check(n: usize, a: &[Complex64]) -> Result<()> {
    let mut l = a.to_vec();
    for k in 0..n {
        let mut d = l[k * n + k].re;
        for c in 0..k {
            d -= l[k * n + c].norm_sqr();
        }
        if !(d > 0.0) {
            return Err(Error::NotPositiveDefinite { index: k, pivot: d });
        }
        let dk = d.sqrt();
        l[k * n + k] = Complex64::new(dk, 0.0);
        for r in k + 1..n {
            let mut s = l[r * n + k];
            for c in 0..k {
                s -= l[r * n + c] * l[k * n + c].conj();
            }
            l[r * n + k] = s / dk;
        }
    }
    Ok(())
}
