//! Banded elimination for complex symmetric-structure tridiagonal systems
//! and the symmetric-indefinite pivot scan used for inertia counts.
//!
//! The LU here uses partial pivoting between the two candidate rows, which
//! introduces one extra superdiagonal of fill-in; storage is three diagonals
//! of U plus the single subdiagonal multiplier per step.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::lu::NEAR_SINGULAR_RTOL;

/// Solve T y = b where T has diagonal `d` and (symmetrically placed)
/// off-diagonal `e` (`e.len() == d.len() - 1`), all complex.
///
/// Mirrors the dense contract: `Err(NearSingular)` when the relative pivot
/// floor is crossed, with the back-substituted direction attached when finite.
pub fn solve_tridiag(d: &[Complex64], e: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = d.len();
    assert!(n >= 1, "empty system");
    assert_eq!(e.len(), n.saturating_sub(1), "off-diagonal length");
    assert_eq!(b.len(), n, "rhs length");

    // u0: main diagonal of U; u1, u2: first and second superdiagonals.
    let mut u0 = d.to_vec();
    let mut u1 = vec![Complex64::new(0.0, 0.0); n.saturating_sub(1)];
    let mut u2 = vec![Complex64::new(0.0, 0.0); n.saturating_sub(2)];
    if n > 1 {
        u1.copy_from_slice(e);
    }
    let mut rhs = b.to_vec();
    // Row below the pivot row at step k holds (low_d, low_u) = (e[k], d[k+1])
    // before elimination, with its own upper entry e[k+1] tracked as low_u2.
    let mut min_piv = f64::INFINITY;
    let mut max_piv: f64 = 0.0;
    let mut breakdown = false;

    let mut low_d;
    for k in 0..n - 1 {
        low_d = e[k];
        let low_u = d[k + 1];
        let low_u2 = if k + 2 < n { e[k + 1] } else { Complex64::new(0.0, 0.0) };
        // partial pivot between row k and row k+1
        if low_d.norm() > u0[k].norm() {
            let (a0, a1, a2) = (u0[k], u1[k], if k + 2 < n { u2[k] } else { Complex64::new(0.0, 0.0) });
            u0[k] = low_d;
            u1[k] = low_u;
            if k + 2 < n {
                u2[k] = low_u2;
            }
            low_d = a0;
            // the displaced pivot row becomes the "lower" row
            let (b0, b1) = (a1, a2);
            rhs.swap(k, k + 1);
            // eliminate
            let piv = u0[k];
            let piv_abs = piv.norm();
            min_piv = min_piv.min(piv_abs);
            max_piv = max_piv.max(piv_abs);
            if piv_abs == 0.0 {
                breakdown = true;
                continue;
            }
            let m = low_d / piv;
            let next_d = b0 - m * u1[k];
            let next_u = b1 - m * (if k + 2 < n { u2[k] } else { Complex64::new(0.0, 0.0) });
            let r = rhs[k + 1] - m * rhs[k];
            rhs[k + 1] = r;
            u0[k + 1] = next_d;
            if k + 2 < n {
                u1[k + 1] = next_u;
            }
        } else {
            let piv = u0[k];
            let piv_abs = piv.norm();
            min_piv = min_piv.min(piv_abs);
            max_piv = max_piv.max(piv_abs);
            if piv_abs == 0.0 {
                breakdown = true;
                continue;
            }
            let m = low_d / piv;
            let next_d = low_u - m * u1[k];
            let next_u = if k + 2 < n { low_u2 - m * u2[k] } else { Complex64::new(0.0, 0.0) };
            let r = rhs[k + 1] - m * rhs[k];
            rhs[k + 1] = r;
            u0[k + 1] = next_d;
            if k + 2 < n {
                u1[k + 1] = next_u;
            }
        }
    }
    let last = u0[n - 1].norm();
    min_piv = min_piv.min(last);
    max_piv = max_piv.max(last);
    if last == 0.0 {
        breakdown = true;
    }

    let near_singular = breakdown || min_piv < NEAR_SINGULAR_RTOL * max_piv;
    let solution = if breakdown {
        None
    } else {
        let mut y = rhs;
        y[n - 1] = y[n - 1] / u0[n - 1];
        if n >= 2 {
            for k in (0..n - 1).rev() {
                let mut s = y[k] - u1[k] * y[k + 1];
                if k + 2 < n {
                    s -= u2[k] * y[k + 2];
                }
                y[k] = s / u0[k];
            }
        }
        if y.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            Some(y)
        } else {
            None
        }
    };

    if near_singular {
        return Err(Error::NearSingular { direction: solution });
    }
    solution.ok_or(Error::NearSingular { direction: None })
}

/// LDL^T pivot scan of the real symmetric tridiagonal matrix with diagonal
/// `d` and off-diagonal `e`: returns (negative pivot count, exact breakdown).
/// By Sylvester's law the count equals the number of eigenvalues below zero.
pub fn ldlt_negative_pivots(d: &[f64], e: &[f64]) -> (usize, bool) {
    let n = d.len();
    assert_eq!(e.len(), n.saturating_sub(1));
    let mut count = 0usize;
    let mut piv = d[0];
    if piv < 0.0 {
        count += 1;
    }
    for i in 1..n {
        if piv == 0.0 {
            return (count, true);
        }
        piv = d[i] - e[i - 1] * e[i - 1] / piv;
        if piv < 0.0 {
            count += 1;
        }
    }
    (count, false)
}
