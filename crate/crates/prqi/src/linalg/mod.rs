//! Dense and banded factorizations plus the vector kernels shared by every
//! solver: inner products, normalization with a deterministic phase fix,
//! Rayleigh quotients, residuals, and subspace angles.

pub mod lu;
pub mod tridiag;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{GeneralizedPair, HermitianOperator};

/// Inner product conjugate-linear in the first argument: sum conj(x_i) y_i.
pub fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    assert_eq!(x.len(), y.len(), "inner product length mismatch");
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Euclidean norm.
pub fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// M-weighted norm sqrt(x* M x); the quadratic form is real for Hermitian M
/// and nonnegative for the positive definite mass matrices used here.
pub fn m_norm(m: &HermitianOperator, x: &[Complex64]) -> f64 {
    dot(x, &m.apply(x)).re.max(0.0).sqrt()
}

/// Rotate a vector by a global phase so its largest-modulus entry (first one
/// on ties) is real and nonnegative. Fixes the U(1) gauge freedom so that
/// converged vectors are reproducible bit patterns.
pub fn fix_phase(x: &mut [Complex64]) {
    let mut idx = 0;
    let mut best = -1.0;
    for (i, v) in x.iter().enumerate() {
        let a = v.norm_sqr();
        if a > best {
            best = a;
            idx = i;
        }
    }
    let v = x[idx];
    let a = v.norm();
    if a == 0.0 {
        return;
    }
    let phase = v.conj() / a;
    for e in x.iter_mut() {
        *e *= phase;
    }
    // kill the roundoff imaginary part of the anchor entry
    x[idx] = Complex64::new(x[idx].re, 0.0);
}

/// Unit 2-norm copy with the phase convention applied.
pub fn normalize(x: &[Complex64]) -> Result<Vec<Complex64>> {
    let nrm = norm(x);
    if nrm == 0.0 || !nrm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let mut y: Vec<Complex64> = x.iter().map(|v| v / nrm).collect();
    fix_phase(&mut y);
    Ok(y)
}

/// Unit M-norm copy with the phase convention applied.
pub fn m_normalize(m: &HermitianOperator, x: &[Complex64]) -> Result<Vec<Complex64>> {
    let nrm = m_norm(m, x);
    if nrm == 0.0 || !nrm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let mut y: Vec<Complex64> = x.iter().map(|v| v / nrm).collect();
    fix_phase(&mut y);
    Ok(y)
}

/// Rayleigh quotient x* A x / x* x. The quadratic form of a Hermitian
/// operator is real up to roundoff; a loud assert guards the reduction.
pub fn rayleigh_quotient(a: &HermitianOperator, x: &[Complex64]) -> f64 {
    let num = dot(x, &a.apply(x));
    let den = x.iter().map(|v| v.norm_sqr()).sum::<f64>();
    assert!(den > 0.0, "Rayleigh quotient of the zero vector");
    let rho = num / den;
    assert!(
        rho.im.abs() <= 1e-10 * (1.0 + rho.re.abs()),
        "Rayleigh quotient has non-negligible imaginary part {:e}",
        rho.im
    );
    rho.re
}

/// Generalized Rayleigh quotient x* A x / x* M x.
pub fn generalized_rayleigh_quotient(p: &GeneralizedPair, x: &[Complex64]) -> f64 {
    let num = dot(x, &p.a.apply(x));
    let den = dot(x, &p.m.apply(x));
    assert!(den.re > 0.0, "mass quadratic form must be positive");
    let rho = num / den;
    assert!(
        rho.im.abs() <= 1e-10 * (1.0 + rho.re.abs()),
        "generalized Rayleigh quotient has non-negligible imaginary part {:e}",
        rho.im
    );
    rho.re
}

/// Residual A x - mu x.
pub fn residual(a: &HermitianOperator, x: &[Complex64], mu: f64) -> Vec<Complex64> {
    let mut r = a.apply(x);
    for (ri, xi) in r.iter_mut().zip(x) {
        *ri -= mu * xi;
    }
    r
}

/// Generalized residual A x - mu M x.
pub fn generalized_residual(p: &GeneralizedPair, x: &[Complex64], mu: f64) -> Vec<Complex64> {
    let mut r = p.a.apply(x);
    let mx = p.m.apply(x);
    for (ri, mi) in r.iter_mut().zip(mx) {
        *ri -= mu * mi;
    }
    r
}

/// Acute angle between the complex lines spanned by x and y:
/// arccos(|<x, y>| / (||x|| ||y||)), clamped into [0, pi/2].
pub fn angle_between(x: &[Complex64], y: &[Complex64]) -> f64 {
    let nx = norm(x);
    let ny = norm(y);
    assert!(nx > 0.0 && ny > 0.0, "angle with a zero vector");
    let c = (dot(x, y).norm() / (nx * ny)).clamp(0.0, 1.0);
    c.acos()
}

/// Angle to a target line computed from the orthogonal decomposition,
/// theta = atan2(||P_perp x||, |<t, x>|). Agrees with `angle_between` but
/// stays accurate down to machine precision for tiny angles, where the
/// arccos form saturates near sqrt(eps).
pub fn angle_to_target(x: &[Complex64], target: &[Complex64]) -> f64 {
    let nx = norm(x);
    let nt = norm(target);
    assert!(nx > 0.0 && nt > 0.0, "angle with a zero vector");
    let c = dot(target, x) / (nt * nx);
    let mut perp_sq = 0.0;
    for (xi, ti) in x.iter().zip(target) {
        let p = xi / nx - c * ti / nt;
        perp_sq += p.norm_sqr();
    }
    perp_sq.max(0.0).sqrt().atan2(c.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag3() -> HermitianOperator {
        HermitianOperator::tridiagonal(vec![-1.0, 0.1, 1.0], vec![0.0, 0.0])
    }

    #[test]
    fn rayleigh_quotient_of_uniform_vector() {
        let s = 1.0 / 3.0_f64.sqrt();
        let x = vec![c(s, 0.0); 3];
        let rq = rayleigh_quotient(&diag3(), &x);
        // (-1 + 0.1 + 1) / 3 = 1/30
        assert!((rq - 1.0 / 30.0).abs() < 1e-16, "rq = {rq}");
    }

    #[test]
    fn residual_norm_of_uniform_vector() {
        let s = 1.0 / 3.0_f64.sqrt();
        let x = vec![c(s, 0.0); 3];
        let a = diag3();
        let mu = rayleigh_quotient(&a, &x);
        let rn = norm(&residual(&a, &x, mu));
        // sqrt(602)/30
        assert!((rn - 0.8178562764256866).abs() < 1e-15, "||r|| = {rn:.16}");
    }

    #[test]
    fn normalize_applies_phase_convention() {
        let y = normalize(&[c(0.0, 0.0), c(0.0, 2.0), c(0.0, 0.0)]).unwrap();
        assert!((y[1] - c(1.0, 0.0)).norm() < 1e-15, "pure-imaginary spike becomes e2");
        let y = normalize(&[c(3.0, 0.0), c(4.0, 0.0)]).unwrap();
        assert!((y[0] - c(0.6, 0.0)).norm() < 1e-15);
        assert!((y[1] - c(0.8, 0.0)).norm() < 1e-15);
        assert!(normalize(&[c(0.0, 0.0)]).is_err(), "zero vector rejected");
    }

    #[test]
    fn phase_convention_invariant_under_global_phase() {
        let base = [c(0.3, -0.4), c(0.8, 0.1), c(-0.2, 0.2)];
        let y0 = normalize(&base).unwrap();
        let phase = c(0.6, 0.8); // unit modulus
        let rotated: Vec<Complex64> = base.iter().map(|v| v * phase).collect();
        let y1 = normalize(&rotated).unwrap();
        for (a, b) in y0.iter().zip(&y1) {
            assert!((a - b).norm() < 1e-14, "{a} vs {b}");
        }
    }

    #[test]
    fn angles_on_known_pairs() {
        let e1 = [c(1.0, 0.0), c(0.0, 0.0)];
        let e2 = [c(0.0, 0.0), c(1.0, 0.0)];
        let mid = [c(1.0, 0.0), c(1.0, 0.0)];
        assert_eq!(angle_between(&e1, &e1), 0.0);
        assert!((angle_between(&e1, &e2) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((angle_between(&e1, &mid) - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        // the angle is a property of complex lines: i*e1 is the same line
        let ie1 = [c(0.0, 1.0), c(0.0, 0.0)];
        assert!(angle_between(&e1, &ie1) < 1e-15);
    }

    #[test]
    fn tiny_angles_survive_the_atan2_form() {
        let t = [c(1.0, 0.0), c(0.0, 0.0)];
        let x = [c(1.0, 0.0), c(1e-9, 0.0)];
        let theta = angle_to_target(&x, &t);
        assert!(
            (theta - 1e-9).abs() < 1e-12 * 1e-9 + 1e-24,
            "theta = {theta:e}, arccos form would have saturated near sqrt(eps)"
        );
        // and it still agrees with angle_between at moderate angles
        let x2 = [c(1.0, 0.0), c(0.7, -0.3)];
        assert!((angle_to_target(&x2, &t) - angle_between(&x2, &t)).abs() < 1e-13);
    }

    #[test]
    fn mass_norms_and_generalized_quotient() {
        let m = HermitianOperator::tridiagonal(vec![1.0, 4.0], vec![0.0]);
        let x = [c(1.0, 0.0), c(1.0, 0.0)];
        assert!((m_norm(&m, &x) - 5.0_f64.sqrt()).abs() < 1e-15);
        let y = m_normalize(&m, &x).unwrap();
        assert!((m_norm(&m, &y) - 1.0).abs() < 1e-15);

        let a = HermitianOperator::tridiagonal(vec![2.0, 6.0], vec![0.0]);
        let p = GeneralizedPair::new(a, HermitianOperator::tridiagonal(vec![1.0, 2.0], vec![0.0])).unwrap();
        let rho = generalized_rayleigh_quotient(&p, &x);
        // (2 + 6) / (1 + 2) = 8/3
        assert!((rho - 8.0 / 3.0).abs() < 1e-15, "rho = {rho}");
        let r = generalized_residual(&p, &x, rho);
        // r = (2 - 8/3, 6 - 16/3) = (-2/3, 2/3)
        assert!((r[0] - c(-2.0 / 3.0, 0.0)).norm() < 1e-14);
        assert!((r[1] - c(2.0 / 3.0, 0.0)).norm() < 1e-14);
    }
}
