//! Test-problem catalog, the Jacobi oracle, and seeded initial-vector
//! constructions shared by the experiment harness.

pub mod jacobi;
pub mod rng;

pub use jacobi::{oracle_eig, EigenDecomposition};

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::HermitianOperator;
use rng::{standard_complex_normal, standard_normal, stream_rng};

/// Catalog of named test matrices.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixSpec {
    /// diag(-1, s, 1) with s strictly inside (-1, 1).
    Diag3 { s: f64 },
    /// Tridiagonal, diagonal 2, off-diagonals 1; eigenvalues 2 + 2 cos(k pi / (n+1)).
    OneTwoOne { n: usize },
    /// Dimension 2n+1, diagonal |n+1-m| for m = 1..2n+1, off-diagonals 1.
    Wilkinson { n: usize },
    /// Five-point Laplacian on an m x m grid: diagonal blocks T (diag 4,
    /// off-diag -1), off-diagonal blocks -I; dimension m^2.
    Laplace2D { m: usize },
    /// Random sparse symmetric matrix: full N(0,1) diagonal, each strict
    /// lower-triangle entry present independently with probability `density`
    /// and value N(0,1). Deterministic under (n, density, seed).
    RandomSymmetric { n: usize, density: f64, seed: u64 },
}

impl MatrixSpec {
    pub fn dim(&self) -> usize {
        match self {
            MatrixSpec::Diag3 { .. } => 3,
            MatrixSpec::OneTwoOne { n } => *n,
            MatrixSpec::Wilkinson { n } => 2 * n + 1,
            MatrixSpec::Laplace2D { m } => m * m,
            MatrixSpec::RandomSymmetric { n, .. } => *n,
        }
    }
}

/// Materialize a catalog entry in its natural storage.
pub fn generate(spec: &MatrixSpec) -> Result<HermitianOperator> {
    match spec {
        MatrixSpec::Diag3 { s } => {
            if !(-1.0..1.0).contains(s) || *s <= -1.0 {
                return Err(Error::invalid(format!("Diag3 parameter s = {s} must lie in (-1, 1)")));
            }
            Ok(HermitianOperator::tridiagonal(vec![-1.0, *s, 1.0], vec![0.0, 0.0]))
        }
        MatrixSpec::OneTwoOne { n } => {
            if *n < 2 {
                return Err(Error::invalid("OneTwoOne needs n >= 2"));
            }
            Ok(HermitianOperator::tridiagonal(vec![2.0; *n], vec![1.0; *n - 1]))
        }
        MatrixSpec::Wilkinson { n } => {
            if *n < 1 {
                return Err(Error::invalid("Wilkinson needs n >= 1"));
            }
            let dim = 2 * n + 1;
            let diag: Vec<f64> = (1..=dim).map(|m| (m as f64 - (*n as f64 + 1.0)).abs()).collect();
            Ok(HermitianOperator::tridiagonal(diag, vec![1.0; dim - 1]))
        }
        MatrixSpec::Laplace2D { m } => {
            if *m < 2 {
                return Err(Error::invalid("Laplace2D needs m >= 2"));
            }
            let n = m * m;
            let mut entries = Vec::with_capacity(3 * n);
            for i in 0..*m {
                for j in 0..*m {
                    let k = i * m + j;
                    entries.push((k, k, Complex64::new(4.0, 0.0)));
                    if j > 0 {
                        entries.push((k, k - 1, Complex64::new(-1.0, 0.0)));
                    }
                    if i > 0 {
                        entries.push((k, k - m, Complex64::new(-1.0, 0.0)));
                    }
                }
            }
            Ok(HermitianOperator::sparse(n, entries))
        }
        MatrixSpec::RandomSymmetric { n, density, seed } => {
            if !(0.0..=1.0).contains(density) || *density <= 0.0 {
                return Err(Error::invalid(format!("density = {density} must lie in (0, 1]")));
            }
            if *n < 1 {
                return Err(Error::invalid("RandomSymmetric needs n >= 1"));
            }
            let mut rng = stream_rng(*seed, 0);
            let mut entries = Vec::new();
            // fixed draw order: diagonal first, then rows of the strict lower triangle
            for i in 0..*n {
                entries.push((i, i, Complex64::new(standard_normal(&mut rng), 0.0)));
            }
            for i in 1..*n {
                for j in 0..i {
                    let u: f64 = rand::Rng::gen(&mut rng);
                    let v = standard_normal(&mut rng);
                    if u < *density {
                        entries.push((i, j, Complex64::new(v, 0.0)));
                    }
                }
            }
            Ok(HermitianOperator::sparse(*n, entries))
        }
    }
}

/// Spectral decomposition of a catalog entry. OneTwoOne has the closed form
/// lambda_k = 2 + 2 cos(k pi / (n+1)), v_k(j) = sin(j k pi / (n+1)); other
/// kinds go through the Jacobi oracle.
pub fn decompose(spec: &MatrixSpec) -> Result<EigenDecomposition> {
    if let MatrixSpec::OneTwoOne { n } = spec {
        let n = *n;
        let h = std::f64::consts::PI / (n as f64 + 1.0);
        let scale = (2.0 / (n as f64 + 1.0)).sqrt();
        let mut values = Vec::with_capacity(n);
        let mut vectors = Vec::with_capacity(n);
        // ascending eigenvalues correspond to descending cosine index k = n..1
        for j in 0..n {
            let k = (n - j) as f64;
            values.push(2.0 + 2.0 * (k * h).cos());
            let mut v: Vec<Complex64> = (1..=n)
                .map(|row| Complex64::new(scale * (row as f64 * k * h).sin(), 0.0))
                .collect();
            linalg::fix_phase(&mut v);
            vectors.push(v);
        }
        return Ok(EigenDecomposition { values, vectors });
    }
    oracle_eig(&generate(spec)?)
}

/// Largest minus smallest eigenvalue.
pub fn spectral_spread(a: &HermitianOperator) -> Result<f64> {
    let d = oracle_eig(a)?;
    Ok(d.values[d.dim() - 1] - d.values[0])
}

/// Random dense Hermitian matrix with N(0,1) real diagonal and standard
/// complex normal strict lower triangle (equivalence-test workhorse).
pub fn random_hermitian_dense(n: usize, seed: u64) -> HermitianOperator {
    let mut rng = stream_rng(seed, 0);
    let mut lower = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in 0..i {
            let _ = j;
            lower.push(standard_complex_normal(&mut rng));
        }
        lower.push(Complex64::new(standard_normal(&mut rng), 0.0));
    }
    HermitianOperator::dense_from_lower(n, lower)
}

/// Seeded random unit vector in the span of all eigenvectors except
/// `target_index`: real standard-normal coefficients over the complement,
/// then normalized.
pub fn complement_vector_rng(
    decomp: &EigenDecomposition,
    target_index: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Complex64>> {
    let n = decomp.dim();
    assert!(target_index < n, "target index {target_index} out of range");
    assert!(n >= 2, "complement of a 1-dimensional space is empty");
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        // one draw per index, including the skipped one, keeps the stream
        // layout independent of target_index
        let cj = standard_normal(rng);
        if j == target_index {
            continue;
        }
        for (wi, vi) in w.iter_mut().zip(&decomp.vectors[j]) {
            *wi += cj * vi;
        }
    }
    linalg::normalize(&w)
}

/// x = cos(theta) v_target + sin(theta) w with w a seeded random unit vector
/// in the complement of the target eigenvector; angle_between(x, v_target)
/// equals theta to 1e-10.
pub fn initial_vector_with_angle(
    decomp: &EigenDecomposition,
    target_index: usize,
    theta: f64,
    seed: u64,
) -> Result<Vec<Complex64>> {
    let mut rng = stream_rng(seed, 0);
    initial_vector_with_angle_rng(decomp, target_index, theta, &mut rng)
}

/// As `initial_vector_with_angle` but drawing from a caller-owned stream
/// (the sweep and table experiments split one seed across many samples).
pub fn initial_vector_with_angle_rng(
    decomp: &EigenDecomposition,
    target_index: usize,
    theta: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Complex64>> {
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
        return Err(Error::invalid(format!("theta = {theta} must lie in (0, pi/2)")));
    }
    let w = complement_vector_rng(decomp, target_index, rng)?;
    let v = &decomp.vectors[target_index];
    let (c, s) = (theta.cos(), theta.sin());
    let x: Vec<Complex64> = v.iter().zip(&w).map(|(vi, wi)| c * vi + s * wi).collect();
    let got = linalg::angle_between(&x, v);
    assert!(
        (got - theta).abs() < 1e-10,
        "constructed angle {got} differs from requested {theta}"
    );
    Ok(x)
}

/// Interior barycentric lattice points at the given resolution:
/// (i, j, k) with i + j + k = r, all >= 1. Pair each with
/// `lattice_vector` to get the unit initial vector it represents.
pub fn simplex_lattice(r: usize) -> Vec<(usize, usize, usize)> {
    assert!(r >= 3, "resolution must admit an interior point");
    let mut pts = Vec::with_capacity((r - 1) * (r - 2) / 2);
    for i in 1..=r - 2 {
        for j in 1..=r - 1 - i {
            pts.push((i, j, r - i - j));
        }
    }
    pts
}

/// Unit vector for a barycentric lattice point.
pub fn lattice_vector(p: (usize, usize, usize)) -> Vec<Complex64> {
    let r: f64 = (p.0 + p.1 + p.2) as f64;
    let x = [
        Complex64::new(p.0 as f64 / r, 0.0),
        Complex64::new(p.1 as f64 / r, 0.0),
        Complex64::new(p.2 as f64 / r, 0.0),
    ];
    linalg::normalize(&x).expect("lattice points are nonzero")
}

/// Strictly positive barycentric grid, normalized to unit vectors.
pub fn simplex_grid(r: usize) -> Vec<Vec<Complex64>> {
    simplex_lattice(r).into_iter().map(lattice_vector).collect()
}
