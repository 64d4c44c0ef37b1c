//! Hermitian operator storage and the generalized pair.
//!
//! Hermitian symmetry is enforced structurally: only one triangle is ever
//! stored, so entry(i,j) == conj(entry(j,i)) holds exactly by construction.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::lu;
use crate::linalg::tridiag;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A Hermitian matrix in one of three storages: packed dense lower triangle,
/// real symmetric tridiagonal, or general sparse coordinate list (lower
/// triangle entries only). Diagonal entries are real by construction.
#[derive(Debug, Clone)]
pub enum HermitianOperator {
    /// Row-major packed lower triangle including the diagonal:
    /// `lower[i*(i+1)/2 + j]` holds entry (i, j) for j <= i.
    Dense { n: usize, lower: Vec<Complex64> },
    /// Real symmetric tridiagonal: `diag.len() == n`, `off.len() == n - 1`.
    Tridiagonal { diag: Vec<f64>, off: Vec<f64> },
    /// Coordinate list of the lower triangle (i >= j), diagonal entries real.
    Sparse {
        n: usize,
        entries: Vec<(usize, usize, Complex64)>,
    },
}

impl HermitianOperator {
    /// Build dense storage from a full row-major matrix; the lower triangle
    /// is taken as the truth and diagonal imaginary parts are dropped.
    pub fn dense_from_full(n: usize, full: &[Complex64]) -> Self {
        assert_eq!(full.len(), n * n, "full matrix must be n*n");
        let mut lower = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in 0..=i {
                let v = full[i * n + j];
                lower.push(if i == j { Complex64::new(v.re, 0.0) } else { v });
            }
        }
        HermitianOperator::Dense { n, lower }
    }

    /// Build from a packed lower triangle (diagonal imaginary parts dropped).
    pub fn dense_from_lower(n: usize, mut lower: Vec<Complex64>) -> Self {
        assert_eq!(lower.len(), n * (n + 1) / 2, "packed triangle length");
        for i in 0..n {
            let d = &mut lower[i * (i + 1) / 2 + i];
            *d = Complex64::new(d.re, 0.0);
        }
        HermitianOperator::Dense { n, lower }
    }

    pub fn tridiagonal(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty(), "dimension must be >= 1");
        assert_eq!(off.len(), diag.len() - 1, "off-diagonal length");
        HermitianOperator::Tridiagonal { diag, off }
    }

    /// Build sparse storage; entries may name either triangle and are folded
    /// to the lower one, with duplicates summed and diagonals made real.
    pub fn sparse(n: usize, raw: Vec<(usize, usize, Complex64)>) -> Self {
        let mut map: std::collections::BTreeMap<(usize, usize), Complex64> =
            std::collections::BTreeMap::new();
        for (i, j, v) in raw {
            assert!(i < n && j < n, "entry ({i},{j}) out of range for n={n}");
            let (key, val) = if i >= j { ((i, j), v) } else { ((j, i), v.conj()) };
            *map.entry(key).or_insert(ZERO) += val;
        }
        let entries = map
            .into_iter()
            .map(|((i, j), v)| {
                if i == j {
                    (i, j, Complex64::new(v.re, 0.0))
                } else {
                    (i, j, v)
                }
            })
            .collect();
        HermitianOperator::Sparse { n, entries }
    }

    pub fn dim(&self) -> usize {
        match self {
            HermitianOperator::Dense { n, .. } => *n,
            HermitianOperator::Tridiagonal { diag, .. } => diag.len(),
            HermitianOperator::Sparse { n, .. } => *n,
        }
    }

    /// Entry (i, j), reconstructing the upper triangle by conjugation.
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        let (r, c, conj) = if i >= j { (i, j, false) } else { (j, i, true) };
        let v = match self {
            HermitianOperator::Dense { lower, .. } => lower[r * (r + 1) / 2 + c],
            HermitianOperator::Tridiagonal { diag, off } => {
                if r == c {
                    Complex64::new(diag[r], 0.0)
                } else if r == c + 1 {
                    Complex64::new(off[c], 0.0)
                } else {
                    ZERO
                }
            }
            HermitianOperator::Sparse { entries, .. } => entries
                .iter()
                .find(|&&(ei, ej, _)| ei == r && ej == c)
                .map(|&(_, _, v)| v)
                .unwrap_or(ZERO),
        };
        if conj {
            v.conj()
        } else {
            v
        }
    }

    /// Matrix-vector product A x.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(x.len(), n, "vector length must match dimension");
        let mut y = vec![ZERO; n];
        match self {
            HermitianOperator::Dense { n, lower } => {
                for i in 0..*n {
                    let row = i * (i + 1) / 2;
                    let mut s = lower[row + i] * x[i];
                    for j in 0..i {
                        let v = lower[row + j];
                        s += v * x[j];
                        y[j] += v.conj() * x[i];
                    }
                    y[i] += s;
                }
            }
            HermitianOperator::Tridiagonal { diag, off } => {
                for i in 0..diag.len() {
                    y[i] += diag[i] * x[i];
                }
                for i in 0..off.len() {
                    y[i] += off[i] * x[i + 1];
                    y[i + 1] += off[i] * x[i];
                }
            }
            HermitianOperator::Sparse { entries, .. } => {
                for &(i, j, v) in entries {
                    y[i] += v * x[j];
                    if i != j {
                        y[j] += v.conj() * x[i];
                    }
                }
            }
        }
        y
    }

    /// Full row-major dense copy (test scaffolding and dense fallbacks).
    pub fn to_full(&self) -> Vec<Complex64> {
        let n = self.dim();
        let mut full = vec![ZERO; n * n];
        match self {
            HermitianOperator::Dense { n, lower } => {
                for i in 0..*n {
                    for j in 0..=i {
                        let v = lower[i * (i + 1) / 2 + j];
                        full[i * n + j] = v;
                        full[j * n + i] = v.conj();
                    }
                }
            }
            HermitianOperator::Tridiagonal { diag, off } => {
                for i in 0..diag.len() {
                    full[i * n + i] = Complex64::new(diag[i], 0.0);
                }
                for i in 0..off.len() {
                    full[i * n + i + 1] = Complex64::new(off[i], 0.0);
                    full[(i + 1) * n + i] = Complex64::new(off[i], 0.0);
                }
            }
            HermitianOperator::Sparse { entries, .. } => {
                for &(i, j, v) in entries {
                    full[i * n + j] = v;
                    if i != j {
                        full[j * n + i] = v.conj();
                    }
                }
            }
        }
        full
    }

    /// True when every stored entry is real (operator is real symmetric).
    pub fn is_real(&self) -> bool {
        match self {
            HermitianOperator::Dense { lower, .. } => lower.iter().all(|v| v.im == 0.0),
            HermitianOperator::Tridiagonal { .. } => true,
            HermitianOperator::Sparse { entries, .. } => entries.iter().all(|&(_, _, v)| v.im == 0.0),
        }
    }

    /// Solve (A - sigma I) y = rhs by direct factorization: LU with partial
    /// pivoting for dense storage, banded elimination for tridiagonal, dense
    /// fallback for sparse. Near-singular factorizations surface as
    /// `Error::NearSingular` carrying the computed direction when finite.
    pub fn solve_shifted(&self, sigma: Complex64, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.dim();
        assert_eq!(rhs.len(), n, "rhs length must match dimension");
        match self {
            HermitianOperator::Tridiagonal { diag, off } => {
                let d: Vec<Complex64> = diag.iter().map(|&v| Complex64::new(v, 0.0) - sigma).collect();
                let e: Vec<Complex64> = off.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                tridiag::solve_tridiag(&d, &e, rhs)
            }
            _ => {
                let mut full = self.to_full();
                for i in 0..n {
                    full[i * n + i] -= sigma;
                }
                lu::solve_dense(n, full, rhs)
            }
        }
    }

    /// Positive-definiteness probe: a factorization attempt with all pivots
    /// strictly positive. Tridiagonal storage uses the LDL^T pivot scan.
    pub fn check_positive_definite(&self) -> Result<()> {
        match self {
            HermitianOperator::Tridiagonal { diag, off } => {
                // all pivots > 0 <=> no negatives and no breakdown on A - 0
                let (neg, breakdown) = tridiag::ldlt_negative_pivots(diag, off);
                if neg > 0 || breakdown {
                    return Err(Error::NotPositiveDefinite {
                        index: 0,
                        pivot: if breakdown { 0.0 } else { -1.0 },
                    });
                }
                Ok(())
            }
            _ => lu::cholesky_pd_check(self.dim(), &self.to_full()),
        }
    }
}

/// The generalized problem A v = lambda M v; `m` must be positive definite
/// (validated at construction by a factorization attempt).
#[derive(Debug, Clone)]
pub struct GeneralizedPair {
    pub a: HermitianOperator,
    pub m: HermitianOperator,
}

impl GeneralizedPair {
    pub fn new(a: HermitianOperator, m: HermitianOperator) -> Result<Self> {
        if a.dim() != m.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                got: m.dim(),
            });
        }
        m.check_positive_definite()?;
        Ok(GeneralizedPair { a, m })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// Solve (A - sigma M) z = rhs. Tridiagonal pairs stay banded; anything
    /// else densifies.
    pub fn solve_shifted(&self, sigma: Complex64, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.dim();
        assert_eq!(rhs.len(), n, "rhs length must match dimension");
        match (&self.a, &self.m) {
            (
                HermitianOperator::Tridiagonal { diag: da, off: oa },
                HermitianOperator::Tridiagonal { diag: dm, off: om },
            ) => {
                let d: Vec<Complex64> = da
                    .iter()
                    .zip(dm)
                    .map(|(&a, &m)| Complex64::new(a, 0.0) - sigma * m)
                    .collect();
                let e: Vec<Complex64> = oa
                    .iter()
                    .zip(om)
                    .map(|(&a, &m)| Complex64::new(a, 0.0) - sigma * m)
                    .collect();
                tridiag::solve_tridiag(&d, &e, rhs)
            }
            _ => {
                let mut full = self.a.to_full();
                let mfull = self.m.to_full();
                for (f, m) in full.iter_mut().zip(mfull) {
                    *f -= sigma * m;
                }
                lu::solve_dense(n, full, rhs)
            }
        }
    }
}
