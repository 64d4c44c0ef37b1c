//! Matrix Market readers and writers for Hermitian operators and vectors.
//!
//! Reading accepts coordinate and array formats with real, integer, or
//! complex fields and general, symmetric, or hermitian qualifiers; general
//! inputs are verified Hermitian before construction. Writing emits the
//! lower triangle in coordinate format (real symmetric or complex
//! hermitian) with 17-significant-digit values, so files round-trip
//! bit-exactly.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::HermitianOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MmFormat {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MmField {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MmSymmetry {
    General,
    Symmetric,
    Hermitian,
}

struct Header {
    format: MmFormat,
    field: MmField,
    symmetry: MmSymmetry,
}

fn parse_header(line: &str) -> Result<Header> {
    let tokens: Vec<String> = line.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(Error::parse(format!("not a MatrixMarket matrix header: {line:?}")));
    }
    let format = match tokens[2].as_str() {
        "coordinate" => MmFormat::Coordinate,
        "array" => MmFormat::Array,
        other => return Err(Error::parse(format!("unsupported format {other:?}"))),
    };
    let field = match tokens[3].as_str() {
        "real" | "integer" => MmField::Real,
        "complex" => MmField::Complex,
        other => return Err(Error::parse(format!("unsupported field {other:?}"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => MmSymmetry::General,
        "symmetric" => MmSymmetry::Symmetric,
        "hermitian" => MmSymmetry::Hermitian,
        other => return Err(Error::parse(format!("unsupported symmetry {other:?}"))),
    };
    if field == MmField::Complex && symmetry == MmSymmetry::Symmetric {
        return Err(Error::parse(
            "complex symmetric is not Hermitian; use the hermitian qualifier",
        ));
    }
    Ok(Header { format, field, symmetry })
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().skip(1).map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('%'))
}

fn parse_f64(token: &str) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|_| Error::parse(format!("bad numeric token {token:?}")))
}

fn parse_value(tokens: &[&str], field: MmField, line: &str) -> Result<Complex64> {
    match field {
        MmField::Real => {
            if tokens.len() != 1 {
                return Err(Error::parse(format!("expected one real value in {line:?}")));
            }
            Ok(Complex64::new(parse_f64(tokens[0])?, 0.0))
        }
        MmField::Complex => {
            if tokens.len() != 2 {
                return Err(Error::parse(format!("expected re and im in {line:?}")));
            }
            Ok(Complex64::new(parse_f64(tokens[0])?, parse_f64(tokens[1])?))
        }
    }
}

/// Entries with |i - j| <= 1 and real values admit banded storage.
fn try_tridiagonal(n: usize, entries: &[(usize, usize, Complex64)]) -> Option<HermitianOperator> {
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    for &(i, j, v) in entries {
        if v.im != 0.0 {
            return None;
        }
        let (lo, hi) = if i >= j { (j, i) } else { (i, j) };
        if hi - lo > 1 {
            return None;
        }
        if hi == lo {
            diag[lo] += v.re;
        } else {
            off[lo] += v.re;
        }
    }
    Some(HermitianOperator::tridiagonal(diag, off))
}

/// Check a_ij = conj(a_ji) on a fully stored entry set, then keep the
/// lower triangle.
fn fold_general(
    entries: Vec<(usize, usize, Complex64)>,
) -> Result<Vec<(usize, usize, Complex64)>> {
    use std::collections::BTreeMap;
    let mut map: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
    for (i, j, v) in entries {
        *map.entry((i, j)).or_insert(Complex64::new(0.0, 0.0)) += v;
    }
    let scale = map.values().map(|v| v.norm()).fold(0.0_f64, f64::max).max(1.0);
    for (&(i, j), &v) in &map {
        let mirror = map.get(&(j, i)).copied().unwrap_or(Complex64::new(0.0, 0.0));
        if (v - mirror.conj()).norm() > 1e-12 * scale {
            return Err(Error::parse(format!(
                "general input is not Hermitian at ({}, {}): {} vs conj {}",
                i + 1,
                j + 1,
                v,
                mirror
            )));
        }
    }
    Ok(map.into_iter().filter(|&((i, j), _)| i >= j).map(|((i, j), v)| (i, j, v)).collect())
}

/// Parse a Hermitian operator from Matrix Market text. Coordinate inputs
/// keep sparse (or banded, when tridiagonal) storage; array inputs become
/// dense.
pub fn parse_operator(text: &str) -> Result<HermitianOperator> {
    let first = text.lines().next().ok_or_else(|| Error::parse("empty matrix file"))?;
    let header = parse_header(first)?;
    let mut lines = data_lines(text);
    let size_line = lines.next().ok_or_else(|| Error::parse("missing size line"))?;
    let dims: Vec<&str> = size_line.split_whitespace().collect();

    match header.format {
        MmFormat::Coordinate => {
            if dims.len() != 3 {
                return Err(Error::parse(format!("coordinate size line needs m n nnz: {size_line:?}")));
            }
            let m: usize = dims[0].parse().map_err(|_| Error::parse("bad row count"))?;
            let n: usize = dims[1].parse().map_err(|_| Error::parse("bad column count"))?;
            let nnz: usize = dims[2].parse().map_err(|_| Error::parse("bad entry count"))?;
            if m != n {
                return Err(Error::parse(format!("matrix must be square, got {m} x {n}")));
            }
            let mut entries = Vec::with_capacity(nnz);
            for line in lines {
                let t: Vec<&str> = line.split_whitespace().collect();
                if t.len() < 3 {
                    return Err(Error::parse(format!("short coordinate line {line:?}")));
                }
                let i: usize = t[0].parse().map_err(|_| Error::parse("bad row index"))?;
                let j: usize = t[1].parse().map_err(|_| Error::parse("bad column index"))?;
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(Error::parse(format!("index out of range in {line:?}")));
                }
                let v = parse_value(&t[2..], header.field, line)?;
                entries.push((i - 1, j - 1, v));
            }
            if entries.len() != nnz {
                return Err(Error::parse(format!(
                    "entry count mismatch: header says {nnz}, found {}",
                    entries.len()
                )));
            }
            let lower = match header.symmetry {
                MmSymmetry::General => fold_general(entries)?,
                _ => entries,
            };
            if let Some(t) = try_tridiagonal(n, &lower) {
                return Ok(t);
            }
            Ok(HermitianOperator::sparse(n, lower))
        }
        MmFormat::Array => {
            if dims.len() != 2 {
                return Err(Error::parse(format!("array size line needs m n: {size_line:?}")));
            }
            let m: usize = dims[0].parse().map_err(|_| Error::parse("bad row count"))?;
            let n: usize = dims[1].parse().map_err(|_| Error::parse("bad column count"))?;
            if m != n {
                return Err(Error::parse(format!("matrix must be square, got {m} x {n}")));
            }
            let values: Vec<Complex64> = lines
                .map(|line| {
                    let t: Vec<&str> = line.split_whitespace().collect();
                    parse_value(&t, header.field, line)
                })
                .collect::<Result<_>>()?;
            // array data runs down columns; symmetric/hermitian files hold
            // only rows j..n of column j
            let mut full = vec![Complex64::new(0.0, 0.0); n * n];
            match header.symmetry {
                MmSymmetry::General => {
                    if values.len() != n * n {
                        return Err(Error::parse(format!(
                            "dense array needs {} values, found {}",
                            n * n,
                            values.len()
                        )));
                    }
                    for j in 0..n {
                        for i in 0..n {
                            full[i * n + j] = values[j * n + i];
                        }
                    }
                    let entries: Vec<(usize, usize, Complex64)> = (0..n)
                        .flat_map(|i| (0..n).map(move |j| (i, j)))
                        .map(|(i, j)| (i, j, full[i * n + j]))
                        .collect();
                    let lower = fold_general(entries)?;
                    let mut packed = vec![Complex64::new(0.0, 0.0); n * (n + 1) / 2];
                    for (i, j, v) in lower {
                        packed[i * (i + 1) / 2 + j] = v;
                    }
                    Ok(HermitianOperator::dense_from_lower(n, packed))
                }
                _ => {
                    if values.len() != n * (n + 1) / 2 {
                        return Err(Error::parse(format!(
                            "triangular array needs {} values, found {}",
                            n * (n + 1) / 2,
                            values.len()
                        )));
                    }
                    let mut packed = vec![Complex64::new(0.0, 0.0); n * (n + 1) / 2];
                    let mut it = values.into_iter();
                    for j in 0..n {
                        for i in j..n {
                            packed[i * (i + 1) / 2 + j] = it.next().expect("counted");
                        }
                    }
                    Ok(HermitianOperator::dense_from_lower(n, packed))
                }
            }
        }
    }
}

fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_entry(v: Complex64, complex: bool) -> String {
    if complex {
        format!("{} {}", fmt_real(v.re), fmt_real(v.im))
    } else {
        fmt_real(v.re)
    }
}

/// Render the lower triangle in coordinate format: real symmetric when all
/// entries are real, complex hermitian otherwise. Deterministic row-major
/// entry order.
pub fn format_operator(op: &HermitianOperator) -> String {
    let complex = !op.is_real();
    let n = op.dim();
    let mut entries: Vec<(usize, usize, Complex64)> = Vec::new();
    match op {
        HermitianOperator::Dense { .. } => {
            for i in 0..n {
                for j in 0..=i {
                    entries.push((i, j, op.entry(i, j)));
                }
            }
        }
        HermitianOperator::Tridiagonal { diag, off } => {
            for (i, &d) in diag.iter().enumerate() {
                entries.push((i, i, Complex64::new(d, 0.0)));
                if i + 1 < n {
                    entries.push((i + 1, i, Complex64::new(off[i], 0.0)));
                }
            }
            entries.sort_by_key(|&(i, j, _)| (i, j));
        }
        HermitianOperator::Sparse { entries: stored, .. } => {
            entries = stored.clone();
            entries.sort_by_key(|&(i, j, _)| (i, j));
        }
    }
    let qualifier = if complex { "complex hermitian" } else { "real symmetric" };
    let mut out = format!("%%MatrixMarket matrix coordinate {qualifier}\n{n} {n} {}\n", entries.len());
    for (i, j, v) in entries {
        out.push_str(&format!("{} {} {}\n", i + 1, j + 1, fmt_entry(v, complex)));
    }
    out
}

/// Render a vector as a single-column dense array (real when possible).
pub fn format_vector(v: &[Complex64]) -> String {
    let complex = v.iter().any(|z| z.im != 0.0);
    let qualifier = if complex { "complex" } else { "real" };
    let mut out = format!("%%MatrixMarket matrix array {qualifier} general\n{} 1\n", v.len());
    for z in v {
        out.push_str(&fmt_entry(*z, complex));
        out.push('\n');
    }
    out
}

/// Parse a vector: a Matrix Market n-by-1 array, or plain text with one
/// value (or a re/im pair) per line.
pub fn parse_vector(text: &str) -> Result<Vec<Complex64>> {
    let first = text.lines().next().ok_or_else(|| Error::parse("empty vector file"))?;
    if first.trim_start().to_ascii_lowercase().starts_with("%%matrixmarket") {
        let header = parse_header(first)?;
        if header.format != MmFormat::Array || header.symmetry != MmSymmetry::General {
            return Err(Error::parse("vectors must be general dense arrays"));
        }
        let mut lines = data_lines(text);
        let size_line = lines.next().ok_or_else(|| Error::parse("missing size line"))?;
        let dims: Vec<&str> = size_line.split_whitespace().collect();
        if dims.len() != 2 || dims[1] != "1" {
            return Err(Error::parse(format!("vector size line must be `n 1`: {size_line:?}")));
        }
        let n: usize = dims[0].parse().map_err(|_| Error::parse("bad vector length"))?;
        let values: Vec<Complex64> = lines
            .map(|line| {
                let t: Vec<&str> = line.split_whitespace().collect();
                parse_value(&t, header.field, line)
            })
            .collect::<Result<_>>()?;
        if values.len() != n {
            return Err(Error::parse(format!("expected {n} values, found {}", values.len())));
        }
        Ok(values)
    } else {
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('%') && !l.starts_with('#'))
            .map(|line| {
                let t: Vec<&str> = line.split_whitespace().collect();
                match t.len() {
                    1 => Ok(Complex64::new(parse_f64(t[0])?, 0.0)),
                    2 => Ok(Complex64::new(parse_f64(t[0])?, parse_f64(t[1])?)),
                    _ => Err(Error::parse(format!("bad vector line {line:?}"))),
                }
            })
            .collect()
    }
}

pub fn read_operator(path: &Path) -> Result<HermitianOperator> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::parse(format!("{}: {e}", path.display())))?;
    parse_operator(&text).map_err(|e| Error::parse(format!("{}: {e}", path.display())))
}

pub fn write_operator(path: &Path, op: &HermitianOperator) -> Result<()> {
    Ok(fs::write(path, format_operator(op))?)
}

pub fn read_vector(path: &Path) -> Result<Vec<Complex64>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::parse(format!("{}: {e}", path.display())))?;
    parse_vector(&text).map_err(|e| Error::parse(format!("{}: {e}", path.display())))
}

pub fn write_vector(path: &Path, v: &[Complex64]) -> Result<()> {
    Ok(fs::write(path, format_vector(v))?)
}
