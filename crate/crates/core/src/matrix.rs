//! Dense complex matrices.
//!
//! Storage is row-major `Vec<Complex64>`. Every other module builds on this
//! type: gates, Kraus operators, density matrices and accumulated propagators
//! are all `ComplexMatrix` values. Dimensions stay at or below 4096, so dense
//! storage is used throughout; structured gate application lives in
//! [`crate::gates`] as algorithms over this type.
//!
//! The module also reads and writes the plain-text matrix format used by the
//! command line:
//!
//! ```text
//! # comment lines start with '#'
//! 2 2
//! 0.7071067811865476 0  0.7071067811865476 0
//! 0.7071067811865476 0 -0.7071067811865476 0
//! ```
//!
//! The first non-comment line holds `rows cols`; the remaining tokens are
//! `rows * cols` whitespace separated `re im` pairs in row-major order.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, shape, Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, checking the entry count and
    /// that every entry is finite.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(shape(format!("matrix dimensions must be positive, got {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid(format!(
                "entry ({}, {}) is not finite",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Real-valued convenience constructor.
    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(rows, cols, values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    /// Square diagonal matrix.
    pub fn diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// Fills a matrix entry by entry. The closure must return finite values.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        debug_assert!(data.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        Self { rows, cols, data }
    }

    /// Matrix with entry 1 at `(perm[k], k)` and 0 elsewhere.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        validate_permutation(perm)?;
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for (k, &target) in perm.iter().enumerate() {
            m.data[target * n + k] = ONE;
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    /// Standard matrix product `self * other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let n = other.cols;
        let mut out = vec![ZERO; self.rows * n];
        out.par_chunks_mut(n).enumerate().for_each(|(i, out_row)| {
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        });
        Ok(Self {
            rows: self.rows,
            cols: n,
            data: out,
        })
    }

    /// Kronecker product; indices of `self` are the most significant.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![ZERO; rows * cols];
        data.par_chunks_mut(cols).enumerate().for_each(|(r, out_row)| {
            let (ia, ib) = (r / other.rows, r % other.rows);
            for (ja, &a) in self.row(ia).iter().enumerate() {
                let block = &mut out_row[ja * other.cols..(ja + 1) * other.cols];
                for (o, &b) in block.iter_mut().zip(other.row(ib)) {
                    *o = a * b;
                }
            }
        });
        Self { rows, cols, data }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn trace(&self) -> Result<C64> {
        self.require_square()?;
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }

    /// Largest entry magnitude of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// True iff the max-norm of `self^dagger * self - I` is at most `tol`.
    pub fn is_unitary(&self, tol: f64) -> Result<bool> {
        self.require_square()?;
        let n = self.rows;
        // Column inner products, computed without materializing the adjoint.
        let worst = (0..n)
            .into_par_iter()
            .map(|j| {
                let mut worst = 0.0f64;
                for k in 0..n {
                    let mut acc = ZERO;
                    for i in 0..n {
                        acc += self.get(i, j).conj() * self.get(i, k);
                    }
                    let target = if j == k { ONE } else { ZERO };
                    worst = worst.max((acc - target).norm());
                }
                worst
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(0.0, f64::max);
        Ok(worst <= tol)
    }

    pub fn is_hermitian(&self, tol: f64) -> Result<bool> {
        self.require_square()?;
        let n = self.rows;
        for i in 0..n {
            for j in i..n {
                if (self.get(i, j) - self.get(j, i).conj()).norm() > tol {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub(crate) fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(shape(format!("expected a square matrix, got {}x{}", self.rows, self.cols)))
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        }
    }

    /// Parses the whitespace text format described in the module docs.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut numbers: Vec<f64> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tokens = line.split_whitespace();
            if header.is_none() {
                let parse_dim = |tok: Option<&str>| -> Result<usize> {
                    let tok = tok.ok_or_else(|| Error::Parse {
                        line: line_no,
                        message: "expected header `rows cols`".into(),
                    })?;
                    tok.parse::<usize>().ok().filter(|&d| d > 0).ok_or_else(|| Error::Parse {
                        line: line_no,
                        message: format!("invalid dimension `{tok}`"),
                    })
                };
                let rows = parse_dim(tokens.next())?;
                let cols = parse_dim(tokens.next())?;
                if let Some(extra) = tokens.next() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("unexpected token `{extra}` after header"),
                    });
                }
                header = Some((rows, cols));
                continue;
            }
            for tok in tokens {
                let x: f64 = tok.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("malformed number `{tok}`"),
                })?;
                numbers.push(x);
            }
        }
        let (rows, cols) = header.ok_or_else(|| Error::Parse {
            line: 1,
            message: "missing header `rows cols`".into(),
        })?;
        let expected = 2 * rows * cols;
        if numbers.len() != expected {
            return Err(Error::Parse {
                line: text.lines().count().max(1),
                message: format!("expected {expected} numbers (re im pairs), found {}", numbers.len()),
            });
        }
        let data = numbers.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect();
        Self::new(rows, cols, data)
    }

    /// Writes the text format with round-trip exact numbers.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|z| format!("{:?} {:?}", z.re, z.im)).collect();
            let _ = writeln!(out, "{}", line.join("  "));
        }
        out
    }
}

/// Checks that `perm` is a bijection on `0..perm.len()`.
pub fn validate_permutation(perm: &[usize]) -> Result<()> {
    if perm.is_empty() {
        return Err(invalid("permutation must be non-empty"));
    }
    let n = perm.len();
    let mut seen = vec![false; n];
    for (k, &p) in perm.iter().enumerate() {
        if p >= n {
            return Err(invalid(format!("permutation entry {k} maps to {p}, outside 0..{n}")));
        }
        if std::mem::replace(&mut seen[p], true) {
            return Err(invalid(format!("permutation repeats target index {p}")));
        }
    }
    Ok(())
}

/// Free-function forms mirroring the method API.
pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    a.dagger()
}

pub fn is_unitary(a: &ComplexMatrix, tol: f64) -> Result<bool> {
    a.is_unitary(tol)
}

pub fn permutation_matrix(perm: &[usize]) -> Result<ComplexMatrix> {
    ComplexMatrix::permutation(perm)
}
