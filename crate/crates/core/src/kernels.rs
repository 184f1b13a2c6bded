//! In-place row kernels for applying register-local operators to a
//! `2^n`-row matrix without materializing the full-register embedding.
//!
//! Row `r` of the operand corresponds to basis state `|r>`; qubit `q` is bit
//! `q` of `r`. Every kernel computes `G * A` for the relevant embedded `G`.

use rayon::prelude::*;

use crate::matrix::{ComplexMatrix, C64};

/// Calls `f(row0, lo, hi)` for every pair of rows `(row0, row0 | 1 << q)`
/// with bit `q` of `row0` clear.
fn for_each_row_pair<F>(m: &mut ComplexMatrix, q: usize, f: F)
where
    F: Fn(usize, &mut [C64], &mut [C64]) + Sync,
{
    let cols = m.cols();
    let stride = 1usize << q;
    let half = stride * cols;
    m.as_mut_slice()
        .par_chunks_mut(2 * half)
        .enumerate()
        .for_each(|(block, chunk)| {
            let (lo, hi) = chunk.split_at_mut(half);
            lo.par_chunks_mut(cols)
                .zip(hi.par_chunks_mut(cols))
                .enumerate()
                .for_each(|(r, (a, b))| f(block * 2 * stride + r, a, b));
        });
}

/// Applies a 2x2 matrix `u` (row-major) on qubit `q`.
pub(crate) fn apply_one_qubit(m: &mut ComplexMatrix, q: usize, u: [C64; 4]) {
    let [u00, u01, u10, u11] = u;
    for_each_row_pair(m, q, |_, a, b| {
        for (x, y) in a.iter_mut().zip(b.iter_mut()) {
            let (x0, y0) = (*x, *y);
            *x = u00 * x0 + u01 * y0;
            *y = u10 * x0 + u11 * y0;
        }
    });
}

/// Swaps the row pairs of qubit `target`, optionally only where bit
/// `control` is set (X and CNOT). Exact: no arithmetic is performed.
pub(crate) fn flip_rows(m: &mut ComplexMatrix, target: usize, control: Option<usize>) {
    for_each_row_pair(m, target, |row0, a, b| {
        if control.is_none_or(|c| row0 >> c & 1 == 1) {
            a.swap_with_slice(b);
        }
    });
}

/// Multiplies row `r` by `phase(r)` where it returns `Some`.
pub(crate) fn scale_rows<F>(m: &mut ComplexMatrix, phase: F)
where
    F: Fn(usize) -> Option<C64> + Sync,
{
    let cols = m.cols();
    m.as_mut_slice()
        .par_chunks_mut(cols)
        .enumerate()
        .for_each(|(r, row)| {
            if let Some(z) = phase(r) {
                row.iter_mut().for_each(|x| *x *= z);
            }
        });
}

/// Zeroes every row for which `keep(r)` is false (diagonal 0/1 projector).
pub(crate) fn project_rows<F>(m: &mut ComplexMatrix, keep: F)
where
    F: Fn(usize) -> bool + Sync,
{
    let cols = m.cols();
    m.as_mut_slice()
        .par_chunks_mut(cols)
        .enumerate()
        .for_each(|(r, row)| {
            if !keep(r) {
                row.fill(C64::new(0.0, 0.0));
            }
        });
}

/// Left-multiplies by the permutation matrix with entry 1 at `(perm[k], k)`,
/// i.e. row `k` moves to row `perm[k]`. Cycle-following, one spare row.
pub(crate) fn permute_rows(m: &mut ComplexMatrix, perm: &[usize]) {
    let cols = m.cols();
    debug_assert_eq!(perm.len(), m.rows());
    let data = m.as_mut_slice();
    let mut visited = vec![false; perm.len()];
    let mut carry = vec![C64::new(0.0, 0.0); cols];
    for start in 0..perm.len() {
        if visited[start] || perm[start] == start {
            visited[start] = true;
            continue;
        }
        carry.copy_from_slice(&data[start * cols..(start + 1) * cols]);
        visited[start] = true;
        let mut j = perm[start];
        while j != start {
            carry.swap_with_slice(&mut data[j * cols..(j + 1) * cols]);
            visited[j] = true;
            j = perm[j];
        }
        data[start * cols..(start + 1) * cols].copy_from_slice(&carry);
    }
}

/// Left-multiplies by the Grover diffusion matrix `D_ij = 2/N - delta_ij`.
pub(crate) fn diffuse_rows(m: &mut ComplexMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut sums = vec![C64::new(0.0, 0.0); cols];
    for r in 0..rows {
        for (s, &x) in sums.iter_mut().zip(m.row(r)) {
            *s += x;
        }
    }
    let scale = 2.0 / rows as f64;
    sums.iter_mut().for_each(|s| *s *= scale);
    m.as_mut_slice().par_chunks_mut(cols).for_each(|row| {
        for (x, &s) in row.iter_mut().zip(&sums) {
            *x = s - *x;
        }
    });
}
