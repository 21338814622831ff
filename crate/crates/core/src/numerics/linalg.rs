//! Exact Gaussian elimination over ℚ.

use super::{Matrix, Scalar, Vector};
use crate::error::{ensure_dim, Result};

/// Reduced row echelon form of a row list with `cols` columns.
/// Returns the nonzero reduced rows and their pivot columns.
pub(crate) fn row_reduce(mut rows: Vec<Vec<Scalar>>, cols: usize) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip();
        if inv != Scalar::one() {
            for v in rows[rank].iter_mut().skip(col) {
                *v *= &inv;
            }
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *v -= &(&factor * p);
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    (rows, pivots)
}

/// Exact rank over ℚ.
pub fn rank(a: &Matrix) -> usize {
    row_reduce(a.to_rows(), a.cols()).1.len()
}

pub(crate) fn rank_of_rows(rows: &[Vector], cols: usize) -> usize {
    row_reduce(rows.iter().map(|r| r.entries().to_vec()).collect(), cols)
        .1
        .len()
}

/// Basis of the kernel {d : A·d = 0}; empty iff A has full column rank.
pub fn nullspace(a: &Matrix) -> Vec<Vector> {
    nullspace_of_rows(a.to_rows(), a.cols())
}

pub(crate) fn nullspace_of_rows(rows: Vec<Vec<Scalar>>, cols: usize) -> Vec<Vector> {
    let (reduced, pivots) = row_reduce(rows, cols);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut d = vec![Scalar::zero(); cols];
            d[free] = Scalar::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                d[p] = -&row[free];
            }
            Vector::new(d)
        })
        .collect()
}

/// Some exact solution of A·x = b (free variables set to zero), or `None`
/// if the system is inconsistent.
pub fn solve_linear(a: &Matrix, b: &Vector) -> Result<Option<Vector>> {
    ensure_dim(a.rows(), b.dim())?;
    let rows = (0..a.rows())
        .map(|r| {
            let mut row = a.row(r).to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();
    Ok(solve_augmented(rows, a.cols()))
}

/// Solves an augmented system `[A | b]` given as rows of length `cols + 1`.
pub(crate) fn solve_augmented(rows: Vec<Vec<Scalar>>, cols: usize) -> Option<Vector> {
    let (reduced, pivots) = row_reduce(rows, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); cols];
    for (row, &p) in reduced.iter().zip(&pivots) {
        x[p] = row[cols].clone();
    }
    Some(Vector::new(x))
}

/// Exact positive-semidefiniteness test by symmetric elimination with
/// diagonal pivoting (an LDLᵀ factorization that fails on a negative pivot).
pub fn is_positive_semidefinite(a: &Matrix) -> bool {
    if !a.is_symmetric() {
        return false;
    }
    let n = a.rows();
    let mut m: Vec<Vec<Scalar>> = a.to_rows();
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        if active.iter().any(|&i| m[i][i].is_negative()) {
            return false;
        }
        let Some(pos) = active.iter().position(|&i| m[i][i].is_positive()) else {
            // zero diagonal: PSD forces the whole remaining block to vanish
            return active
                .iter()
                .all(|&i| active.iter().all(|&j| m[i][j].is_zero()));
        };
        let p = active.swap_remove(pos);
        let pivot = m[p][p].clone();
        for &i in &active {
            if m[i][p].is_zero() {
                continue;
            }
            let factor = &m[i][p] / &pivot;
            for &j in &active {
                let delta = &factor * &m[p][j];
                m[i][j] -= &delta;
            }
        }
    }
    true
}
