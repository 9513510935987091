//! Float bridge for eigenvalue-based tests.
//!
//! The characteristic polynomial is formed exactly and reduced to its square-free
//! part before any rounding happens, so repeated eigenvalues (Jordan blocks) come
//! out as simple, well-conditioned roots instead of an `O(sqrt(eps))` cluster.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use super::mat::Mat;
use super::poly::{backward_error, characteristic, simple_roots};

/// An eigenvalue with `|λ| >= 1 - UNIT_CIRCLE_TOL` counts as on or outside the unit circle.
pub const UNIT_CIRCLE_TOL: f64 = 1e-9;

/// Singular-value style cutoff for numeric rank decisions.
pub const RANK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotSquare {
    pub rows: usize,
    pub cols: usize,
}

impl fmt::Display for NotSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "expected a square matrix, got {}x{}", self.rows, self.cols)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralRadius {
    pub value: f64,
    /// Largest relative backward error over the computed eigenvalues.
    pub residual: f64,
    /// Within `UNIT_CIRCLE_TOL` of the unit circle.
    pub marginal: bool,
}

impl SpectralRadius {
    /// Strictly inside the unit circle, with the declared margin.
    pub fn is_schur_stable(&self) -> bool {
        self.value < 1.0 - UNIT_CIRCLE_TOL
    }
}

/// Distinct eigenvalues of `a`.
pub fn distinct_eigenvalues(a: &Mat) -> Result<(Vec<Complex64>, f64), NotSquare> {
    if !a.is_square() {
        return Err(NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let sf = characteristic(a).squarefree().to_f64();
    let roots = simple_roots(&sf);
    let residual = roots.iter().map(|&z| backward_error(&sf, z)).fold(0.0, f64::max);
    Ok((roots, residual))
}

pub fn spectral_radius(a: &Mat) -> Result<SpectralRadius, NotSquare> {
    let (roots, residual) = distinct_eigenvalues(a)?;
    let value = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(SpectralRadius { value, residual, marginal: libm::fabs(value - 1.0) < UNIT_CIRCLE_TOL })
}

/// Numeric rank of a complex matrix (row-major), Gaussian elimination with complete
/// pivoting; pivots below `tol · max(1, max|entry|)` count as zero.
pub fn numeric_rank(rows: usize, cols: usize, mut data: Vec<Complex64>, tol: f64) -> usize {
    let scale = data.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let cutoff = tol * scale;
    let mut rank = 0;
    let mut col_perm: Vec<usize> = (0..cols).collect();
    while rank < rows.min(cols) {
        let mut best = (rank, rank, 0.0);
        for i in rank..rows {
            for (jj, &j) in col_perm.iter().enumerate().skip(rank) {
                let v = data[i * cols + j].norm();
                if v > best.2 {
                    best = (i, jj, v);
                }
            }
        }
        if best.2 <= cutoff {
            break;
        }
        let (pi, pj, _) = best;
        if pi != rank {
            for j in 0..cols {
                data.swap(pi * cols + j, rank * cols + j);
            }
        }
        col_perm.swap(rank, pj);
        let pc = col_perm[rank];
        let pivot = data[rank * cols + pc];
        for i in rank + 1..rows {
            let f = data[i * cols + pc] / pivot;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for &j in &col_perm[rank..] {
                let v = data[rank * cols + j];
                data[i * cols + j] -= f * v;
            }
        }
        rank += 1;
    }
    rank
}

/// `rank [A − λI, B] == n` at numeric tolerance.
pub fn pbh_full_rank(a: &Mat, b: &Mat, lambda: Complex64) -> bool {
    let n = a.rows();
    let af = a.to_f64();
    let bf = b.to_f64();
    let cols = n + b.cols();
    let mut data = Vec::with_capacity(n * cols);
    for i in 0..n {
        for j in 0..n {
            let mut v = Complex64::new(af[i * n + j], 0.0);
            if i == j {
                v -= lambda;
            }
            data.push(v);
        }
        for j in 0..b.cols() {
            data.push(Complex64::new(bf[i * b.cols() + j], 0.0));
        }
    }
    numeric_rank(n, cols, data, RANK_TOL) == n
}
