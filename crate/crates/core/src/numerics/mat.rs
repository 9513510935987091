//! Dense exact-rational matrices and the elimination routines everything else is built on.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{denominator_lcm, int, parse_rational, to_f64, ParseRationalError, Rational};

/// Row-major dense matrix over the rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// `a · Q = b` has no exact solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoSolution;

impl fmt::Display for NoSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("right-hand side is not in the column space")
    }
}

/// Reduced row echelon form with the pivot column of every nonzero row.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub reduced: Mat,
    pub pivots: Vec<usize>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds from row-major entries. Panics when `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        Mat { rows, cols, data }
    }

    /// Builds from a list of equally long rows. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    /// Integer shorthand, mostly for tests and examples.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    pub fn column_vector(values: Vec<Rational>) -> Self {
        let n = values.len();
        Mat::from_vec(n, 1, values)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Unit vector `e_i` (0-based) in `R^dim` as a column.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut m = Mat::zeros(dim, 1);
        m[(i, 0)] = Rational::one();
        m
    }

    /// Columns `e_i` for each (0-based) index in order.
    pub fn unit_columns(dim: usize, indices: &[usize]) -> Self {
        let mut m = Mat::zeros(dim, indices.len());
        for (j, &i) in indices.iter().enumerate() {
            m[(i, j)] = Rational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row(&self, i: usize) -> Vec<Rational> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    /// Rows `start..end`.
    pub fn row_range(&self, start: usize, end: usize) -> Mat {
        Mat::from_fn(end - start, self.cols, |i, j| self[(start + i, j)].clone())
    }

    /// Columns `start..end`.
    pub fn col_range(&self, start: usize, end: usize) -> Mat {
        Mat::from_fn(self.rows, end - start, |i, j| self[(i, start + j)].clone())
    }

    pub fn without_column(&self, drop: usize) -> Mat {
        let keep: Vec<usize> = (0..self.cols).filter(|&j| j != drop).collect();
        self.select_columns(&keep)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// `[self, other]`. Panics on row mismatch.
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// `[self; other]`. Panics on column mismatch.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Matrix product. Panics on inner dimension mismatch.
    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "mul inner dimension mismatch");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Rational) -> Mat {
        let data = self.data.iter().map(|a| a * s).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + &self[(i, i)])
    }

    /// Exact rank by fraction-free (Bareiss) elimination on the denominator-cleared rows.
    ///
    /// Pivot search is leftmost column first, topmost row within a column.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                let l = denominator_lcm(row.iter());
                row.iter().map(|v| (v * Rational::from_integer(l.clone())).to_integer()).collect()
            })
            .collect();
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            for i in r + 1..rows {
                for j in c + 1..cols {
                    let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                    a[i][j] = v / &prev;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            r += 1;
        }
        r
    }

    /// Reduced row echelon form (Gauss-Jordan), leftmost pivots.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = &m[(r, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Indices of the leftmost linearly independent columns.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.echelon().pivots
    }

    /// Basis of the right null space, one column per free variable
    /// (free variable set to 1, the others to 0).
    pub fn kernel(&self) -> Mat {
        let Echelon { reduced, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Mat::zeros(self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k[(f, j)] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                k[(p, j)] = -reduced[(i, f)].clone();
            }
        }
        k
    }

    /// Any exact `Q` with `self · Q = rhs`: pivot variables from the reduced system,
    /// free variables fixed at zero.
    pub fn solve_right(&self, rhs: &Mat) -> Result<Mat, NoSolution> {
        assert_eq!(self.rows, rhs.rows, "solve_right row mismatch");
        let Echelon { reduced, pivots } = self.hstack(rhs).echelon();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(NoSolution);
        }
        let mut q = Mat::zeros(self.cols, rhs.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                q[(p, j)] = reduced[(i, self.cols + j)].clone();
            }
        }
        Ok(q)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() || self.rank() != self.rows {
            return None;
        }
        self.solve_right(&Mat::identity(self.rows)).ok()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(to_f64).collect()
    }

    /// Column-major stacking.
    pub fn vec(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self[(i, j)].clone());
            }
        }
        out
    }

    /// Inverse of [`Mat::vec`]. Panics when `v.len() != rows * cols`.
    pub fn vec_inv(v: &[Rational], rows: usize, cols: usize) -> Mat {
        assert_eq!(v.len(), rows * cols, "vec_inv length mismatch");
        Mat::from_fn(rows, cols, |i, j| v[j * rows + i].clone())
    }

    pub fn max_abs(&self) -> Rational {
        self.data.iter().map(Signed::abs).max().unwrap_or_else(Rational::zero)
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// Matrix literal: rows separated by `;`, entries by `,`.
impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 0 || self.cols == 0 {
            return write!(f, "[{}x{}]", self.rows, self.cols);
        }
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[{}]", self.rows, self.cols, self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseMatError {
    Entry { row: usize, col: usize, source: ParseRationalError },
    Ragged { row: usize, expected: usize, found: usize },
    Shape(String),
}

impl fmt::Display for ParseMatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseMatError::Entry { row, col, source } => {
                write!(f, "row {}, column {}: {}", row + 1, col + 1, source)
            }
            ParseMatError::Ragged { row, expected, found } => {
                write!(f, "row {} has {} entries, expected {}", row + 1, found, expected)
            }
            ParseMatError::Shape(s) => write!(f, "bad empty-matrix shape {s:?}"),
        }
    }
}

impl FromStr for Mat {
    type Err = ParseMatError;

    /// Accepts the literal written by `Display`, including the `[RxC]` form
    /// for matrices with a zero dimension.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let shape_err = || ParseMatError::Shape(t.to_string());
            let (r, c) = inner.split_once('x').ok_or_else(shape_err)?;
            let r: usize = r.trim().parse().map_err(|_| shape_err())?;
            let c: usize = c.trim().parse().map_err(|_| shape_err())?;
            if r != 0 && c != 0 {
                return Err(shape_err());
            }
            return Ok(Mat::zeros(r, c));
        }
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for (i, line) in t.split(';').enumerate() {
            let row = line
                .split(',')
                .enumerate()
                .map(|(j, e)| {
                    parse_rational(e).map_err(|source| ParseMatError::Entry { row: i, col: j, source })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(ParseMatError::Ragged { row: i, expected: first.len(), found: row.len() });
                }
            }
            rows.push(row);
        }
        Ok(Mat::from_rows(rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::ratio;

    fn two_sample_stack() -> Mat {
        // [X-; U-] of the two-excitation plan: x0 = [1,0]', [0.5,1]', u0 = -1, -1
        Mat::from_rows(vec![
            vec![int(1), ratio(1, 2)],
            vec![int(0), int(1)],
            vec![int(-1), int(-1)],
        ])
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Mat::identity(3).rank(), 3);
        assert_eq!(two_sample_stack().rank(), 2);
        assert_eq!(Mat::zeros(4, 4).rank(), 0);
        assert_eq!(Mat::zeros(0, 3).rank(), 0);
    }

    #[test]
    fn rank_agrees_with_echelon() {
        let m = Mat::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1], &[0, 2, 2]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.echelon().pivots, vec![0, 1]);
    }

    #[test]
    fn solve_right_examples() {
        let i2 = Mat::identity(2);
        assert_eq!(i2.solve_right(&i2).unwrap(), i2);
        let e13 = Mat::unit_columns(3, &[0, 2]);
        assert_eq!(e13.solve_right(&e13).unwrap(), i2);
        let a = Mat::from_i64(&[&[1, 0], &[0, 0]]);
        let b = Mat::from_i64(&[&[0], &[1]]);
        assert_eq!(a.solve_right(&b), Err(NoSolution));
    }

    #[test]
    fn solve_right_sets_free_variables_to_zero() {
        let a = Mat::from_i64(&[&[1, 1, 0]]);
        let q = a.solve_right(&Mat::from_i64(&[&[5]])).unwrap();
        assert_eq!(q, Mat::from_i64(&[&[5], &[0], &[0]]));
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = Mat::from_i64(&[&[1, 2, 3], &[2, 4, 7]]);
        let k = m.kernel();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn vec_is_column_major() {
        let m = Mat::from_i64(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.vec(), vec![int(1), int(3), int(2), int(4)]);
        assert_eq!(Mat::vec_inv(&m.vec(), 2, 2), m);
        assert_eq!(Mat::vec_inv(&[int(1), int(0), int(0), int(1)], 2, 2), Mat::identity(2));
        assert_eq!(
            Mat::vec_inv(&[int(1), int(1), int(0), int(0)], 2, 2),
            Mat::from_i64(&[&[1, 0], &[1, 0]])
        );
    }

    #[test]
    fn inverse_roundtrip() {
        let x = Mat::from_rows(vec![vec![int(1), ratio(1, 2)], vec![int(0), int(1)]]);
        let inv = x.inverse().unwrap();
        assert_eq!(x.mul(&inv), Mat::identity(2));
        assert!(Mat::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn literal_roundtrip() {
        let m: Mat = "1, 0.5; 0, 1; -1, -1".parse().unwrap();
        assert_eq!(m, two_sample_stack());
        let again: Mat = m.to_string().parse().unwrap();
        assert_eq!(again, m);
        let empty: Mat = "[0x3]".parse().unwrap();
        assert_eq!(empty.shape(), (0, 3));
        assert_eq!(empty.to_string().parse::<Mat>().unwrap(), empty);
        assert!(matches!("1, 2; 3".parse::<Mat>(), Err(ParseMatError::Ragged { .. })));
        assert!(matches!("1, x".parse::<Mat>(), Err(ParseMatError::Entry { .. })));
    }
}
