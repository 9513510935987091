use alloc::vec::Vec;
use core::fmt;

use super::mat::Mat;
use super::rational::Rational;

/// Linear subspace of `R^ambient_dim`, held as a matrix of independent basis columns.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Mat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionMismatch {
    pub left: usize,
    pub right: usize,
}

impl fmt::Display for DimensionMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ambient dimensions differ: {} vs {}", self.left, self.right)
    }
}

impl Subspace {
    /// Column space of `m`, spanned by its leftmost pivot columns.
    pub fn image(m: &Mat) -> Subspace {
        let pivots = m.pivot_columns();
        Subspace { ambient_dim: m.rows(), basis: m.select_columns(&pivots) }
    }

    pub fn full(dim: usize) -> Subspace {
        Subspace { ambient_dim: dim, basis: Mat::identity(dim) }
    }

    pub fn zero(dim: usize) -> Subspace {
        Subspace { ambient_dim: dim, basis: Mat::zeros(dim, 0) }
    }

    /// `span{e_i}` for 0-based indices; duplicates are ignored.
    pub fn coordinate(dim: usize, indices: &[usize]) -> Subspace {
        let mut idx: Vec<usize> = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        Subspace { ambient_dim: dim, basis: Mat::unit_columns(dim, &idx) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    fn check(&self, other: &Subspace) -> Result<(), DimensionMismatch> {
        if self.ambient_dim == other.ambient_dim {
            Ok(())
        } else {
            Err(DimensionMismatch { left: self.ambient_dim, right: other.ambient_dim })
        }
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "vector length mismatch");
        if self.dim() == 0 {
            return v.iter().all(num_traits::Zero::is_zero);
        }
        self.basis.solve_right(&Mat::column_vector(v.to_vec())).is_ok()
    }

    /// `inner ⊆ self`: every basis column of `inner` solves `self.basis · y = column`.
    pub fn contains(&self, inner: &Subspace) -> Result<bool, DimensionMismatch> {
        self.check(inner)?;
        if inner.dim() == 0 {
            return Ok(true);
        }
        if self.dim() < inner.dim() {
            return Ok(false);
        }
        Ok(self.basis.solve_right(&inner.basis).is_ok())
    }

    /// Mutual containment.
    pub fn same_as(&self, other: &Subspace) -> Result<bool, DimensionMismatch> {
        Ok(self.dim() == other.dim() && self.contains(other)?)
    }

    /// Intersection through the kernel of `[A, -B]`: each kernel vector `[y; z]`
    /// gives `A·y = B·z`, a common vector.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, DimensionMismatch> {
        self.check(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.ambient_dim));
        }
        let joined = self.basis.hstack(&other.basis.scale(&-Rational::from_integer(1.into())));
        let k = joined.kernel();
        let coeffs = k.row_range(0, self.dim());
        Ok(Subspace::image(&self.basis.mul(&coeffs)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, DimensionMismatch> {
        self.check(other)?;
        Ok(Subspace::image(&self.basis.hstack(&other.basis)))
    }

    /// Vectors orthogonal to every element, as a subspace.
    pub fn orthogonal_complement(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient_dim);
        }
        Subspace::image(&self.basis.transpose().kernel())
    }

    /// Orthogonal projection of `w` onto the subspace, exactly.
    pub fn project(&self, w: &[Rational]) -> Vec<Rational> {
        if self.dim() == 0 {
            return alloc::vec![Rational::from_integer(0.into()); w.len()];
        }
        let v = &self.basis;
        let gram = v.transpose().mul(v);
        let rhs = v.transpose().mul(&Mat::column_vector(w.to_vec()));
        let y = gram.solve_right(&rhs).expect("Gram matrix of a basis is invertible");
        v.mul(&y).column(0)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim() == 0 {
            return write!(f, "{{0}} in R^{}", self.ambient_dim);
        }
        write!(f, "span(")?;
        for j in 0..self.dim() {
            if j > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (i, v) in self.basis.column(j).iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("]'")?;
        }
        write!(f, ") in R^{}", self.ambient_dim)
    }
}
