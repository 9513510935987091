//! Excitation plans: sufficient richness, minimum designs, greedy reduction.

use alloc::vec::Vec;
use core::fmt;

use crate::numerics::{Mat, Rational, Subspace};
use crate::properties::{minimum_subspace, Dims, PropertyError, PropertySpec};

/// `k` one-step excitations `(x_0^(i), u_0^(i))`, as columns of `X₋` and `U₋`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InputSection {
    x_minus: Mat,
    u_minus: Mat,
}

/// An input section together with the one-step responses `X₊`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dataset {
    section: InputSection,
    x_plus: Mat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SectionError {
    NoColumns,
    ColumnCount { x: usize, other: usize },
    RowCount { expected: usize, found: usize },
}

impl fmt::Display for SectionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectionError::NoColumns => f.write_str("an input section needs at least one column"),
            SectionError::ColumnCount { x, other } => {
                write!(f, "column counts differ: X has {x}, the other matrix has {other}")
            }
            SectionError::RowCount { expected, found } => {
                write!(f, "X+ has {found} rows, expected {expected}")
            }
        }
    }
}

impl InputSection {
    pub fn new(x_minus: Mat, u_minus: Mat) -> Result<Self, SectionError> {
        if x_minus.cols() != u_minus.cols() {
            return Err(SectionError::ColumnCount { x: x_minus.cols(), other: u_minus.cols() });
        }
        if x_minus.cols() == 0 {
            return Err(SectionError::NoColumns);
        }
        Ok(InputSection { x_minus, u_minus })
    }

    /// Splits an `(n+m) × k` matrix after row `n`.
    pub fn from_stacked(stacked: &Mat, n: usize) -> Result<Self, SectionError> {
        InputSection::new(stacked.row_range(0, n), stacked.row_range(n, stacked.rows()))
    }

    pub fn x_minus(&self) -> &Mat {
        &self.x_minus
    }

    pub fn u_minus(&self) -> &Mat {
        &self.u_minus
    }

    pub fn dims(&self) -> Dims {
        Dims { n: self.x_minus.rows(), m: self.u_minus.rows() }
    }

    pub fn k(&self) -> usize {
        self.x_minus.cols()
    }

    /// `[X₋; U₋]`
    pub fn stacked(&self) -> Mat {
        self.x_minus.vstack(&self.u_minus)
    }

    /// Right-multiplies both blocks by `t` (`k × k'`).
    pub fn transform(&self, t: &Mat) -> Result<Self, SectionError> {
        InputSection::new(self.x_minus.mul(t), self.u_minus.mul(t))
    }

    pub fn without_column(&self, j: usize) -> Result<Self, SectionError> {
        InputSection::new(self.x_minus.without_column(j), self.u_minus.without_column(j))
    }
}

impl Dataset {
    pub fn new(section: InputSection, x_plus: Mat) -> Result<Self, SectionError> {
        if x_plus.cols() != section.k() {
            return Err(SectionError::ColumnCount { x: section.k(), other: x_plus.cols() });
        }
        if x_plus.rows() != section.dims().n {
            return Err(SectionError::RowCount { expected: section.dims().n, found: x_plus.rows() });
        }
        Ok(Dataset { section, x_plus })
    }

    pub fn section(&self) -> &InputSection {
        &self.section
    }

    pub fn x_plus(&self) -> &Mat {
        &self.x_plus
    }

    pub fn dims(&self) -> Dims {
        self.section.dims()
    }

    /// Right-multiplies `X₋`, `U₋` and `X₊` by the same `t`.
    pub fn transform(&self, t: &Mat) -> Result<Self, SectionError> {
        Dataset::new(self.section.transform(t)?, self.x_plus.mul(t))
    }
}

/// `im([X₋; U₋])`
pub fn stacked_image(s: &InputSection) -> Subspace {
    Subspace::image(&s.stacked())
}

/// `im([X₋; U₋]) ⊇ L_P`.
pub fn is_sufficiently_rich(s: &InputSection, p: &PropertySpec) -> Result<bool, PropertyError> {
    let lp = minimum_subspace(p, s.dims())?;
    Ok(stacked_image(s).contains(&lp).expect("both live in R^(n+m)"))
}

/// Basis vectors of `L_P` that the section does not reach.
pub fn missing_directions(s: &InputSection, p: &PropertySpec) -> Result<Vec<Vec<Rational>>, PropertyError> {
    let lp = minimum_subspace(p, s.dims())?;
    let image = stacked_image(s);
    let basis = lp.basis();
    Ok((0..basis.cols()).map(|j| basis.column(j)).filter(|v| !image.contains_vector(v)).collect())
}

/// A basis of `L_P` split into `(X₋, U₋)`, so `k = dim L_P`.
pub fn design_minimum_input(p: &PropertySpec, dims: Dims) -> Result<InputSection, PropertyError> {
    let lp = minimum_subspace(p, dims)?;
    Ok(InputSection::from_stacked(lp.basis(), dims.n).expect("catalog subspaces are non-trivial"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StartNotRich;

impl fmt::Display for StartNotRich {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("the starting subspace does not pass the richness test")
    }
}

/// Drops basis vectors of `start` one at a time, left to right, while `oracle`
/// still accepts the span of what remains.
///
/// With a monotone oracle a vector that cannot be dropped never becomes
/// droppable later, so a single pass ends at a subspace where no single vector
/// can be removed.
pub fn reduce_to_minimum(start: &Subspace, oracle: impl Fn(&Subspace) -> bool) -> Result<Subspace, StartNotRich> {
    if !oracle(start) {
        return Err(StartNotRich);
    }
    let mut kept = start.basis().clone();
    let mut j = 0;
    while j < kept.cols() {
        let candidate = Subspace::image(&kept.without_column(j));
        if oracle(&candidate) {
            kept = kept.without_column(j);
        } else {
            j += 1;
        }
    }
    Ok(Subspace::image(&kept))
}
