//! Property catalog: what a property demands of `(A, B)` and the smallest
//! subspace of `R^(n+m)` an excitation plan must span to decide it.

mod expr;
mod feasibility;
mod oracle;
mod sets;

use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::numerics::{Mat, Rational, Subspace};

pub use expr::{SetExpr, SetExprError, SetOp};
pub use feasibility::feasible_point;
pub use oracle::{
    constraint_values, controllable_subspace, has_property, is_controllable, is_stabilizable,
    is_stabilizable_by_decomposition, kalman_matrix, uncontrollable_block,
};
pub use sets::{BoundedSet, BoundedSetError};

/// State and input dimensions. `m = 0` describes an autonomous system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dims {
    pub n: usize,
    pub m: usize,
}

impl Dims {
    pub fn new(n: usize, m: usize) -> Result<Dims, PropertyError> {
        if n == 0 {
            return Err(PropertyError::NoStates);
        }
        Ok(Dims { n, m })
    }

    /// `n + m`, the ambient dimension of excitation vectors.
    pub fn total(&self) -> usize {
        self.n + self.m
    }

    /// Length of `vec([A, B])`.
    pub fn param_len(&self) -> usize {
        self.n * self.total()
    }
}

/// A candidate model `(A, B)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SystemPair {
    pub a: Mat,
    pub b: Mat,
}

impl SystemPair {
    /// Panics unless `a` is square and `b` has as many rows.
    pub fn new(a: Mat, b: Mat) -> SystemPair {
        assert!(a.is_square(), "A must be square");
        assert_eq!(a.rows(), b.rows(), "A and B must have the same row count");
        SystemPair { a, b }
    }

    pub fn zero(dims: Dims) -> SystemPair {
        SystemPair { a: Mat::zeros(dims.n, dims.n), b: Mat::zeros(dims.n, dims.m) }
    }

    /// Splits `[A, B]` after column `n`.
    pub fn from_augmented(ab: &Mat) -> SystemPair {
        let n = ab.rows();
        SystemPair { a: ab.col_range(0, n), b: ab.col_range(n, ab.cols()) }
    }

    pub fn from_params(theta: &[Rational], dims: Dims) -> SystemPair {
        SystemPair::from_augmented(&Mat::vec_inv(theta, dims.n, dims.total()))
    }

    pub fn dims(&self) -> Dims {
        Dims { n: self.a.rows(), m: self.b.cols() }
    }

    /// `[A, B]`
    pub fn augmented(&self) -> Mat {
        self.a.hstack(&self.b)
    }

    /// `vec([A, B])`, column-major.
    pub fn params(&self) -> Vec<Rational> {
        self.augmented().vec()
    }
}

impl fmt::Display for SystemPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A = [{}], B = [{}]", self.a, self.b)
    }
}

/// `h'·vec([A, B]) ∈ S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub h: Vec<Rational>,
    pub set: BoundedSet,
}

impl LinearConstraint {
    pub fn new(h: Vec<Rational>, set: BoundedSet) -> Result<Self, PropertyError> {
        if h.iter().all(Zero::is_zero) {
            return Err(PropertyError::ZeroConstraint);
        }
        Ok(LinearConstraint { h, set })
    }

    /// `h'θ`
    pub fn value(&self, theta: &[Rational]) -> Rational {
        self.h.iter().zip(theta).map(|(a, b)| a * b).sum()
    }
}

/// How constraints combine into the property set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StructureMode {
    /// All constraints at once; only requires the property set to be non-empty.
    Intersection,
    /// Arbitrary `∩`/`∪` tree; requires independent `h_i`.
    Expression,
}

/// The property under investigation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropertySpec {
    Identifiability,
    Stabilizability,
    Controllability,
    /// Entries of `A` and `B` required to be zero, as 1-based `(row, col)` pairs.
    Sparsity { zeros_a: Vec<(usize, usize)>, zeros_b: Vec<(usize, usize)> },
    LinearStructure { constraints: Vec<LinearConstraint>, expr: SetExpr, mode: StructureMode },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropertyError {
    NoStates,
    NoInputs,
    EmptySparsity,
    IndexOutOfBounds { matrix: char, row: usize, col: usize },
    ZeroConstraint,
    NoConstraints,
    ConstraintLength { index: usize, expected: usize, found: usize },
    Expr(SetExprError),
    IntersectionNeedsConjunction,
    DependentConstraints,
    EmptyPropertySet,
    SystemShape { expected: Dims, found: Dims },
}

impl fmt::Display for PropertyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyError::NoStates => f.write_str("state dimension must be at least 1"),
            PropertyError::NoInputs => f.write_str("controllability needs at least one input"),
            PropertyError::EmptySparsity => f.write_str("sparsity structure lists no entries"),
            PropertyError::IndexOutOfBounds { matrix, row, col } => {
                write!(f, "entry ({row}, {col}) of {matrix} is out of bounds")
            }
            PropertyError::ZeroConstraint => f.write_str("constraint vector h is zero"),
            PropertyError::NoConstraints => f.write_str("linear structure has no constraints"),
            PropertyError::ConstraintLength { index, expected, found } => {
                write!(f, "constraint {index}: h has length {found}, expected n(n+m) = {expected}")
            }
            PropertyError::Expr(e) => write!(f, "{e}"),
            PropertyError::IntersectionNeedsConjunction => {
                f.write_str("intersection mode only allows '&' between constraints")
            }
            PropertyError::DependentConstraints => {
                f.write_str("expression mode needs linearly independent constraint vectors")
            }
            PropertyError::EmptyPropertySet => f.write_str("no system satisfies all constraints"),
            PropertyError::SystemShape { expected, found } => write!(
                f,
                "system has n = {}, m = {} but the property expects n = {}, m = {}",
                found.n, found.m, expected.n, expected.m
            ),
        }
    }
}

impl From<SetExprError> for PropertyError {
    fn from(e: SetExprError) -> Self {
        PropertyError::Expr(e)
    }
}

/// Column-major index of entry `(row, col)` (0-based) of `[A, B]` inside `vec([A, B])`.
pub fn param_index(dims: Dims, row: usize, col: usize) -> usize {
    col * dims.n + row
}

impl PropertySpec {
    /// Intersection-mode linear structure with `h = e_ij` and `S = {0}` per listed entry.
    pub fn sparsity_as_linear(
        zeros_a: &[(usize, usize)],
        zeros_b: &[(usize, usize)],
        dims: Dims,
    ) -> PropertySpec {
        let positions = zeros_a
            .iter()
            .map(|&(r, c)| (r - 1, c - 1))
            .chain(zeros_b.iter().map(|&(r, c)| (r - 1, dims.n + c - 1)));
        let constraints: Vec<LinearConstraint> = positions
            .map(|(r, c)| {
                let mut h = alloc::vec![Rational::zero(); dims.param_len()];
                h[param_index(dims, r, c)] = Rational::from_integer(1.into());
                LinearConstraint { h, set: BoundedSet::zero() }
            })
            .collect();
        let expr = SetExpr::conjunction(constraints.len());
        PropertySpec::LinearStructure { constraints, expr, mode: StructureMode::Intersection }
    }

    /// Checks the invariants the theory needs for this property at these dimensions.
    pub fn validate(&self, dims: Dims) -> Result<(), PropertyError> {
        match self {
            PropertySpec::Identifiability | PropertySpec::Stabilizability => Ok(()),
            PropertySpec::Controllability => {
                if dims.m == 0 {
                    Err(PropertyError::NoInputs)
                } else {
                    Ok(())
                }
            }
            PropertySpec::Sparsity { zeros_a, zeros_b } => {
                if zeros_a.is_empty() && zeros_b.is_empty() {
                    return Err(PropertyError::EmptySparsity);
                }
                for &(row, col) in zeros_a {
                    if row == 0 || col == 0 || row > dims.n || col > dims.n {
                        return Err(PropertyError::IndexOutOfBounds { matrix: 'A', row, col });
                    }
                }
                for &(row, col) in zeros_b {
                    if row == 0 || col == 0 || row > dims.n || col > dims.m {
                        return Err(PropertyError::IndexOutOfBounds { matrix: 'B', row, col });
                    }
                }
                Ok(())
            }
            PropertySpec::LinearStructure { constraints, expr, mode } => {
                if constraints.is_empty() {
                    return Err(PropertyError::NoConstraints);
                }
                for (i, c) in constraints.iter().enumerate() {
                    if c.h.len() != dims.param_len() {
                        return Err(PropertyError::ConstraintLength {
                            index: i + 1,
                            expected: dims.param_len(),
                            found: c.h.len(),
                        });
                    }
                    if c.h.iter().all(Zero::is_zero) {
                        return Err(PropertyError::ZeroConstraint);
                    }
                }
                expr.validate(constraints.len())?;
                match mode {
                    StructureMode::Intersection => {
                        if !expr.is_conjunction() {
                            return Err(PropertyError::IntersectionNeedsConjunction);
                        }
                        if feasible_point(constraints, dims.param_len()).is_none() {
                            return Err(PropertyError::EmptyPropertySet);
                        }
                    }
                    StructureMode::Expression => {
                        let h = Mat::from_rows(constraints.iter().map(|c| c.h.clone()).collect());
                        if h.rank() != constraints.len() {
                            return Err(PropertyError::DependentConstraints);
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Zero-based columns of `[A, B]` touched by a sparsity structure, ascending.
    pub fn sparsity_columns(zeros_a: &[(usize, usize)], zeros_b: &[(usize, usize)], dims: Dims) -> Vec<usize> {
        let mut cols: Vec<usize> =
            zeros_a.iter().map(|&(_, c)| c - 1).chain(zeros_b.iter().map(|&(_, c)| dims.n + c - 1)).collect();
        cols.sort_unstable();
        cols.dedup();
        cols
    }

    pub fn name(&self) -> &'static str {
        match self {
            PropertySpec::Identifiability => "identifiability",
            PropertySpec::Stabilizability => "stabilizability",
            PropertySpec::Controllability => "controllability",
            PropertySpec::Sparsity { .. } => "sparsity",
            PropertySpec::LinearStructure { mode: StructureMode::Intersection, .. } => "linear-intersection",
            PropertySpec::LinearStructure { mode: StructureMode::Expression, .. } => "linear-expression",
        }
    }
}

/// `M = [vec⁻¹(h_1); …; vec⁻¹(h_ℓ)]'`, an `(n+m) × ℓn` matrix.
pub fn build_m(constraints: &[LinearConstraint], dims: Dims) -> Result<Mat, PropertyError> {
    let mut stacked = Mat::zeros(0, dims.total());
    for (i, c) in constraints.iter().enumerate() {
        if c.h.len() != dims.param_len() {
            return Err(PropertyError::ConstraintLength {
                index: i + 1,
                expected: dims.param_len(),
                found: c.h.len(),
            });
        }
        stacked = stacked.vstack(&Mat::vec_inv(&c.h, dims.n, dims.total()));
    }
    Ok(stacked.transpose())
}

/// The property-dependent minimum subspace `L_P` of `R^(n+m)`.
pub fn minimum_subspace(p: &PropertySpec, dims: Dims) -> Result<Subspace, PropertyError> {
    p.validate(dims)?;
    let total = dims.total();
    Ok(match p {
        PropertySpec::Identifiability | PropertySpec::Stabilizability => Subspace::full(total),
        PropertySpec::Controllability => {
            if dims.n == 1 {
                Subspace::coordinate(total, &(1..total).collect::<Vec<_>>())
            } else {
                Subspace::full(total)
            }
        }
        PropertySpec::Sparsity { zeros_a, zeros_b } => {
            Subspace::coordinate(total, &PropertySpec::sparsity_columns(zeros_a, zeros_b, dims))
        }
        PropertySpec::LinearStructure { constraints, .. } => Subspace::image(&build_m(constraints, dims)?),
    })
}
