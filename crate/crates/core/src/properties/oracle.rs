//! Ground-truth membership tests `(A, B) ∈ Σ_P`.

use alloc::vec::Vec;

use num_traits::Zero;

use super::{LinearConstraint, PropertySpec, SystemPair};
use crate::numerics::{distinct_eigenvalues, pbh_full_rank, spectral_radius, Mat, Rational, Subspace, UNIT_CIRCLE_TOL};

/// `[B, AB, …, A^(n-1)B]`
pub fn kalman_matrix(sys: &SystemPair) -> Mat {
    let n = sys.a.rows();
    let mut out = sys.b.clone();
    let mut block = sys.b.clone();
    for _ in 1..n {
        block = sys.a.mul(&block);
        out = out.hstack(&block);
    }
    out
}

pub fn controllable_subspace(sys: &SystemPair) -> Subspace {
    Subspace::image(&kalman_matrix(sys))
}

/// Exact Kalman rank test.
pub fn is_controllable(sys: &SystemPair) -> bool {
    kalman_matrix(sys).rank() == sys.a.rows()
}

/// PBH test at every eigenvalue on or outside the unit circle.
pub fn is_stabilizable(sys: &SystemPair) -> bool {
    let (eigs, _) = distinct_eigenvalues(&sys.a).expect("A is square");
    eigs.iter()
        .filter(|z| z.norm() >= 1.0 - UNIT_CIRCLE_TOL)
        .all(|&z| pbh_full_rank(&sys.a, &sys.b, z))
}

/// The block acting on `R^n / C` in a Kalman decomposition, where `C` is the
/// controllable subspace. Empty when the pair is controllable.
pub fn uncontrollable_block(sys: &SystemPair) -> Mat {
    let n = sys.a.rows();
    let c = controllable_subspace(sys);
    let r = c.dim();
    let completion = c.basis().hstack(&Mat::identity(n));
    let t = completion.select_columns(&completion.pivot_columns());
    let t_inv = t.inverse().expect("pivot columns form a basis");
    let similar = t_inv.mul(&sys.a).mul(&t);
    similar.row_range(r, n).col_range(r, n)
}

/// Stabilizability decided through the Kalman decomposition instead of PBH.
pub fn is_stabilizable_by_decomposition(sys: &SystemPair) -> bool {
    let block = uncontrollable_block(sys);
    spectral_radius(&block).expect("square").is_schur_stable()
}

/// `h_i'·vec([A, B])` for each constraint.
pub fn constraint_values(sys: &SystemPair, constraints: &[LinearConstraint]) -> Vec<Rational> {
    let theta = sys.params();
    constraints.iter().map(|c| c.value(&theta)).collect()
}

/// Whether `sys` lies in `Σ_P`. Dimensions are assumed to match the property.
pub fn has_property(sys: &SystemPair, p: &PropertySpec) -> bool {
    match p {
        PropertySpec::Identifiability => true,
        PropertySpec::Stabilizability => is_stabilizable(sys),
        PropertySpec::Controllability => is_controllable(sys),
        PropertySpec::Sparsity { zeros_a, zeros_b } => {
            zeros_a.iter().all(|&(r, c)| sys.a[(r - 1, c - 1)].is_zero())
                && zeros_b.iter().all(|&(r, c)| sys.b[(r - 1, c - 1)].is_zero())
        }
        PropertySpec::LinearStructure { constraints, expr, .. } => {
            let values = constraint_values(sys, constraints);
            expr.eval(&|i| constraints[i - 1].set.contains(&values[i - 1]))
        }
    }
}
