//! Direct data-driven identification from input/feedback data.

use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::numerics::{spectral_radius, Mat, Rational, SpectralRadius};
use crate::properties::{
    build_m, is_controllable, is_stabilizable, minimum_subspace, Dims, LinearConstraint, PropertyError,
    PropertySpec, SetExpr, SystemPair,
};
use crate::richness::{missing_directions, Dataset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    HasProperty,
    LacksProperty,
}

impl Verdict {
    pub fn from_bool(has: bool) -> Verdict {
        if has {
            Verdict::HasProperty
        } else {
            Verdict::LacksProperty
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::HasProperty
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::HasProperty => "has-property",
            Verdict::LacksProperty => "lacks-property",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentifyError {
    Property(PropertyError),
    DimensionMismatch { property: Dims, data: Dims },
    /// Basis vectors of `L_P` outside the excited subspace.
    NotSufficientlyRich { missing: Vec<Vec<Rational>> },
    NotIdentifiable { rank: usize, deficit: usize },
    /// No `(A, B)` reproduces the data.
    Inconsistent,
    Internal(&'static str),
}

impl fmt::Display for IdentifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentifyError::Property(e) => write!(f, "{e}"),
            IdentifyError::DimensionMismatch { property, data } => write!(
                f,
                "property is stated for n = {}, m = {} but the data has n = {}, m = {}",
                property.n, property.m, data.n, data.m
            ),
            IdentifyError::NotSufficientlyRich { missing } => {
                write!(f, "input section is not sufficiently rich: {} direction(s) of L_P are not excited", missing.len())
            }
            IdentifyError::NotIdentifiable { rank, deficit } => {
                write!(f, "stacked input has rank {rank}, {deficit} short of n+m")
            }
            IdentifyError::Inconsistent => f.write_str("no linear system reproduces the data exactly"),
            IdentifyError::Internal(what) => write!(f, "internal invariant failed: {what}"),
        }
    }
}

impl From<PropertyError> for IdentifyError {
    fn from(e: PropertyError) -> Self {
        IdentifyError::Property(e)
    }
}

/// An entry of `X₊Q` required to vanish: row `j`, column `l` (both 1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckedEntry {
    pub row: usize,
    pub col: usize,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// `X₊Q` tested against the zero pattern of `M_P`.
    ZeroPattern { q: Mat, x_plus_q: Mat, entries: Vec<CheckedEntry> },
    /// Block traces `h_i'vec([A, B])` of `X₊Q`, with per-constraint membership.
    BlockTraces { q: Mat, values: Vec<Rational>, members: Vec<bool> },
    /// The unique consistent model.
    Model(SystemPair),
    /// Scalar-state controllability: `B = X₊Q` with `[X₋; U₋]Q = [0; I]`.
    InputGain { q: Mat, b: Mat },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identification {
    pub verdict: Verdict,
    pub evidence: Evidence,
}

/// `A·X₋ + B·U₋ = X₊` exactly.
pub fn consistent_set_contains(d: &Dataset, sys: &SystemPair) -> bool {
    let s = d.section();
    sys.dims() == d.dims() && sys.a.mul(s.x_minus()).add(&sys.b.mul(s.u_minus())) == *d.x_plus()
}

fn require_rich(d: &Dataset, p: &PropertySpec) -> Result<(), IdentifyError> {
    let missing = missing_directions(d.section(), p)?;
    if missing.is_empty() {
        Ok(())
    } else {
        Err(IdentifyError::NotSufficientlyRich { missing })
    }
}

fn solve_q(d: &Dataset, target: &Mat) -> Result<Mat, IdentifyError> {
    d.section()
        .stacked()
        .solve_right(target)
        .map_err(|_| IdentifyError::Internal("richness holds but [X-; U-]Q = target has no solution"))
}

/// Zero-pattern test `X₊Q ∈ M_P` for a sparsity structure (zero lists are 1-based).
pub fn identify_sparsity(
    d: &Dataset,
    zeros_a: &[(usize, usize)],
    zeros_b: &[(usize, usize)],
) -> Result<Identification, IdentifyError> {
    let dims = d.dims();
    let p = PropertySpec::Sparsity { zeros_a: zeros_a.to_vec(), zeros_b: zeros_b.to_vec() };
    p.validate(dims)?;
    require_rich(d, &p)?;
    let cols = PropertySpec::sparsity_columns(zeros_a, zeros_b, dims);
    let q = solve_q(d, &Mat::unit_columns(dims.total(), &cols))?;
    let xq = d.x_plus().mul(&q);
    let position = |c: usize| cols.binary_search(&c).expect("column belongs to I_P");
    let targets = zeros_a
        .iter()
        .map(|&(r, c)| (r - 1, position(c - 1)))
        .chain(zeros_b.iter().map(|&(r, c)| (r - 1, position(dims.n + c - 1))));
    let entries: Vec<CheckedEntry> =
        targets.map(|(j, l)| CheckedEntry { row: j + 1, col: l + 1, value: xq[(j, l)].clone() }).collect();
    let verdict = Verdict::from_bool(entries.iter().all(|e| e.value.is_zero()));
    Ok(Identification { verdict, evidence: Evidence::ZeroPattern { q, x_plus_q: xq, entries } })
}

/// Block-trace evaluation of each `h_i'vec([A*, B*])` from `X₊Q` with `[X₋; U₋]Q = M`.
pub fn identify_linear_structure(
    d: &Dataset,
    constraints: &[LinearConstraint],
    expr: &SetExpr,
    p: &PropertySpec,
) -> Result<Identification, IdentifyError> {
    let dims = d.dims();
    p.validate(dims)?;
    require_rich(d, p)?;
    let m = build_m(constraints, dims)?;
    let q = solve_q(d, &m)?;
    let xq = d.x_plus().mul(&q);
    let n = dims.n;
    let values: Vec<Rational> =
        (0..constraints.len()).map(|i| xq.col_range(i * n, (i + 1) * n).trace()).collect();
    let members: Vec<bool> = constraints.iter().zip(&values).map(|(c, v)| c.set.contains(v)).collect();
    let verdict = Verdict::from_bool(expr.eval(&|i| members[i - 1]));
    Ok(Identification { verdict, evidence: Evidence::BlockTraces { q, values, members } })
}

/// The unique `(A, B)` with `[A, B][X₋; U₋] = X₊`, when the stacked input has rank `n+m`.
pub fn recover_model(d: &Dataset) -> Result<SystemPair, IdentifyError> {
    let dims = d.dims();
    let stacked = d.section().stacked();
    let rank = stacked.rank();
    if rank < dims.total() {
        return Err(IdentifyError::NotIdentifiable { rank, deficit: dims.total() - rank });
    }
    let ab_t = stacked.transpose().solve_right(&d.x_plus().transpose()).map_err(|_| IdentifyError::Inconsistent)?;
    Ok(SystemPair::from_augmented(&ab_t.transpose()))
}

fn model_based(
    d: &Dataset,
    p: &PropertySpec,
    oracle: fn(&SystemPair) -> bool,
) -> Result<Identification, IdentifyError> {
    p.validate(d.dims())?;
    require_rich(d, p)?;
    let sys = recover_model(d)?;
    Ok(Identification { verdict: Verdict::from_bool(oracle(&sys)), evidence: Evidence::Model(sys) })
}

pub fn identify_stabilizability(d: &Dataset) -> Result<Identification, IdentifyError> {
    model_based(d, &PropertySpec::Stabilizability, is_stabilizable)
}

/// For `n = 1` only `B` matters, read off as `X₊Q`; otherwise through the recovered model.
pub fn identify_controllability(d: &Dataset) -> Result<Identification, IdentifyError> {
    let dims = d.dims();
    if dims.n != 1 {
        return model_based(d, &PropertySpec::Controllability, is_controllable);
    }
    let p = PropertySpec::Controllability;
    p.validate(dims)?;
    require_rich(d, &p)?;
    let target = Mat::zeros(1, dims.m).vstack(&Mat::identity(dims.m));
    let q = solve_q(d, &target)?;
    let b = d.x_plus().mul(&q);
    Ok(Identification { verdict: Verdict::from_bool(!b.is_zero()), evidence: Evidence::InputGain { q, b } })
}

/// Dispatches on the property kind.
pub fn identify(d: &Dataset, p: &PropertySpec) -> Result<Identification, IdentifyError> {
    match p {
        PropertySpec::Identifiability => model_based(d, p, |_| true),
        PropertySpec::Stabilizability => identify_stabilizability(d),
        PropertySpec::Controllability => identify_controllability(d),
        PropertySpec::Sparsity { zeros_a, zeros_b } => identify_sparsity(d, zeros_a, zeros_b),
        PropertySpec::LinearStructure { constraints, expr, .. } => identify_linear_structure(d, constraints, expr, p),
    }
}

/// Checks the property's dimensions against the data before identifying.
pub fn identify_checked(d: &Dataset, p: &PropertySpec, dims: Dims) -> Result<Identification, IdentifyError> {
    if dims != d.dims() {
        return Err(IdentifyError::DimensionMismatch { property: dims, data: d.dims() });
    }
    minimum_subspace(p, dims)?;
    identify(d, p)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gain {
    /// `K = U₋X₋⁻¹`
    pub k: Mat,
    /// `X₊X₋⁻¹ = A* + B*K`
    pub closed_loop: Mat,
    pub radius: SpectralRadius,
}

impl Gain {
    pub fn is_stabilizing(&self) -> bool {
        self.radius.is_schur_stable()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotApplicable {
    NotSquare { n: usize, k: usize },
    Singular,
}

impl fmt::Display for NotApplicable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotApplicable::NotSquare { n, k } => write!(f, "gain needs k = n excitations, got k = {k}, n = {n}"),
            NotApplicable::Singular => f.write_str("X- is singular"),
        }
    }
}

/// State-feedback gain read directly from data with `k = n` and invertible `X₋`.
pub fn gain_from_data(d: &Dataset) -> Result<Gain, NotApplicable> {
    let s = d.section();
    let n = d.dims().n;
    if s.k() != n {
        return Err(NotApplicable::NotSquare { n, k: s.k() });
    }
    let inv = s.x_minus().inverse().ok_or(NotApplicable::Singular)?;
    let k = s.u_minus().mul(&inv);
    let closed_loop = d.x_plus().mul(&inv);
    let radius = spectral_radius(&closed_loop).expect("square");
    Ok(Gain { k, closed_loop, radius })
}

/// `rank(X₊ − λX₋)`
pub fn dataset_rank_test(d: &Dataset, lambda: &Rational) -> usize {
    d.x_plus().sub(&d.section().x_minus().scale(lambda)).rank()
}
