//! Certificates of insufficiency: two systems that reproduce the same data,
//! exactly one of which has the property.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::identify::consistent_set_contains;
use crate::numerics::{int, Mat, Rational, Subspace};
use crate::properties::{
    build_m, feasible_point, has_property, minimum_subspace, PropertyError, PropertySpec,
    SetExpr, SetOp, StructureMode, SystemPair,
};
use crate::richness::{is_sufficiently_rich, stacked_image, Dataset, InputSection};

/// Which proof construction produced a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Construction {
    /// Stabilizability, annihilator with zero state part.
    StabilizabilityInputDirection,
    /// Stabilizability, annihilator touching the state part.
    StabilizabilityStateDirection,
    /// Controllability with a scalar state.
    ControllabilityScalar,
    ControllabilityInputDirection,
    ControllabilityStateDirection,
    /// Intersection-mode structure: single-row perturbation with scalar gain.
    StructureScalar,
    /// Expression-mode structure, flat operator chain.
    StructureChain,
    /// Expression-mode structure, bracketed tree.
    StructureTree,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::StabilizabilityInputDirection => "stabilizability/input-direction",
            Construction::StabilizabilityStateDirection => "stabilizability/state-direction",
            Construction::ControllabilityScalar => "controllability/scalar-state",
            Construction::ControllabilityInputDirection => "controllability/input-direction",
            Construction::ControllabilityStateDirection => "controllability/state-direction",
            Construction::StructureScalar => "structure/intersection",
            Construction::StructureChain => "structure/chain",
            Construction::StructureTree => "structure/tree",
        })
    }
}

/// Per-constraint choice between `Σ_i` and its complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Keep,
    Complement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexamplePair {
    pub sys_with: SystemPair,
    pub sys_without: SystemPair,
    pub section: InputSection,
    /// `X₊` produced by both systems.
    pub shared_feedback: Mat,
    /// Nonzero vector of `R^(n+m)` orthogonal to the excited subspace.
    pub direction: Vec<Rational>,
    pub construction: Construction,
    pub signs: Option<Vec<Sign>>,
    pub seed: Option<u64>,
}

impl CounterexamplePair {
    pub fn dataset(&self) -> Dataset {
        Dataset::new(self.section.clone(), self.shared_feedback.clone()).expect("shapes checked at construction")
    }

    /// Both systems reproduce the shared data, and exactly `sys_with` has `p`.
    pub fn verify(&self, p: &PropertySpec) -> bool {
        let d = self.dataset();
        consistent_set_contains(&d, &self.sys_with)
            && consistent_set_contains(&d, &self.sys_without)
            && has_property(&self.sys_with, p)
            && !has_property(&self.sys_without, p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdversaryError {
    Property(PropertyError),
    SectionIsRich,
    /// The sign-selected constraint system has no solution.
    InfeasibleSigns,
    /// No constraint reacts to the chosen direction.
    EmptyC1,
    /// The property has no two-sided split (every system has it).
    Unsupported,
    /// A constructed pair failed its own checks.
    Internal(&'static str),
}

impl fmt::Display for AdversaryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdversaryError::Property(e) => write!(f, "{e}"),
            AdversaryError::SectionIsRich => f.write_str("the input section is sufficiently rich; no counterexample exists"),
            AdversaryError::InfeasibleSigns => {
                f.write_str("no system satisfies the selected constraint signs; constraint vectors must be independent")
            }
            AdversaryError::EmptyC1 => f.write_str("no constraint reacts to the unexcited direction"),
            AdversaryError::Unsupported => f.write_str("this property holds for every system; there is nothing to split"),
            AdversaryError::Internal(what) => write!(f, "internal invariant failed: {what}"),
        }
    }
}

impl From<PropertyError> for AdversaryError {
    fn from(e: PropertyError) -> Self {
        AdversaryError::Property(e)
    }
}

/// First kernel vector of `[X₋; U₋]'`, or `None` when the section is persistently exciting.
pub fn find_annihilator(s: &InputSection) -> Option<Vec<Rational>> {
    let k = s.stacked().transpose().kernel();
    (k.cols() > 0).then(|| k.column(0))
}

fn finish(
    sys_with: SystemPair,
    sys_without: SystemPair,
    s: &InputSection,
    direction: Vec<Rational>,
    construction: Construction,
    p: &PropertySpec,
) -> Result<CounterexamplePair, AdversaryError> {
    let shared_feedback = sys_with.augmented().mul(&s.stacked());
    let pair = CounterexamplePair {
        sys_with,
        sys_without,
        section: s.clone(),
        shared_feedback,
        direction,
        construction,
        signs: None,
        seed: None,
    };
    if pair.verify(p) {
        Ok(pair)
    } else {
        Err(AdversaryError::Internal("constructed pair failed verification"))
    }
}

/// A consistent partner `[A, B] = [Ā, B̄] + v·h'` with an uncontrollable eigenvalue at 1.
///
/// Needs `w'[Ā − I, B̄] = s·h'` for some `w ≠ 0`; then `v = −s·w / (w'w)` makes
/// `w'[A − I, B] = 0`, and `h'[X₋; U₋] = 0` keeps the data unchanged.
fn partner_at_one(sys: &SystemPair, h: &[Rational]) -> Option<SystemPair> {
    let n = sys.a.rows();
    let shifted = sys.a.sub(&Mat::identity(n)).hstack(&sys.b);
    let h_row = Mat::from_rows(vec![h.iter().map(|v| -v).collect()]);
    let left = shifted.vstack(&h_row).transpose().kernel();
    if left.cols() == 0 {
        return None;
    }
    let col = left.column(0);
    let (w, s) = (&col[..n], &col[n]);
    let ww: Rational = w.iter().map(|x| x * x).sum();
    if ww.is_zero() {
        return None;
    }
    let v = Mat::column_vector(w.iter().map(|x| -(s * x) / &ww).collect());
    let delta = v.mul(&Mat::from_rows(vec![h.to_vec()]));
    Some(SystemPair::from_augmented(&sys.augmented().add(&delta)))
}

pub fn counterexample_stabilizability(s: &InputSection) -> Result<CounterexamplePair, AdversaryError> {
    let dims = s.dims();
    let n = dims.n;
    let h = find_annihilator(s).ok_or(AdversaryError::SectionIsRich)?;
    let (hx, hu) = h.split_at(n);
    let mut a = Mat::zeros(n, n);
    let mut b = Mat::zeros(n, dims.m);
    let construction = match hx.iter().position(|v| !v.is_zero()) {
        None => {
            a[(0, 0)] = Rational::one();
            for (q, v) in hu.iter().enumerate() {
                b[(0, q)] = v.clone();
            }
            Construction::StabilizabilityInputDirection
        }
        Some(l) => {
            let inv = -hx[l].recip();
            for j in 0..n {
                a[(l, j)] = &hx[j] * &inv;
            }
            a[(l, l)] += Rational::one();
            for (q, v) in hu.iter().enumerate() {
                b[(l, q)] = v * &inv;
            }
            Construction::StabilizabilityStateDirection
        }
    };
    let with = SystemPair::new(a, b);
    let without = partner_at_one(&with, &h).ok_or(AdversaryError::Internal("no partner at eigenvalue 1"))?;
    finish(with, without, s, h, construction, &PropertySpec::Stabilizability)
}

/// Permutation of state coordinates making entry 2 (index 1) of `hx` nonzero.
fn swap_for_second(hx: &[Rational]) -> (usize, usize) {
    if !hx[1].is_zero() {
        (1, 1)
    } else if let Some(j) = (2..hx.len()).find(|&j| !hx[j].is_zero()) {
        (1, j)
    } else {
        (0, 1)
    }
}

fn swap_state(sys: &SystemPair, i: usize, j: usize) -> SystemPair {
    let n = sys.a.rows();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.swap(i, j);
    let a = sys.a.select_rows(&perm).select_columns(&perm);
    let b = sys.b.select_rows(&perm);
    SystemPair::new(a, b)
}

pub fn counterexample_controllability(s: &InputSection) -> Result<CounterexamplePair, AdversaryError> {
    let dims = s.dims();
    let p = PropertySpec::Controllability;
    p.validate(dims)?;
    if is_sufficiently_rich(s, &p)? {
        return Err(AdversaryError::SectionIsRich);
    }
    let (n, m) = (dims.n, dims.m);
    if n == 1 {
        let k = s.stacked().transpose().kernel();
        let h = (0..k.cols())
            .map(|j| k.column(j))
            .find(|v| v[1..].iter().any(|x| !x.is_zero()))
            .ok_or(AdversaryError::Internal("no annihilator touches the input part"))?;
        let with = SystemPair::from_augmented(&Mat::from_rows(vec![h.clone()]));
        let without = SystemPair::zero(dims);
        return finish(with, without, s, h, Construction::ControllabilityScalar, &p);
    }
    let h = find_annihilator(s).ok_or(AdversaryError::SectionIsRich)?;
    let ones_rows = |b: &mut Mat| {
        for i in 1..n {
            for q in 0..m {
                b[(i, q)] = Rational::one();
            }
        }
    };
    let (hx, hu) = h.split_at(n);
    let (with, construction) = if hx.iter().all(Zero::is_zero) {
        let a = Mat::from_fn(n, n, |i, j| if i == j { int(i as i64 + 1) } else { Rational::zero() });
        let mut b = Mat::zeros(n, m);
        for (q, v) in hu.iter().enumerate() {
            b[(0, q)] = v.clone();
        }
        ones_rows(&mut b);
        (SystemPair::new(a, b), Construction::ControllabilityInputDirection)
    } else {
        let (i, j) = swap_for_second(hx);
        let mut hz: Vec<Rational> = hx.to_vec();
        hz.swap(i, j);
        let mut a;
        let mut b = Mat::zeros(n, m);
        if hz[0].is_zero() {
            // diag(1, 1, 2, …, n−1) plus h_x' on the first row
            a = Mat::from_fn(n, n, |r, c| if r == c { int(r.max(1) as i64) } else { Rational::zero() });
            for c in 0..n {
                a[(0, c)] += &hz[c];
            }
            for (q, v) in hu.iter().enumerate() {
                b[(0, q)] = v.clone();
            }
        } else {
            let inv = hz[0].recip();
            a = Mat::from_fn(n, n, |r, c| if r == c { int(r as i64 + 1) } else { Rational::zero() });
            for c in 0..n {
                a[(0, c)] += &hz[c] * &inv;
            }
            for (q, v) in hu.iter().enumerate() {
                b[(0, q)] = v * &inv;
            }
        }
        ones_rows(&mut b);
        (swap_state(&SystemPair::new(a, b), i, j), Construction::ControllabilityStateDirection)
    };
    let without = partner_at_one(&with, &h).ok_or(AdversaryError::Internal("no partner at eigenvalue 1"))?;
    finish(with, without, s, h, construction, &p)
}

/// Sign selection for a flat chain `Σ_1 ⊙ Σ_2 ⊙ … ⊙ Σ_ℓ` evaluated left to right.
///
/// `ops[k]` is the operator before `Σ_(k+2)`; `c1[i]` marks membership of
/// constraint `i + 1` in `C₁`.
pub fn algorithm1_signs(ops: &[SetOp], c1: &[bool]) -> Result<Vec<Sign>, AdversaryError> {
    let l = c1.len();
    assert_eq!(ops.len() + 1, l, "a chain over l constraints has l - 1 operators");
    if !c1.iter().any(|&b| b) {
        return Err(AdversaryError::EmptyC1);
    }
    let before = |i: usize| ops[i - 2];
    let mut signs = vec![Sign::Keep; l];
    for i in (1..=l).rev() {
        if c1[i - 1] && i != 1 {
            signs[i - 1] = Sign::Keep;
            let rest = if before(i) == SetOp::Union { Sign::Complement } else { Sign::Keep };
            for s in &mut signs[..i - 1] {
                *s = rest;
            }
            break;
        } else if !c1[i - 1] {
            signs[i - 1] = if before(i) == SetOp::Union { Sign::Complement } else { Sign::Keep };
        } else {
            signs[0] = Sign::Keep;
        }
    }
    Ok(signs)
}

fn set_side(e: &SetExpr, sign: Sign, signs: &mut [Sign]) {
    for leaf in e.leaves() {
        signs[leaf - 1] = sign;
    }
}

/// Sign selection for an arbitrarily bracketed expression, descending from the
/// last-executed operator toward a leaf in `C₁`.
pub fn algorithm2_signs(expr: &SetExpr, c1: &[bool]) -> Result<Vec<Sign>, AdversaryError> {
    if !c1.iter().any(|&b| b) {
        return Err(AdversaryError::EmptyC1);
    }
    let in_c1 = |e: &SetExpr| matches!(e, SetExpr::Leaf(i) if c1[i - 1]);
    let reaches_c1 = |e: &SetExpr| e.leaves().iter().any(|&i| c1[i - 1]);
    let mut signs = vec![Sign::Keep; c1.len()];
    let mut cur = expr;
    loop {
        match cur {
            SetExpr::Leaf(i) => {
                signs[i - 1] = Sign::Keep;
                break;
            }
            SetExpr::Node(op, l, r) => {
                let other = if *op == SetOp::Union { Sign::Complement } else { Sign::Keep };
                if in_c1(l) || in_c1(r) {
                    let (leaf, rest) = if in_c1(l) { (l, r) } else { (r, l) };
                    set_side(leaf, Sign::Keep, &mut signs);
                    set_side(rest, other, &mut signs);
                    break;
                }
                let (next, rest) = if reaches_c1(l) { (l, r) } else { (r, l) };
                set_side(rest, other, &mut signs);
                cur = next;
            }
        }
    }
    Ok(signs)
}

fn draw_small(rng: &mut impl RngCore) -> Rational {
    int((rng.next_u32() % 19) as i64 - 9)
}

/// Structure counterexample from the least unexcited column of `M`.
pub fn counterexample_structure(
    s: &InputSection,
    p: &PropertySpec,
    rng: &mut impl RngCore,
) -> Result<CounterexamplePair, AdversaryError> {
    let dims = s.dims();
    let linear;
    let (constraints, expr, mode) = match p {
        PropertySpec::LinearStructure { constraints, expr, mode } => (constraints, expr, *mode),
        PropertySpec::Sparsity { zeros_a, zeros_b } => {
            p.validate(dims)?;
            linear = PropertySpec::sparsity_as_linear(zeros_a, zeros_b, dims);
            match &linear {
                PropertySpec::LinearStructure { constraints, expr, mode } => (constraints, expr, *mode),
                _ => unreachable!(),
            }
        }
        _ => return Err(AdversaryError::Unsupported),
    };
    p.validate(dims)?;
    let image = stacked_image(s);
    let m = build_m(constraints, dims)?;
    let (col, w) = (0..m.cols())
        .map(|c| (c, m.column(c)))
        .find(|(_, w)| !image.contains_vector(w))
        .ok_or(AdversaryError::SectionIsRich)?;
    let proj = image.project(&w);
    let h: Vec<Rational> = w.iter().zip(&proj).map(|(a, b)| a - b).collect();
    let n = dims.n;
    let theta_of = |sys: &SystemPair| sys.params();

    let (with, without, construction, signs) = match mode {
        StructureMode::Intersection => {
            let (l, j) = (col / n, col % n);
            let theta0 = feasible_point(constraints, dims.param_len()).ok_or(AdversaryError::InfeasibleSigns)?;
            let with = SystemPair::from_params(&theta0, dims);
            let hw: Rational = h.iter().zip(&w).map(|(a, b)| a * b).sum();
            let t_l = constraints[l].value(&theta_of(&with));
            let c = (constraints[l].set.point_outside() - t_l) / hw;
            let mut delta = Mat::zeros(n, dims.total());
            for (q, v) in h.iter().enumerate() {
                delta[(j, q)] = &c * v;
            }
            let without = SystemPair::from_augmented(&with.augmented().add(&delta));
            (with, without, Construction::StructureScalar, None)
        }
        StructureMode::Expression => {
            let hm = Mat::column_vector(h.clone());
            let v: Vec<Vec<Rational>> = constraints
                .iter()
                .map(|ci| Mat::vec_inv(&ci.h, n, dims.total()).mul(&hm).column(0))
                .collect();
            let c1: Vec<bool> = v.iter().map(|vi| vi.iter().any(|x| !x.is_zero())).collect();
            let (signs, construction) = match expr.flat_ops() {
                Some(ops) => (algorithm1_signs(&ops, &c1)?, Construction::StructureChain),
                None => (algorithm2_signs(expr, &c1)?, Construction::StructureTree),
            };
            let targets: Vec<Rational> = constraints
                .iter()
                .zip(&signs)
                .map(|(ci, sign)| match sign {
                    Sign::Keep => ci.set.point_inside(),
                    Sign::Complement => ci.set.point_outside(),
                })
                .collect();
            let hmat = Mat::from_rows(constraints.iter().map(|ci| ci.h.clone()).collect());
            let theta0 =
                hmat.solve_right(&Mat::column_vector(targets.clone())).map_err(|_| AdversaryError::InfeasibleSigns)?;
            let with = SystemPair::from_params(&theta0.column(0), dims);
            let active: Vec<usize> = (0..constraints.len()).filter(|&i| c1[i]).collect();
            let dot = |g: &[Rational], x: &[Rational]| -> Rational { g.iter().zip(x).map(|(a, b)| a * b).sum() };
            let mut g = None;
            for _ in 0..256 {
                let cand: Vec<Rational> = (0..n).map(|_| draw_small(rng)).collect();
                if active.iter().all(|&i| !dot(&cand, &v[i]).is_zero()) {
                    g = Some(cand);
                    break;
                }
            }
            let g = g.ok_or(AdversaryError::Internal("no admissible perturbation direction drawn"))?;
            let alpha = Rational::one()
                + active
                    .iter()
                    .map(|&i| (constraints[i].set.bound() + targets[i].abs() + Rational::one()) / dot(&g, &v[i]).abs())
                    .max()
                    .expect("C1 is non-empty");
            let c = Mat::column_vector(g.iter().map(|x| x * &alpha).collect());
            let delta = c.mul(&Mat::from_rows(vec![h.clone()]));
            let without = SystemPair::from_augmented(&with.augmented().add(&delta));
            (with, without, construction, Some(signs))
        }
    };
    let mut pair = finish(with, without, s, h, construction, p)?;
    pair.signs = signs;
    Ok(pair)
}

fn structure_rich(s: &InputSection, p: &PropertySpec) -> Result<bool, AdversaryError> {
    let lp: Subspace = minimum_subspace(p, s.dims())?;
    Ok(stacked_image(s).contains(&lp).expect("same ambient space"))
}

/// Dispatches on the property kind; `seed` drives the random direction used in
/// expression-mode structures and is recorded in the result.
pub fn counterexample(s: &InputSection, p: &PropertySpec, seed: u64) -> Result<CounterexamplePair, AdversaryError> {
    p.validate(s.dims())?;
    match p {
        PropertySpec::Identifiability => Err(AdversaryError::Unsupported),
        PropertySpec::Stabilizability => counterexample_stabilizability(s),
        PropertySpec::Controllability => counterexample_controllability(s),
        PropertySpec::Sparsity { .. } | PropertySpec::LinearStructure { .. } => {
            if structure_rich(s, p)? {
                return Err(AdversaryError::SectionIsRich);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pair = counterexample_structure(s, p, &mut rng)?;
            if matches!(p, PropertySpec::LinearStructure { mode: StructureMode::Expression, .. }) {
                pair.seed = Some(seed);
            }
            Ok(pair)
        }
    }
}
