#![allow(dead_code)]

use num_traits::Zero;
use propid_core::numerics::{int, ratio, Mat, Rational};
use propid_core::properties::{
    feasible_point, BoundedSet, Dims, LinearConstraint, PropertySpec, SetExpr, SetOp, StructureMode, SystemPair,
};
use propid_core::richness::InputSection;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Small rational from {-3, …, 3} / {1, 2}.
pub fn small(r: &mut StdRng) -> Rational {
    ratio(r.gen_range(-3..=3), r.gen_range(1..=2))
}

pub fn small_mat(r: &mut StdRng, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| small(r))
}

pub fn dims(r: &mut StdRng, max: usize) -> Dims {
    Dims::new(r.gen_range(1..=max), r.gen_range(1..=max)).unwrap()
}

pub fn system(r: &mut StdRng, d: Dims) -> SystemPair {
    SystemPair::new(small_mat(r, d.n, d.n), small_mat(r, d.n, d.m))
}

/// Block-triangular `(A, B)` with an uncontrollable part of size `n - r`;
/// the uncontrollable block is scaled to be stable or unstable at random.
pub fn split_system(r: &mut StdRng, d: Dims) -> SystemPair {
    let n = d.n;
    let c = r.gen_range(0..n);
    let stable = r.gen_bool(0.5);
    let mut a = small_mat(r, n, n);
    let mut b = small_mat(r, n, d.m);
    for i in c..n {
        for j in 0..c {
            a[(i, j)] = Rational::zero();
        }
        for j in 0..d.m {
            b[(i, j)] = Rational::zero();
        }
    }
    for i in c..n {
        for j in c..n {
            a[(i, j)] = if stable { ratio(r.gen_range(-1..=1), 4 * (n as i64)) } else { a[(i, j)].clone() };
        }
    }
    if !stable {
        a[(c, c)] = int(2) + int(n as i64);
    }
    SystemPair::new(a, b)
}

/// Systems with a mix of controllable, stabilizable-only and non-stabilizable pairs.
pub fn mixed_system(r: &mut StdRng, d: Dims) -> SystemPair {
    if r.gen_bool(0.5) {
        system(r, d)
    } else {
        split_system(r, d)
    }
}

pub fn sparsity(r: &mut StdRng, d: Dims) -> PropertySpec {
    loop {
        let mut za = Vec::new();
        let mut zb = Vec::new();
        for i in 1..=d.n {
            for j in 1..=d.n {
                if r.gen_bool(0.25) {
                    za.push((i, j));
                }
            }
            for j in 1..=d.m {
                if r.gen_bool(0.25) {
                    zb.push((i, j));
                }
            }
        }
        if !(za.is_empty() && zb.is_empty()) {
            return PropertySpec::Sparsity { zeros_a: za, zeros_b: zb };
        }
    }
}

pub fn bounded_set(r: &mut StdRng) -> BoundedSet {
    match r.gen_range(0..4) {
        0 => BoundedSet::zero(),
        1 => BoundedSet::point(small(r)),
        2 => {
            let lo = small(r);
            let hi = &lo + ratio(r.gen_range(0..=4), 2);
            BoundedSet::interval(lo, hi).unwrap()
        }
        _ => {
            let lo = small(r);
            let mid = &lo + int(1);
            let hi = &lo + int(3);
            BoundedSet::new(vec![(lo, mid), (hi.clone(), hi + ratio(1, 2))]).unwrap()
        }
    }
}

fn sparse_h(r: &mut StdRng, len: usize) -> Vec<Rational> {
    loop {
        let h: Vec<Rational> =
            (0..len).map(|_| if r.gen_bool(0.3) { int(r.gen_range(-2..=2)) } else { Rational::zero() }).collect();
        if h.iter().any(|v| !v.is_zero()) {
            return h;
        }
    }
}

/// Random expression over `1..=l`: a left-associated chain or a random bracketing.
pub fn expression(r: &mut StdRng, l: usize) -> SetExpr {
    let op = |r: &mut StdRng| if r.gen_bool(0.5) { SetOp::Union } else { SetOp::Intersection };
    if l == 1 || r.gen_bool(0.5) {
        let ops: Vec<SetOp> = (1..l).map(|_| op(r)).collect();
        return SetExpr::chain(&ops);
    }
    let mut order: Vec<usize> = (1..=l).collect();
    order.shuffle(r);
    let mut parts: Vec<SetExpr> = order.into_iter().map(SetExpr::Leaf).collect();
    while parts.len() > 1 {
        let i = r.gen_range(0..parts.len() - 1);
        let right = parts.remove(i + 1);
        let left = parts.remove(i);
        let joined = if op(r) == SetOp::Union { left.or(right) } else { left.and(right) };
        parts.insert(i, joined);
    }
    parts.pop().unwrap()
}

/// Linear structure with `1..=max_l` constraints in the given mode; always valid.
pub fn linear_structure(r: &mut StdRng, d: Dims, max_l: usize, mode: StructureMode) -> PropertySpec {
    loop {
        let l = r.gen_range(1..=max_l.min(d.param_len()));
        let constraints: Vec<LinearConstraint> = (0..l)
            .map(|_| LinearConstraint::new(sparse_h(r, d.param_len()), bounded_set(r)).unwrap())
            .collect();
        let expr = match mode {
            StructureMode::Intersection => SetExpr::conjunction(l),
            StructureMode::Expression => expression(r, l),
        };
        let p = PropertySpec::LinearStructure { constraints, expr, mode };
        if p.validate(d).is_ok() {
            return p;
        }
    }
}

pub fn structure(r: &mut StdRng, d: Dims, max_l: usize) -> PropertySpec {
    match r.gen_range(0..3) {
        0 => sparsity(r, d),
        1 => linear_structure(r, d, max_l, StructureMode::Intersection),
        _ => linear_structure(r, d, max_l, StructureMode::Expression),
    }
}

/// A system that meets the structure about half of the time.
pub fn system_for(r: &mut StdRng, d: Dims, p: &PropertySpec) -> SystemPair {
    let sys = system(r, d);
    if r.gen_bool(0.5) {
        return sys;
    }
    match p {
        PropertySpec::Sparsity { zeros_a, zeros_b } => {
            let mut s = sys;
            for &(i, j) in zeros_a {
                s.a[(i - 1, j - 1)] = Rational::zero();
            }
            for &(i, j) in zeros_b {
                s.b[(i - 1, j - 1)] = Rational::zero();
            }
            s
        }
        PropertySpec::LinearStructure { constraints, .. } => {
            // land every constraint value inside its set, keeping the random part
            // in the null space of the constraint rows
            match feasible_point(constraints, d.param_len()) {
                Some(theta0) => {
                    let h = Mat::from_rows(constraints.iter().map(|c| c.h.clone()).collect());
                    let k = h.kernel();
                    let y = small_mat(r, k.cols(), 1);
                    let theta = Mat::column_vector(theta0).add(&k.mul(&y));
                    SystemPair::from_params(&theta.column(0), d)
                }
                None => sys,
            }
        }
        _ => sys,
    }
}

/// Random invertible `k × k` matrix: unit lower times unit upper triangular, column-permuted.
pub fn invertible(r: &mut StdRng, k: usize) -> Mat {
    let l = Mat::from_fn(k, k, |i, j| if i == j { int(1) } else if i > j { small(r) } else { Rational::zero() });
    let u = Mat::from_fn(k, k, |i, j| if i == j { ratio(r.gen_range(1..=3), 1) } else if i < j { small(r) } else { Rational::zero() });
    let mut perm: Vec<usize> = (0..k).collect();
    perm.shuffle(r);
    l.mul(&u).select_columns(&perm)
}

/// Section of `k` columns spanning a random subspace of dimension at most `rank`.
pub fn section_of_rank(r: &mut StdRng, d: Dims, rank: usize, k: usize) -> InputSection {
    let basis = small_mat(r, d.total(), rank);
    let coeffs = small_mat(r, rank, k);
    InputSection::from_stacked(&basis.mul(&coeffs), d.n).unwrap()
}

/// Catalog of properties at the given dimensions: fixed kinds plus random structures.
pub fn catalog(r: &mut StdRng, d: Dims, structures: usize) -> Vec<PropertySpec> {
    let mut out = vec![PropertySpec::Identifiability, PropertySpec::Stabilizability, PropertySpec::Controllability];
    for _ in 0..structures {
        out.push(sparsity(r, d));
        out.push(linear_structure(r, d, 3, StructureMode::Intersection));
        out.push(linear_structure(r, d, 3, StructureMode::Expression));
    }
    out
}
