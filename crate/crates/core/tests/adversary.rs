mod common;

use std::collections::HashSet;

use propid_core::adversary::{algorithm1_signs, algorithm2_signs, counterexample, AdversaryError, Construction, Sign};
use propid_core::numerics::Mat;
use propid_core::properties::{minimum_subspace, Dims, PropertySpec, SetExpr, SetOp, StructureMode};
use propid_core::richness::{design_minimum_input, is_sufficiently_rich, InputSection};
use proptest::prelude::*;
use rand::Rng;

/// With the chosen signs the expression holds; pushing every `C₁` constraint
/// outside its set (keeping the rest) makes it fail.
fn signs_split(expr: &SetExpr, c1: &[bool], signs: &[Sign]) -> bool {
    let with = |i: usize| signs[i - 1] == Sign::Keep;
    let without = |i: usize| !c1[i - 1] && signs[i - 1] == Sign::Keep;
    expr.eval(&with) && !expr.eval(&without)
}

fn op_strategy() -> impl Strategy<Value = SetOp> {
    prop_oneof![Just(SetOp::Union), Just(SetOp::Intersection)]
}

proptest! {
    #[test]
    fn chain_signs_split_the_expression(
        (ops, c1) in (1usize..=7).prop_flat_map(|l| (
            prop::collection::vec(op_strategy(), l - 1),
            prop::collection::vec(any::<bool>(), l).prop_filter("non-empty C1", |c| c.iter().any(|&b| b)),
        ))
    ) {
        let expr = SetExpr::chain(&ops);
        let s1 = algorithm1_signs(&ops, &c1).unwrap();
        prop_assert!(signs_split(&expr, &c1, &s1));
        let s2 = algorithm2_signs(&expr, &c1).unwrap();
        prop_assert!(signs_split(&expr, &c1, &s2));
    }

    #[test]
    fn tree_signs_split_the_expression(seed in any::<u64>(), l in 1usize..=7) {
        let mut r = common::rng(seed);
        let expr = common::expression(&mut r, l);
        let mut c1: Vec<bool> = (0..l).map(|_| r.gen_bool(0.4)).collect();
        let pick = r.gen_range(0..l);
        c1[pick] = true;
        let signs = algorithm2_signs(&expr, &c1).unwrap();
        prop_assert!(signs_split(&expr, &c1, &signs), "{expr:?} {c1:?} {signs:?}");
    }
}

#[test]
fn empty_c1_is_reported() {
    let ops = [SetOp::Union];
    assert_eq!(algorithm1_signs(&ops, &[false, false]), Err(AdversaryError::EmptyC1));
    assert_eq!(algorithm2_signs(&SetExpr::chain(&ops), &[false, false]), Err(AdversaryError::EmptyC1));
}

#[test]
fn sweep_reaches_every_construction() {
    let mut r = common::rng(41);
    let mut seen = HashSet::new();
    for attempt in 0..600u64 {
        let d = if attempt % 5 == 0 { Dims::new(1, r.gen_range(1..=3)).unwrap() } else { common::dims(&mut r, 3) };
        let p = match attempt % 5 {
            0 | 1 => PropertySpec::Controllability,
            2 => PropertySpec::Stabilizability,
            3 => common::linear_structure(&mut r, d, 3, StructureMode::Intersection),
            _ => common::linear_structure(&mut r, d, 4, StructureMode::Expression),
        };
        let lp = minimum_subspace(&p, d).unwrap().dim();
        let rank = r.gen_range(0..lp);
        let s = if attempt % 10 == 1 {
            // state directions excited, inputs silent: the annihilator lives in the input block
            InputSection::new(Mat::identity(d.n), Mat::zeros(d.m, d.n)).unwrap()
        } else {
            common::section_of_rank(&mut r, d, rank, rank.max(1))
        };
        let pair = counterexample(&s, &p, attempt).unwrap();
        assert!(pair.verify(&p));
        assert_eq!(pair.shared_feedback, pair.sys_with.augmented().mul(&s.stacked()));
        assert!(s.stacked().transpose().mul(&Mat::column_vector(pair.direction.clone())).is_zero());
        seen.insert(pair.construction);
    }
    for c in [
        Construction::StabilizabilityInputDirection,
        Construction::StabilizabilityStateDirection,
        Construction::ControllabilityScalar,
        Construction::ControllabilityInputDirection,
        Construction::ControllabilityStateDirection,
        Construction::StructureScalar,
        Construction::StructureChain,
        Construction::StructureTree,
    ] {
        assert!(seen.contains(&c), "{c} never produced");
    }
}

#[test]
fn expression_pairs_are_seed_deterministic() {
    let mut r = common::rng(42);
    for seed in 0..30 {
        let d = common::dims(&mut r, 3);
        let p = common::linear_structure(&mut r, d, 3, StructureMode::Expression);
        let s = common::section_of_rank(&mut r, d, 0, 1);
        let a = counterexample(&s, &p, seed).unwrap();
        assert_eq!(a, counterexample(&s, &p, seed).unwrap());
        assert_eq!(a.seed, Some(seed));
    }
}

#[test]
fn rich_sections_and_identifiability_are_refused() {
    let mut r = common::rng(43);
    for _ in 0..50 {
        let d = common::dims(&mut r, 3);
        for p in common::catalog(&mut r, d, 1) {
            let s = design_minimum_input(&p, d).unwrap();
            assert!(is_sufficiently_rich(&s, &p).unwrap());
            let err = counterexample(&s, &p, 0).unwrap_err();
            assert!(matches!(err, AdversaryError::SectionIsRich | AdversaryError::Unsupported), "{err:?}");
        }
        let poor = common::section_of_rank(&mut r, d, 0, 1);
        assert_eq!(counterexample(&poor, &PropertySpec::Identifiability, 0), Err(AdversaryError::Unsupported));
    }
}
