mod common;

use propid_core::numerics::{distinct_eigenvalues, pbh_full_rank, Subspace};
use propid_core::properties::{
    build_m, constraint_values, controllable_subspace, has_property, is_controllable, is_stabilizable,
    is_stabilizable_by_decomposition, minimum_subspace, Dims, PropertySpec, StructureMode,
};

#[test]
fn kalman_rank_agrees_with_pbh_at_every_eigenvalue() {
    let mut r = common::rng(11);
    let mut controllable = 0;
    for _ in 0..200 {
        let d = common::dims(&mut r, 4);
        let sys = common::mixed_system(&mut r, d);
        let (eigs, _) = distinct_eigenvalues(&sys.a).unwrap();
        let pbh = eigs.iter().all(|&l| pbh_full_rank(&sys.a, &sys.b, l));
        assert_eq!(is_controllable(&sys), pbh, "{sys}");
        controllable += usize::from(pbh);
    }
    assert!(controllable > 20 && controllable < 180, "{controllable}");
}

#[test]
fn pbh_and_decomposition_routes_agree_on_stabilizability() {
    let mut r = common::rng(12);
    let mut stabilizable = 0;
    for _ in 0..300 {
        let d = common::dims(&mut r, 4);
        let sys = common::split_system(&mut r, d);
        let pbh = is_stabilizable(&sys);
        assert_eq!(pbh, is_stabilizable_by_decomposition(&sys), "{sys}");
        if is_controllable(&sys) {
            assert!(pbh);
        }
        stabilizable += usize::from(pbh);
    }
    assert!(stabilizable > 30 && stabilizable < 270, "{stabilizable}");
}

#[test]
fn controllable_subspace_is_invariant_and_contains_b() {
    let mut r = common::rng(13);
    for _ in 0..100 {
        let d = common::dims(&mut r, 4);
        let sys = common::mixed_system(&mut r, d);
        let c = controllable_subspace(&sys);
        assert!(c.contains(&Subspace::image(&sys.b)).unwrap());
        assert!(c.contains(&Subspace::image(&sys.a.mul(c.basis()))).unwrap());
    }
}

#[test]
fn sparsity_matches_its_linear_form() {
    let mut r = common::rng(14);
    for _ in 0..200 {
        let d = common::dims(&mut r, 4);
        let p = common::sparsity(&mut r, d);
        let PropertySpec::Sparsity { zeros_a, zeros_b } = &p else { unreachable!() };
        let lin = PropertySpec::sparsity_as_linear(zeros_a, zeros_b, d);
        let (lp, ll) = (minimum_subspace(&p, d).unwrap(), minimum_subspace(&lin, d).unwrap());
        assert!(lp.same_as(&ll).unwrap());
        let sys = common::system_for(&mut r, d, &p);
        assert_eq!(has_property(&sys, &p), has_property(&sys, &lin));
    }
}

#[test]
fn minimum_subspace_dimensions() {
    let mut r = common::rng(15);
    for n in 1..=4 {
        for m in 1..=4 {
            let d = Dims::new(n, m).unwrap();
            assert_eq!(minimum_subspace(&PropertySpec::Identifiability, d).unwrap().dim(), n + m);
            for _ in 0..10 {
                let p = common::linear_structure(&mut r, d, 4, StructureMode::Expression);
                let PropertySpec::LinearStructure { constraints, .. } = &p else { unreachable!() };
                let lp = minimum_subspace(&p, d).unwrap();
                assert!(lp.same_as(&Subspace::image(&build_m(constraints, d).unwrap())).unwrap());
                assert!(lp.dim() <= (constraints.len() * n).min(n + m));
            }
        }
    }
}

#[test]
fn system_for_lands_inside_constraint_sets() {
    // generator sanity: the structured branch produces members
    let mut r = common::rng(16);
    let mut members = 0;
    for _ in 0..200 {
        let d = common::dims(&mut r, 3);
        let p = common::linear_structure(&mut r, d, 3, StructureMode::Intersection);
        let sys = common::system_for(&mut r, d, &p);
        if has_property(&sys, &p) {
            let PropertySpec::LinearStructure { constraints, .. } = &p else { unreachable!() };
            let vals = constraint_values(&sys, constraints);
            assert!(constraints.iter().zip(&vals).all(|(c, v)| c.set.contains(v)));
            members += 1;
        }
    }
    assert!(members > 60, "{members}");
}
