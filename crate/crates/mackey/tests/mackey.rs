use mackey::mackey::{
    direct_sum_all, direct_sum_m, dual_levelwise, fingerprint, forms, from_json, full_catalog, parse_catalog,
    pullback_psi, to_json, torsion_catalog, DualMode, MackeyFunctor, Shape,
};
use mackey::verify::props::{recipe_check, Recipe};
use proptest::prelude::*;

fn shapes() -> Vec<Shape> {
    [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (2, 3)].iter().map(|&(p, n)| Shape::new(p, n).unwrap()).collect()
}

fn shape() -> impl Strategy<Value = Shape> {
    prop::sample::select(shapes())
}

/// A direct sum of up to three catalog functors.
fn catalog_sum() -> impl Strategy<Value = (Shape, MackeyFunctor)> {
    (shape(), prop::collection::vec(any::<prop::sample::Index>(), 1..=3)).prop_map(|(s, idx)| {
        let cat = full_catalog(s);
        let parts: Vec<MackeyFunctor> = idx.iter().map(|i| i.get(&cat).1.clone()).collect();
        (s, direct_sum_all(s, &parts))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernels_and_cokernels_validate(
        s in shape(),
        left in prop::collection::vec(0usize..64, 1..=3),
        right in prop::collection::vec(0usize..64, 1..=2),
        coeffs in prop::collection::vec(-4i64..=4, 12),
    ) {
        prop_assert_eq!(recipe_check(&Recipe { shape: s, left, right, coeffs }), Ok(()));
    }

    #[test]
    fn torsion_at_the_bottom_means_torsion_everywhere((_, m) in catalog_sum()) {
        prop_assume!(m.is_cohomological() && m.levels[0].is_torsion());
        prop_assert!(m.levels.iter().all(|g| g.free_rank() == 0));
    }

    #[test]
    fn direct_sum_is_symmetric_up_to_fingerprint((s, a) in catalog_sum(), i in any::<prop::sample::Index>()) {
        let cat = full_catalog(s);
        let b = &i.get(&cat).1;
        prop_assert_eq!(fingerprint(&direct_sum_m(&a, b)), fingerprint(&direct_sum_m(b, &a)));
    }

    #[test]
    fn json_round_trip((_, m) in catalog_sum()) {
        let back = from_json(&to_json(&m)).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(to_json(&back), to_json(&m));
    }

    #[test]
    fn pullback_is_additive((s, a) in catalog_sum(), i in any::<prop::sample::Index>(), k in 1usize..=2) {
        let cat = full_catalog(s);
        let b = &i.get(&cat).1;
        let (pa, pb) = (pullback_psi(&a, k).unwrap(), pullback_psi(b, k).unwrap());
        let sum = pullback_psi(&direct_sum_m(&a, b), k).unwrap();
        prop_assert!(sum.validate().is_empty());
        prop_assert!(sum.is_cohomological());
        prop_assert_eq!(fingerprint(&sum), fingerprint(&direct_sum_m(&pa, &pb)));
    }
}

#[test]
fn star_dual_is_an_involution_on_forms() {
    for s in shapes() {
        for (name, m) in forms(s) {
            let twice = dual_levelwise(&dual_levelwise(&m, DualMode::Star), DualMode::Star);
            assert_eq!(fingerprint(&twice), fingerprint(&m), "{name} over {s}");
        }
    }
}

#[test]
fn e_dual_is_an_involution_on_torsion() {
    for s in shapes() {
        for (name, m) in torsion_catalog(s) {
            let once = dual_levelwise(&m, DualMode::E);
            assert!(once.validate().is_empty(), "{name}^E over {s}");
            let twice = dual_levelwise(&once, DualMode::E);
            assert_eq!(fingerprint(&twice), fingerprint(&m), "{name} over {s}");
        }
    }
}

#[test]
fn pullback_preserves_the_axioms() {
    for s in shapes() {
        for (name, m) in full_catalog(s) {
            let up = pullback_psi(&m, 1).unwrap();
            assert!(up.validate().is_empty(), "{name} over {s}");
            assert!(up.is_cohomological(), "{name} over {s}");
        }
    }
}

#[test]
fn catalog_names_round_trip() {
    for s in shapes() {
        for (name, m) in full_catalog(s) {
            assert_eq!(parse_catalog(s, &name).unwrap(), m, "{name} over {s}");
        }
    }
}
