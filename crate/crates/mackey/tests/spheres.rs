use mackey::mackey::{pullback_psi, Shape};
use mackey::spheres::{bredon_homology, reduced_chain, sphere_chain, RepLabel};
use proptest::prelude::*;

fn shapes() -> Vec<Shape> {
    [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)].iter().map(|&(p, n)| Shape::new(p, n).unwrap()).collect()
}

fn label_in(shape: Shape, reach: i64) -> impl Strategy<Value = RepLabel> {
    let sigma = if shape.p == 2 { reach } else { 0 };
    (
        prop::collection::vec(-reach..=reach, shape.n),
        -sigma..=sigma,
        -2i64..=2,
        prop::collection::vec(1u64..=7, shape.n),
    )
        .prop_map(move |(a, s, t, twist)| {
            // a twist on an absent summand does not survive printing
            let twist = twist.iter().zip(&a).map(|(&r, &c)| if r % shape.p == 0 || c == 0 { 1 } else { r }).collect();
            RepLabel { shape, a, t, s, twist }.canonical()
        })
}

fn label(reach: i64) -> impl Strategy<Value = RepLabel> {
    prop::sample::select(shapes()).prop_flat_map(move |s| label_in(s, reach))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn labels_print_and_parse_back(v in label(9)) {
        prop_assert_eq!(RepLabel::parse(v.shape, &v.to_string()).unwrap(), v);
    }

    #[test]
    fn chains_are_complexes_with_underlying_sphere(v in label(2)) {
        let c = sphere_chain(&v).unwrap();
        prop_assert!(c.is_complex());
        prop_assert!(c.check_underlying(v.dim()).is_ok());
        if v.is_actual() {
            let r = reduced_chain(&v).unwrap();
            prop_assert!(r.is_complex());
            prop_assert!(r.check_underlying(v.dim()).is_ok());
        }
    }

    #[test]
    fn both_cell_models_agree(v in label(2)) {
        prop_assume!(v.is_actual());
        let full = sphere_chain(&v).unwrap().homology().unwrap();
        let small = reduced_chain(&v).unwrap().homology().unwrap();
        prop_assert!(full.same_as(&small));
    }

    #[test]
    fn labels_from_the_quotient_pull_back(
        (s, a, t) in prop::sample::select(vec![(2u64, 2usize), (3, 2), (2, 3)])
            .prop_flat_map(|(p, n)| (Just(Shape::new(p, n).unwrap()), prop::collection::vec(-2i64..=2, n - 1), -2i64..=2))
    ) {
        let q = Shape::new(s.p, s.n - 1).unwrap();
        let small = RepLabel { shape: q, a: a.clone(), t, s: 0, twist: vec![1; q.n] }.canonical();
        let big = RepLabel { shape: s, a: [vec![0], a].concat(), t, s: 0, twist: vec![1; s.n] }.canonical();
        let h = bredon_homology(&big).unwrap();
        let pulled = bredon_homology(&small).unwrap().map(s, |m| pullback_psi(m, 1).unwrap());
        prop_assert!(h.same_as(&pulled), "{} over {}", big, s);
    }

    /// `C_{2+} -> S^0 -> S^σ` smashed with `S^V`, at the top level.
    #[test]
    fn sign_cofiber_sequence_is_exact(v in prop::sample::select(vec![(2u64, 1usize), (2, 2)])
        .prop_flat_map(|(p, n)| label_in(Shape::new(p, n).unwrap(), 2)))
    {
        let n = v.shape.n;
        let h = bredon_homology(&v).unwrap();
        let hs = bredon_homology(&v.add(&RepLabel::sigma(v.shape, 1).unwrap())).unwrap();
        let (lo, hi) = (h.lo.min(hs.lo) - 1, h.hi.max(hs.hi) + 1);
        let mut euler = 0i64;
        for d in lo..=hi {
            let (a, b, c) = (h.degree(d).levels[n - 1].clone(), h.degree(d).levels[n].clone(), hs.degree(d).levels[n].clone());
            let sign = if d % 2 == 0 { 1 } else { -1 };
            euler += sign * (a.free_rank() as i64 - b.free_rank() as i64 + c.free_rank() as i64);
            if let (Some(x), Some(z)) = (a.order(), c.order()) {
                let y = b.order();
                prop_assert!(y.is_some_and(|y| (x * z) % y == 0.into()), "degree {} of {}", d, v);
            }
        }
        prop_assert_eq!(euler, 0, "{}", v);
    }
}

#[test]
fn twisting_a_rotation_changes_nothing() {
    for s in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2)].map(|(p, n)| Shape::new(p, n).unwrap()) {
        for k in 0..s.n {
            for c in [-2, -1, 1, 2] {
                let base = bredon_homology(&RepLabel::lambda(s, k, c)).unwrap();
                for r in (2..=7).filter(|r| r % s.p != 0) {
                    let mut v = RepLabel::lambda(s, k, c);
                    v.twist[k] = r;
                    assert!(bredon_homology(&v).unwrap().same_as(&base), "{v} over {s}");
                }
            }
        }
    }
}
