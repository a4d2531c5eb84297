use std::collections::BTreeSet;

use mackey::intlin::{
    ext1_ab, hom_ab, kernel_basis, present, AbComplex, Canonical, FgAbGroup, GroupHom, IntMatrix,
};
use mackey::verify::props::snf_check;
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

fn matrix(max: usize, entries: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-entries..=entries, r * c).prop_map(move |d| IntMatrix::from_i64(r, c, &d))
    })
}

/// Product of random elementary operations, swaps and sign changes.
fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -3i64..=3, 0u8..3), 0..12).prop_map(move |ops| {
        let mut m = IntMatrix::identity(n);
        for (i, j, q, kind) in ops {
            let mut e = IntMatrix::identity(n);
            match kind {
                0 if i != j => e[(i, j)] = BigInt::from(q),
                1 => e.swap_rows(i, j),
                _ => e[(i, i)] = BigInt::from(-1),
            }
            m = e.mul(&m);
        }
        m
    })
}

fn canonical(a: &IntMatrix) -> Canonical {
    present(a.rows(), a).group.canonical()
}

proptest! {
    #[test]
    fn smith_form_recomposes(a in matrix(7, 40)) {
        prop_assert_eq!(snf_check(&a), Ok(()));
    }

    #[test]
    fn smith_form_of_sparse_matrices(a in matrix(9, 1)) {
        prop_assert_eq!(snf_check(&a), Ok(()));
    }

    #[test]
    fn presentation_is_invariant_under_base_change(
        (a, p, q) in (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
            (prop::collection::vec(-9i64..=9, r * c).prop_map(move |d| IntMatrix::from_i64(r, c, &d)),
             unimodular(r), unimodular(c))
        })
    ) {
        prop_assert_eq!(canonical(&a), canonical(&p.mul(&a).mul(&q)));
    }
}

fn group(torsion: &[u64], free: usize) -> FgAbGroup {
    let mut orders: Vec<BigInt> = torsion.iter().map(|&o| BigInt::from(o)).collect();
    orders.extend(std::iter::repeat(BigInt::from(0)).take(free));
    FgAbGroup::from_orders(&orders)
}

/// All groups with invariant factors in {2, 3, 4} (at most two of them) and free rank at most one.
fn small_groups() -> Vec<(Vec<u64>, usize)> {
    let mut tors = vec![vec![]];
    for a in [2, 3, 4] {
        tors.push(vec![a]);
        for b in [2, 3, 4] {
            if a <= b {
                tors.push(vec![a, b]);
            }
        }
    }
    tors.into_iter().flat_map(|t| [(t.clone(), 0), (t, 1)]).collect()
}

/// Elements of a finite product of cyclic groups.
fn elements(moduli: &[u64]) -> Vec<Vec<u64>> {
    moduli.iter().fold(vec![vec![]], |acc, &m| {
        acc.into_iter().flat_map(|v| (0..m).map(move |x| [v.clone(), vec![x]].concat())).collect()
    })
}

fn times(d: u64, x: &[u64], moduli: &[u64]) -> Vec<u64> {
    x.iter().zip(moduli).map(|(a, m)| a * d % m).collect()
}

/// Number of elements killed by `d`, for each `d` up to 12: determines a finite abelian group.
fn kill_counts_of(orders: &[BigInt]) -> Vec<u64> {
    (1..=12u64)
        .map(|d| {
            orders.iter().filter(|o| **o != BigInt::from(0)).map(|o| o.gcd(&BigInt::from(d))).product::<BigInt>()
        })
        .map(|b| u64::try_from(b).unwrap())
        .collect()
}

fn torsion_of(g: &FgAbGroup) -> Vec<BigInt> {
    g.canonical().torsion
}

/// Hom(A, B) by enumerating images of the generators of A in the torsion of B.
fn brute_hom(a: &(Vec<u64>, usize), b: &(Vec<u64>, usize)) -> (Vec<u64>, usize) {
    let bt = &b.0;
    let pool = elements(bt);
    let gens: Vec<u64> = a.0.iter().copied().chain(std::iter::repeat(0).take(a.1)).collect();
    let choices: Vec<Vec<&Vec<u64>>> = gens
        .iter()
        .map(|&o| pool.iter().filter(|x| o == 0 || times(o, x, bt).iter().all(|&y| y == 0)).collect())
        .collect();
    let homs = choices.iter().fold(vec![vec![]], |acc: Vec<Vec<&Vec<u64>>>, c| {
        acc.into_iter().flat_map(|v| c.iter().map(move |x| [v.clone(), vec![*x]].concat())).collect()
    });
    let counts = (1..=12)
        .map(|d| homs.iter().filter(|f| f.iter().all(|x| times(d, x, bt).iter().all(|&y| y == 0))).count() as u64)
        .collect();
    (counts, a.1 * b.1)
}

/// Ext(A, B) = sum over the torsion factors `a` of A of B/aB.
fn brute_ext(a: &(Vec<u64>, usize), b: &(Vec<u64>, usize)) -> Vec<u64> {
    let mut counts = vec![1u64; 12];
    for &o in &a.0 {
        // B/oB with B's free summands replaced by Z/o
        let moduli: Vec<u64> = b.0.iter().copied().chain(std::iter::repeat(o).take(b.1)).collect();
        let all = elements(&moduli);
        let sub: BTreeSet<Vec<u64>> = all.iter().map(|x| times(o, x, &moduli)).collect();
        let coset = |x: &Vec<u64>| -> Vec<u64> {
            sub.iter().map(|s| x.iter().zip(s).zip(&moduli).map(|((p, q), m)| (p + q) % m).collect()).min().unwrap()
        };
        let reps: BTreeSet<Vec<u64>> = all.iter().map(coset).collect();
        for d in 1..=12u64 {
            let killed = reps.iter().filter(|x| sub.contains(&times(d, x, &moduli))).count() as u64;
            counts[d as usize - 1] *= killed;
        }
    }
    counts
}

#[test]
fn hom_and_ext_match_enumeration() {
    let all = small_groups();
    for a in &all {
        for b in &all {
            let (ga, gb) = (group(&a.0, a.1), group(&b.0, b.1));
            let (h, _) = hom_ab(&ga, &gb);
            let (counts, free) = brute_hom(a, b);
            assert_eq!(kill_counts_of(&torsion_of(&h)), counts, "Hom({a:?}, {b:?})");
            assert_eq!(h.free_rank(), free, "Hom({a:?}, {b:?})");
            let e = ext1_ab(&ga, &gb);
            assert!(e.is_torsion());
            assert_eq!(kill_counts_of(&torsion_of(&e)), brute_ext(a, b), "Ext({a:?}, {b:?})");
        }
    }
}

/// A free chain complex `Z^r2 -> Z^r1 -> Z^r0` with random differentials.
fn complex() -> impl Strategy<Value = (IntMatrix, IntMatrix)> {
    (1usize..=4, 1usize..=4, 1usize..=4).prop_flat_map(|(r0, r1, r2)| {
        (
            prop::collection::vec(-4i64..=4, r0 * r1).prop_map(move |d| IntMatrix::from_i64(r0, r1, &d)),
            prop::collection::vec(-3i64..=3, r1 * r2),
        )
            .prop_map(move |(d1, raw)| {
                let k = kernel_basis(&d1);
                let coeffs = IntMatrix::from_i64(k.cols(), r2, &raw[..k.cols() * r2]);
                (d1, k.mul(&coeffs))
            })
    })
}

fn build(mats: &[IntMatrix]) -> AbComplex {
    let mut terms = vec![FgAbGroup::free(mats[0].rows())];
    terms.extend(mats.iter().map(|m| FgAbGroup::free(m.cols())));
    let diffs = mats
        .iter()
        .enumerate()
        .map(|(i, m)| GroupHom::new_unchecked(terms[i + 1].clone(), terms[i].clone(), m.clone()))
        .collect();
    AbComplex::new(0, terms, diffs).unwrap()
}

/// Adjoins `Z --1--> Z` in degrees `at + 1 -> at`.
fn with_contractible(mats: &[IntMatrix], at: usize) -> Vec<IntMatrix> {
    mats.iter()
        .enumerate()
        .map(|(i, m)| {
            let (extra_rows, extra_cols) = (usize::from(i == at || i == at + 1), usize::from(i == at || i + 1 == at));
            let mut out = IntMatrix::zeros(m.rows() + extra_rows, m.cols() + extra_cols);
            out.set_block(0, 0, m);
            if i == at {
                out[(m.rows(), m.cols())] = BigInt::from(1);
            }
            out
        })
        .collect()
}

proptest! {
    #[test]
    fn contractible_summand_does_not_change_homology((d1, d2) in complex(), at in 0usize..2) {
        let mats = [d1, d2];
        let h = |c: &AbComplex| c.homology().iter().map(|g| g.group().canonical()).collect::<Vec<_>>();
        prop_assert_eq!(h(&build(&mats)), h(&build(&with_contractible(&mats, at))));
    }
}
