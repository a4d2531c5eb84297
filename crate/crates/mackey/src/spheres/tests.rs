use super::*;
use crate::mackey::{b_form, constant_z, form_z, pullback_psi, z_minus, z_minus_dotted, z_star};

fn sh(p: u64, n: usize) -> Shape {
    Shape::new(p, n).unwrap()
}

fn label(s: Shape, text: &str) -> RepLabel {
    RepLabel::parse(s, text).unwrap()
}

fn expect(h: &GradedMackey, want: &[(i64, MackeyFunctor)]) {
    let mut g = GradedMackey::new(h.shape, 0, 0);
    for (d, m) in want {
        g.insert(*d, m.clone());
    }
    assert_eq!(h.support(), g.support(), "support");
    assert!(h.same_as(&g), "values differ");
}

#[test]
fn s_zero() {
    let s = sh(3, 2);
    expect(&bredon_homology(&label(s, "0")).unwrap(), &[(0, constant_z(s))]);
}

#[test]
fn s_lambda_over_cp() {
    for p in [2, 3, 5] {
        let s = sh(p, 1);
        let b1 = b_form(s, &[1]).unwrap();
        let h = bredon_homology(&RepLabel::lambda(s, 0, 1)).unwrap();
        expect(&h, &[(0, b1.clone()), (2, constant_z(s))]);
        let h = bredon_homology(&RepLabel::lambda(s, 0, 2)).unwrap();
        expect(&h, &[(0, b1.clone()), (2, b1), (4, constant_z(s))]);
        let h = bredon_homology(&RepLabel::lambda(s, 0, -1)).unwrap();
        expect(&h, &[(-2, z_star(s))]);
    }
}

#[test]
fn lambda_top_degree_zero_has_orbit_order() {
    let s = sh(3, 2);
    let h = bredon_homology(&RepLabel::lambda(s, 1, 1)).unwrap();
    assert_eq!(h.degree(0).levels[2].to_string(), "Z/3");
    assert_eq!(h.degree(0).levels[0].to_string(), "0");
}

#[test]
fn sigma_over_c2() {
    let s = sh(2, 1);
    let h = bredon_homology(&RepLabel::sigma(s, 1).unwrap()).unwrap();
    expect(&h, &[(0, b_form(s, &[1]).unwrap()), (1, z_minus(s).unwrap())]);
}

#[test]
fn minus_two_sigma_is_dual_constant() {
    let s = sh(2, 1);
    expect(&bredon_homology(&label(s, "-2s")).unwrap(), &[(-2, z_star(s))]);
}

#[test]
fn dotted_sign_module_at_minus_three_sigma() {
    let s = sh(2, 1);
    let dotted = z_minus_dotted(s).unwrap();
    assert_eq!(dotted.levels[1].to_string(), "Z/2");
    let h = bredon_homology(&label(s, "-3s")).unwrap();
    expect(&h, &[(-3, dotted)]);
}

#[test]
fn form_one_zero_from_spheres() {
    for p in [2, 3] {
        let s = sh(p, 2);
        let h = bredon_homology(&label(s, "L1-L0")).unwrap();
        expect(&h, &[(0, form_z(s, &[1, 0]).unwrap())]);
    }
}

#[test]
fn positive_grid_over_cp2() {
    // torsion below the top degree, Z at the top
    let s = sh(3, 2);
    let h = bredon_homology(&label(s, "L1+L0")).unwrap();
    expect(
        &h,
        &[(0, b_form(s, &[0, 1]).unwrap()), (2, b_form(s, &[1, 1]).unwrap()), (4, constant_z(s))],
    );
}

#[test]
fn twist_does_not_matter() {
    let s = sh(5, 2);
    for k in 0..2 {
        let base = bredon_homology(&RepLabel::lambda(s, k, 1)).unwrap();
        for r in [2, 3, 4, 6, 7] {
            let mut v = RepLabel::lambda(s, k, 1);
            v.twist[k] = r;
            assert!(bredon_homology(&v).unwrap().same_as(&base), "k = {k}, r = {r}");
        }
    }
}

#[test]
fn twisted_minus_untwisted_is_a_point() {
    let s = sh(5, 1);
    for r in [2, 3, 4, 6, 7] {
        let a = chain_lambda(s, 0, r).unwrap();
        let b = chain_lambda(s, 0, 1).unwrap().dualize();
        let h = a.smash(&b).homology().unwrap();
        expect(&h, &[(0, constant_z(s))]);
    }
}

#[test]
fn pulled_back_labels_match_pullback() {
    let big = sh(3, 2);
    let small = sh(3, 1);
    for (a, b) in [(1, 0), (2, 0), (-1, 0), (-2, 3)] {
        let h = bredon_homology(&label(big, &format!("{a}L1+{b}"))).unwrap();
        let q = bredon_homology(&label(small, &format!("{a}L0+{b}"))).unwrap();
        let pulled = q.map(big, |m| pullback_psi(m, 1).unwrap());
        assert!(h.same_as(&pulled), "a = {a}, b = {b}");
    }
}

#[test]
fn forms_to_reps() {
    let s = sh(2, 3);
    let v = form_to_rep(&form_z(s, &[1, 0, 1]).unwrap()).unwrap();
    assert_eq!(v, label(s, "-L0+L1-L2+2"));
    let s = sh(3, 2);
    assert_eq!(form_to_rep(&constant_z(s)).unwrap(), RepLabel::zero(s));
    assert_eq!(form_to_rep(&form_z(s, &[0, 1]).unwrap()).unwrap(), label(s, "2-L1"));
    assert!(matches!(form_to_rep(&b_form(s, &[1, 0]).unwrap()), Err(SphereError::NotAForm(_))));
}

#[test]
fn every_form_is_a_sphere() {
    for (p, n) in [(2, 2), (3, 2)] {
        let s = sh(p, n);
        for bits in 0..(1 << n) {
            let t: Vec<u8> = (0..n).map(|i| (bits >> i) & 1).collect();
            let m = form_z(s, &t).unwrap();
            let h = bredon_homology(&form_to_rep(&m).unwrap()).unwrap();
            expect(&h, &[(0, m)]);
        }
    }
}

#[test]
fn anderson_small() {
    for (p, text) in [(3, "0"), (3, "L0"), (3, "2L0"), (2, "s"), (2, "-3s")] {
        let s = sh(p, 1);
        let r = anderson_check(&label(s, text)).unwrap();
        assert!(r.is_ok(), "{text}: {:?}", r.mismatches);
    }
}

#[test]
fn crosscheck_one_zero_against_zero_one() {
    let s = sh(2, 2);
    let r = ext_sphere_crosscheck(&form_z(s, &[1, 0]).unwrap(), &form_z(s, &[0, 1]).unwrap()).unwrap();
    assert!(r.is_ok(), "{:?}", r.mismatches);
    let z = constant_z(s);
    assert!(ext_sphere_crosscheck(&z, &z).unwrap().is_ok());
}

#[test]
fn models_agree_on_actual_representations() {
    for (p, n, text) in [(2, 2, "s+L0"), (2, 2, "3s+2L0"), (3, 2, "2L1+L0"), (2, 3, "s+L1+L0"), (5, 1, "3L0")] {
        let v = label(sh(p, n), text);
        let a = sphere_chain(&v).unwrap().homology().unwrap();
        let b = reduced_chain(&v).unwrap().homology().unwrap();
        assert!(a.same_as(&b), "{text}");
    }
}
