//! Structural properties checked on generated inputs.
//!
//! Generation lives with the caller (proptest in the test suite, a seeded
//! RNG in the command-line self test); these functions only take the data.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::boxhom::box_product;
use crate::intlin::{smith_normal_form, IntMatrix};
use crate::mackey::{
    cokernel_m, constant_z, direct_sum_all, fingerprint, full_catalog, hom_space, image_m, kernel_m, MackeyFunctor,
    MackeyHom, Shape,
};

/// Smith form checks: `u a v = d`, `u` and `v` unimodular, `u u^{-1} = 1`,
/// `d` diagonal with positive factors in divisibility order.
pub fn snf_check(a: &IntMatrix) -> Result<(), String> {
    let s = smith_normal_form(a);
    if s.u.mul(a).mul(&s.v) != s.d {
        return Err("u a v != d".into());
    }
    for (name, m) in [("u", &s.u), ("v", &s.v)] {
        if !m.det().abs().is_one() {
            return Err(format!("{name} is not unimodular"));
        }
    }
    if s.u.mul(&s.u_inv) != IntMatrix::identity(a.rows()) {
        return Err("u_inv is not the inverse of u".into());
    }
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            let on = i == j && i < s.factors.len();
            if !on && !s.d[(i, j)].is_zero() {
                return Err(format!("d has a stray entry at ({i}, {j})"));
            }
        }
    }
    if s.factors.iter().any(|f| !f.is_positive()) {
        return Err("nonpositive invariant factor".into());
    }
    if s.factors.windows(2).any(|w| !(&w[1] % &w[0]).is_zero()) {
        return Err("factors out of divisibility order".into());
    }
    Ok(())
}

/// A random construction: two direct sums of catalog functors and a
/// combination of the basis of homomorphisms between them.
#[derive(Clone, Debug)]
pub struct Recipe {
    pub shape: Shape,
    /// Indices into [`full_catalog`], taken modulo its length.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// Coefficients of the homomorphism basis; missing ones are zero.
    pub coeffs: Vec<i64>,
}

fn sum(shape: Shape, catalog: &[(String, MackeyFunctor)], idx: &[usize]) -> MackeyFunctor {
    let parts: Vec<MackeyFunctor> = idx.iter().map(|&i| catalog[i % catalog.len()].1.clone()).collect();
    direct_sum_all(shape, &parts)
}

/// Builds the sums, the map, and its kernel, image and cokernel, and checks
/// the Mackey axioms on each.
pub fn recipe_check(r: &Recipe) -> Result<(), String> {
    let catalog = full_catalog(r.shape);
    let (a, b) = (sum(r.shape, &catalog, &r.left), sum(r.shape, &catalog, &r.right));
    let space = hom_space(&a, &b);
    let maps = (0..=r.shape.n)
        .map(|l| {
            let mut acc = IntMatrix::zeros(b.levels[l].num_generators(), a.levels[l].num_generators());
            for (rep, &c) in space.reps.iter().zip(&r.coeffs) {
                acc = acc.add(&rep.maps[l].matrix.scale(&BigInt::from(c)));
            }
            b.levels[l].reduce_matrix(&acc)
        })
        .collect();
    let f = MackeyHom::new(a.clone(), b.clone(), maps).map_err(|e| format!("combination is not natural: {e}"))?;
    let parts = [("source", a), ("target", b), ("kernel", kernel_m(&f)), ("image", image_m(&f)), ("cokernel", cokernel_m(&f))];
    for (name, m) in parts {
        let v = m.validate();
        if !v.is_empty() {
            return Err(format!("{name} violates {:?}", v[0]));
        }
    }
    Ok(())
}

/// Unit, commutativity and associativity of the box product on the catalog,
/// up to fingerprint. Returns the failures.
pub fn box_laws(shape: Shape) -> Vec<String> {
    let cat = full_catalog(shape);
    let z = constant_z(shape);
    let mut bad = vec![];
    let boxed = |x: &MackeyFunctor, y: &MackeyFunctor| box_product(x, y).map(|b| fingerprint(&b));
    let mut pair = std::collections::HashMap::new();
    for (i, (ni, mi)) in cat.iter().enumerate() {
        match box_product(&z, mi) {
            Ok(b) if fingerprint(&b) == fingerprint(mi) => {}
            _ => bad.push(format!("Z □ {ni} != {ni}")),
        }
        for (j, (nj, mj)) in cat.iter().enumerate().skip(i) {
            let (Ok(x), Ok(y)) = (box_product(mi, mj), box_product(mj, mi)) else {
                bad.push(format!("{ni} □ {nj} failed"));
                continue;
            };
            if fingerprint(&x) != fingerprint(&y) {
                bad.push(format!("{ni} □ {nj} != {nj} □ {ni}"));
            }
            pair.insert((i, j), x.clone());
            pair.insert((j, i), y);
        }
    }
    for i in 0..cat.len() {
        for j in 0..cat.len() {
            for k in 0..cat.len() {
                let (l, r) = (boxed(&pair[&(i, j)], &cat[k].1), boxed(&cat[i].1, &pair[&(j, k)]));
                if l.is_err() || l != r {
                    bad.push(format!("({} □ {}) □ {} is not associative", cat[i].0, cat[j].0, cat[k].0));
                }
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_examples() {
        snf_check(&IntMatrix::from_i64(2, 3, &[2, 4, 4, -6, 6, 12])).unwrap();
        snf_check(&IntMatrix::zeros(2, 2)).unwrap();
    }

    #[test]
    fn recipe_example() {
        let r = Recipe { shape: Shape::new(2, 2).unwrap(), left: vec![0, 5], right: vec![2], coeffs: vec![1, -1, 2] };
        recipe_check(&r).unwrap();
    }
}
