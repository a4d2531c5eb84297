use num_bigint::BigInt;
use num_traits::Zero;

use super::{MackeyError, MackeyFunctor, MackeyHom, Shape};
use crate::intlin::{cokernel, image, kernel, quotient, subgroup, FgAbGroup, GroupHom, IntMatrix, Subquotient};

/// A functor built levelwise as subquotients of an ambient functor, with the
/// subquotient data kept so callers can move elements in and out.
#[derive(Clone, Debug)]
pub struct SubFunctor {
    pub functor: MackeyFunctor,
    pub subs: Vec<Subquotient>,
}

impl SubFunctor {
    /// Inclusion-style map into the ambient functor (meaningful for subfunctors).
    pub fn lift(&self, k: usize) -> &IntMatrix {
        &self.subs[k].lift
    }
}

/// Transports the structure maps of `ambient` to the given levelwise subquotients.
/// Each lattice must contain the relations of its ambient level and be stable
/// under the structure maps; otherwise an error is returned.
pub fn subquotient_functor(ambient: &MackeyFunctor, subs: Vec<Subquotient>) -> Result<SubFunctor, MackeyError> {
    let n = ambient.n();
    let carry = |f: &GroupHom, from: usize, to: usize| -> Result<IntMatrix, MackeyError> {
        subs[to]
            .project_matrix(&f.matrix.mul(&subs[from].lift))
            .ok_or_else(|| MackeyError::Shape(format!("subquotient is not stable under a map {from} -> {to}")))
    };
    let mut res = vec![];
    let mut tr = vec![];
    for k in 0..n {
        res.push(carry(&ambient.res[k], k + 1, k)?);
        tr.push(carry(&ambient.tr[k], k, k + 1)?);
    }
    let weyl = (0..=n).map(|k| carry(&ambient.weyl[k], k, k)).collect::<Result<Vec<_>, _>>()?;
    let levels = subs.iter().map(|s| s.group.clone()).collect();
    let functor = MackeyFunctor::from_matrices(ambient.shape, levels, res, tr, weyl)?;
    debug_assert!(functor.validate().is_empty());
    Ok(SubFunctor { functor, subs })
}

pub fn kernel_m(f: &MackeyHom) -> MackeyFunctor {
    let subs = f.maps.iter().map(kernel).collect();
    subquotient_functor(&f.source, subs).expect("kernel of a natural map").functor
}

pub fn cokernel_m(f: &MackeyHom) -> MackeyFunctor {
    let subs = f.maps.iter().map(cokernel).collect();
    subquotient_functor(&f.target, subs).expect("cokernel of a natural map").functor
}

pub fn image_m(f: &MackeyHom) -> MackeyFunctor {
    let subs = f.maps.iter().map(image).collect();
    subquotient_functor(&f.target, subs).expect("image of a natural map").functor
}

pub fn direct_sum_m(a: &MackeyFunctor, b: &MackeyFunctor) -> MackeyFunctor {
    assert_eq!(a.shape, b.shape, "direct sum over different groups");
    let sum = |x: &[GroupHom], y: &[GroupHom]| x.iter().zip(y).map(|(f, g)| f.direct_sum(g)).collect();
    MackeyFunctor {
        shape: a.shape,
        levels: a.levels.iter().zip(&b.levels).map(|(x, y)| x.direct_sum(y)).collect(),
        res: sum(&a.res, &b.res),
        tr: sum(&a.tr, &b.tr),
        weyl: sum(&a.weyl, &b.weyl),
    }
}

pub fn direct_sum_all(shape: Shape, parts: &[MackeyFunctor]) -> MackeyFunctor {
    parts.iter().fold(super::zero_functor(shape), |acc, m| direct_sum_m(&acc, m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DualMode {
    /// `Hom(-, Z)` levelwise.
    Star,
    /// `Ext(-, Z)` levelwise.
    E,
}

fn positions(g: &FgAbGroup, torsion: bool) -> Vec<usize> {
    (0..g.num_generators()).filter(|&i| g.orders()[i].is_zero() != torsion).collect()
}

fn dual_group(g: &FgAbGroup, mode: DualMode) -> FgAbGroup {
    match mode {
        DualMode::Star => FgAbGroup::free(positions(g, false).len()),
        DualMode::E => {
            FgAbGroup::diagonal_unchecked(positions(g, true).into_iter().map(|i| g.orders()[i].clone()).collect())
        }
    }
}

/// Matrix of the dual of `f: A -> B`, a map `D(B) -> D(A)`.
fn dual_matrix(f: &GroupHom, mode: DualMode) -> IntMatrix {
    let torsion = mode == DualMode::E;
    let pa = positions(&f.source, torsion);
    let pb = positions(&f.target, torsion);
    let mut m = IntMatrix::zeros(pa.len(), pb.len());
    for (r, &a) in pa.iter().enumerate() {
        for (c, &b) in pb.iter().enumerate() {
            let x = &f.matrix[(b, a)];
            m[(r, c)] = match mode {
                DualMode::Star => x.clone(),
                DualMode::E => x * &f.source.orders()[a] / &f.target.orders()[b],
            };
        }
    }
    m
}

/// Levelwise `Hom(-, Z)` or `Ext(-, Z)`; restrictions and transfers swap and
/// the Weyl action is inverted.
pub fn dual_levelwise(m: &MackeyFunctor, mode: DualMode) -> MackeyFunctor {
    let n = m.n();
    let levels = m.levels.iter().map(|g| dual_group(g, mode)).collect();
    let res = (0..n).map(|k| dual_matrix(&m.tr[k], mode)).collect();
    let tr = (0..n).map(|k| dual_matrix(&m.res[k], mode)).collect();
    let weyl = (0..=n).map(|k| dual_matrix(&m.weyl_inverse(k), mode)).collect();
    MackeyFunctor::from_matrices(m.shape, levels, res, tr, weyl).expect("dual has matching shapes")
}

/// Inflation along `C_{p^{n+k}} -> C_{p^n}` for a cohomological functor over the
/// quotient: levels below `k` repeat the bottom level with identity restrictions
/// and transfers `p`.
pub fn pullback_psi(m: &MackeyFunctor, k: usize) -> Result<MackeyFunctor, MackeyError> {
    m.require_cohomological()?;
    let shape = Shape { p: m.p(), n: m.n() + k };
    let src = |j: usize| j.saturating_sub(k);
    let levels: Vec<FgAbGroup> = (0..=shape.n).map(|j| m.levels[src(j)].clone()).collect();
    let p = BigInt::from(m.p());
    let mut res = vec![];
    let mut tr = vec![];
    for j in 0..shape.n {
        if j < k {
            let id = IntMatrix::identity(levels[j].num_generators());
            tr.push(id.scale(&p));
            res.push(id);
        } else {
            res.push(m.res[j - k].matrix.clone());
            tr.push(m.tr[j - k].matrix.clone());
        }
    }
    let weyl = (0..=shape.n).map(|j| m.weyl[src(j)].matrix.clone()).collect();
    MackeyFunctor::new(shape, levels, res, tr, weyl)
}

fn torsion_gens(g: &FgAbGroup) -> IntMatrix {
    let idx = positions(g, true);
    IntMatrix::identity(g.num_generators()).select_cols(&idx)
}

/// Levelwise torsion subgroups.
pub fn torsion_part(m: &MackeyFunctor) -> MackeyFunctor {
    let subs = m.levels.iter().map(|g| subgroup(g, &torsion_gens(g))).collect();
    subquotient_functor(m, subs).expect("torsion is functorial").functor
}

/// Levelwise quotients by torsion.
pub fn free_quotient(m: &MackeyFunctor) -> MackeyFunctor {
    let subs = m.levels.iter().map(|g| quotient(g, &torsion_gens(g))).collect();
    subquotient_functor(m, subs).expect("torsion is functorial").functor
}

#[cfg(test)]
mod tests {
    use super::super::{b_form, constant_z, form_z, z_star, zero_functor};
    use super::*;

    fn sh(p: u64, n: usize) -> Shape {
        Shape::new(p, n).unwrap()
    }

    fn scalar_hom(m: &MackeyFunctor, c: &[i64]) -> MackeyHom {
        let maps = c.iter().map(|&x| IntMatrix::from_i64(1, 1, &[x])).collect();
        MackeyHom::new(m.clone(), constant_z(m.shape), maps).unwrap()
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        let z = constant_z(sh(3, 2));
        assert!(kernel_m(&MackeyHom::identity(&z)).is_zero());
        assert!(cokernel_m(&MackeyHom::identity(&z)).is_zero());
    }

    #[test]
    fn kernel_onto_b1_is_zstar() {
        let s = sh(5, 1);
        let z = constant_z(s);
        let b = b_form(s, &[1]).unwrap();
        let q = MackeyHom::new(z.clone(), b, vec![IntMatrix::zeros(0, 1), IntMatrix::from_i64(1, 1, &[1])]).unwrap();
        let k = kernel_m(&q);
        assert_eq!(super::super::fingerprint(&k), super::super::fingerprint(&z_star(s)));
    }

    #[test]
    fn star_dual_of_forms() {
        let s = sh(3, 2);
        let f = form_z(s, &[1, 0]).unwrap();
        let d = dual_levelwise(&f, DualMode::Star);
        assert_eq!(d, form_z(s, &[0, 1]).unwrap());
        let z = constant_z(s);
        assert_eq!(dual_levelwise(&dual_levelwise(&z, DualMode::Star), DualMode::Star), z);
    }

    #[test]
    fn e_dual_flips_b10() {
        let b = b_form(sh(3, 2), &[1, 0]).unwrap();
        let e = dual_levelwise(&b, DualMode::E);
        assert!(e.validate().is_empty());
        assert!(e.res[1].is_zero());
        assert!(e.tr[1].is_iso());
        assert_eq!(super::super::fingerprint(&dual_levelwise(&e, DualMode::E)), super::super::fingerprint(&b));
    }

    #[test]
    fn pullback_of_b1() {
        let b1 = b_form(sh(3, 1), &[1]).unwrap();
        let pb = pullback_psi(&b1, 1).unwrap();
        assert_eq!(super::super::fingerprint(&pb), super::super::fingerprint(&b_form(sh(3, 2), &[0, 1]).unwrap()));
        assert_eq!(pullback_psi(&constant_z(sh(2, 1)), 2).unwrap(), constant_z(sh(2, 3)));
    }

    #[test]
    fn cokernel_gives_b() {
        let s = sh(2, 2);
        let f = scalar_hom(&form_z(s, &[1, 1]).unwrap(), &[1, 2, 4]);
        let c = cokernel_m(&f);
        assert_eq!(super::super::fingerprint(&c), super::super::fingerprint(&b_form(s, &[1, 1]).unwrap()));
        assert!(direct_sum_m(&c, &zero_functor(s)).validate().is_empty());
    }
}
