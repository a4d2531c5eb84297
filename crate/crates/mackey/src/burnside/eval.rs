use num_bigint::BigInt;
use num_traits::Zero;

use super::{EquivMatrix, GSet, SpanWord};
use crate::intlin::{FgAbGroup, GroupHom, IntMatrix};
use crate::mackey::{constant_z, MackeyError, MackeyFunctor, MackeyHom, Shape};

/// `M(X)`: the sum of the values of `M` on the orbits of `X`.
pub fn value_group(m: &MackeyFunctor, x: &GSet) -> FgAbGroup {
    FgAbGroup::direct_sum_all(x.orbits.iter().map(|&k| &m.levels[k]))
}

/// `tr(m -> a) ∘ P(weyl[m]) ∘ res(b -> m)` for `m = min(a, b)`, where
/// `P(w) = Σ_t c_t w^t`.
fn eval_poly(m: &MackeyFunctor, a: usize, b: usize, coeffs: &[BigInt]) -> IntMatrix {
    let low = a.min(b);
    let w = &m.weyl[low];
    let id = IntMatrix::identity(m.levels[low].num_generators());
    let mut poly = IntMatrix::zeros(id.rows(), id.cols());
    for c in coeffs.iter().rev() {
        poly = m.levels[low].reduce_matrix(&w.matrix.mul(&poly).add(&id.scale(c)));
    }
    m.tr_chain(low, a).matrix.mul(&poly).mul(&m.res_chain(b, low).matrix)
}

/// The homomorphism `M(G/C_{p^target}) -> M(G/C_{p^source})` induced by a word.
pub fn eval_word(m: &MackeyFunctor, w: SpanWord) -> Result<GroupHom, MackeyError> {
    m.require_cohomological()?;
    let mut c = vec![BigInt::zero(); m.shape.orbit_size(w.source.max(w.target)) as usize];
    c[w.t] = 1.into();
    let mat = eval_poly(m, w.source, w.target, &c);
    Ok(GroupHom::new_unchecked(m.levels[w.target].clone(), m.levels[w.source].clone(), mat))
}

/// The homomorphism `M(Y) -> M(X)` induced by an equivariant `f: Z[X] -> Z[Y]`.
pub fn eval_perm(m: &MackeyFunctor, f: &EquivMatrix) -> Result<GroupHom, MackeyError> {
    m.require_cohomological()?;
    Ok(eval_perm_unchecked(m, f))
}

pub(crate) fn eval_perm_unchecked(m: &MackeyFunctor, f: &EquivMatrix) -> GroupHom {
    let src = value_group(m, &f.target);
    let tgt = value_group(m, &f.source);
    let offsets = |x: &GSet| {
        let mut acc = 0;
        x.orbits
            .iter()
            .map(|&k| {
                let o = acc;
                acc += m.levels[k].num_generators();
                o
            })
            .collect::<Vec<_>>()
    };
    let (ro, co) = (offsets(&f.source), offsets(&f.target));
    let mut mat = IntMatrix::zeros(tgt.num_generators(), src.num_generators());
    for (&(j, i), c) in &f.blocks {
        let b = eval_poly(m, f.source.orbits[i], f.target.orbits[j], c);
        if b.rows() > 0 && b.cols() > 0 {
            let cur = mat.block(ro[i], co[j], b.rows(), b.cols());
            mat.set_block(ro[i], co[j], &cur.add(&b));
        }
    }
    GroupHom::new_unchecked(src, tgt, mat)
}

/// Structure maps of the lift `M_X` between levels, as equivariant maps of the
/// orbit factor tensored with the identity of `X`.
pub(crate) struct LiftMaps {
    pub sets: Vec<GSet>,
    pub proj: Vec<EquivMatrix>,
    pub rot: Vec<EquivMatrix>,
}

pub(crate) fn lift_maps(x: &GSet) -> LiftMaps {
    let shape = x.shape;
    let id = EquivMatrix::identity(x);
    let orbit = |k| GSet::orbit(shape, k);
    let sets = (0..=shape.n).map(|l| orbit(l).product(x).set).collect();
    let proj = (0..shape.n)
        .map(|l| EquivMatrix::word(shape, SpanWord { source: l, target: l + 1, t: 0 }).tensor(&id))
        .collect();
    let rot = (0..=shape.n)
        .map(|l| {
            let t = 1 % shape.orbit_size(l) as usize;
            EquivMatrix::word(shape, SpanWord { source: l, target: l, t }).tensor(&id)
        })
        .collect();
    LiftMaps { sets, proj, rot }
}

/// `M_X`, whose value on `G/C_{p^l}` is `M(G/C_{p^l} × X)`.
pub fn lift(m: &MackeyFunctor, x: &GSet) -> Result<MackeyFunctor, MackeyError> {
    m.require_cohomological()?;
    assert_eq!(m.shape, x.shape, "lift along a set for a different group");
    let lm = lift_maps(x);
    let levels = lm.sets.iter().map(|s| value_group(m, s)).collect();
    let res = lm.proj.iter().map(|f| eval_perm_unchecked(m, f).matrix).collect();
    let tr = lm.proj.iter().map(|f| eval_perm_unchecked(m, &f.transpose()).matrix).collect();
    let weyl = lm.rot.iter().map(|f| eval_perm_unchecked(m, f).matrix).collect();
    let out = MackeyFunctor::from_matrices(m.shape, levels, res, tr, weyl)?;
    debug_assert!(out.validate().is_empty());
    Ok(out)
}

/// `M_X -> M_Y` induced covariantly by `f: Z[X] -> Z[Y]`.
pub fn lift_covariant(m: &MackeyFunctor, f: &EquivMatrix) -> Result<MackeyHom, MackeyError> {
    MackeyHom::new_unchecked(lift(m, &f.source)?, lift(m, &f.target)?, covariant_maps(m, f))
}

/// `M_Y -> M_X` induced contravariantly by `f: Z[X] -> Z[Y]`.
pub fn lift_contravariant(m: &MackeyFunctor, f: &EquivMatrix) -> Result<MackeyHom, MackeyError> {
    MackeyHom::new_unchecked(lift(m, &f.target)?, lift(m, &f.source)?, contravariant_maps(m, f))
}

/// Level matrices of [`lift_covariant`] without building the functors.
pub(crate) fn covariant_maps(m: &MackeyFunctor, f: &EquivMatrix) -> Vec<IntMatrix> {
    (0..=m.n()).map(|l| eval_perm_unchecked(m, &orbit_factor(l, f).transpose()).matrix).collect()
}

pub(crate) fn contravariant_maps(m: &MackeyFunctor, f: &EquivMatrix) -> Vec<IntMatrix> {
    (0..=m.n()).map(|l| eval_perm_unchecked(m, &orbit_factor(l, f)).matrix).collect()
}

fn orbit_factor(l: usize, f: &EquivMatrix) -> EquivMatrix {
    EquivMatrix::identity(&GSet::orbit(f.shape(), l)).tensor(f)
}

/// The equivariant map `Z[G/C_{p^k}] -> Z[X]` classifying an element of
/// `Z_X(G/C_{p^k}) = Z(G/C_{p^k} × X)`, given in the coordinates of [`lift`].
pub fn classifying_map(k: usize, x: &GSet, y: &[BigInt]) -> EquivMatrix {
    let shape = x.shape;
    let orbit = GSet::orbit(shape, k);
    let prod = orbit.product(x);
    assert_eq!(y.len(), prod.set.num_orbits(), "element has the wrong length");
    let mut d = EquivMatrix::zero(&orbit, x);
    for i in 0..x.num_orbits() {
        let first = prod.first(0, i);
        for c in 0..prod.piece(0, i).count {
            if !y[first + c].is_zero() {
                d.add_word(i, 0, c, &y[first + c]);
            }
        }
    }
    d
}

/// The fixed-point functor of the permutation module `Z[X]`.
pub fn fixed_point_functor(x: &GSet) -> MackeyFunctor {
    lift(&constant_z(x.shape), x).expect("constant functor is cohomological")
}

/// Shorthand for the fixed-point functor of `Z[G/C_{p^k_1} ⊔ ...]`.
pub fn perm_functor(shape: Shape, orbits: &[usize]) -> MackeyFunctor {
    fixed_point_functor(&GSet::new(shape, orbits.to_vec()))
}
