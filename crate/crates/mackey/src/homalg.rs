//! Projective resolutions by fixed-point functors of permutation modules, and
//! the derived functors `Ext` and `Tor` over the constant Green functor `Z`.
//!
//! Resolutions are kept as complexes of equivariant maps `Z[X_i] -> Z[X_{i-1}]`,
//! so the same complex can be lifted against any coefficient functor.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::burnside::{
    classifying_map, contravariant_maps, covariant_maps, eval_word, lift, span_basis, EquivMatrix, GSet,
    OrbitProduct, SpanWord,
};
use crate::intlin::{cokernel, homology_at, kernel, quotient, GroupHom, IntMatrix, Lattice};
use crate::mackey::{
    constant_z, pullback_psi, render_lewis, subquotient_functor, GradedMackey, MackeyComplex, MackeyError, MackeyFunctor, MackeyHom,
    Shape, SubFunctor,
};

/// Number of differentials computed by [`ext_z`] and [`tor_z`]. Degrees 4 and 5
/// are computed honestly and must vanish.
pub const RESOLUTION_LENGTH: usize = 6;

/// Highest degree in which `Ext` or `Tor` can be nonzero.
pub const TOP_DEGREE: i64 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomalgError {
    #[error(transparent)]
    Mackey(#[from] MackeyError),
    #[error("resolution length {0} is too short (need at least 4)")]
    TooShort(usize),
    #[error("nonzero value in degree {degree}: {value}")]
    AboveTopDegree { degree: i64, value: String },
}

/// An element of `M(G/C_{p^level})` chosen as a cover generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub level: usize,
    pub element: Vec<BigInt>,
}

/// Generators of `M` as a Mackey functor, chosen from the top level down. At
/// each level only classes not already reached from higher generators (or the
/// Weyl orbits of generators at the same level) are added; redundant ones are
/// then dropped.
pub fn cover_generators(m: &MackeyFunctor) -> Result<Vec<Generator>, MackeyError> {
    m.require_cohomological()?;
    let shape = m.shape;
    let mut gens: Vec<Generator> = vec![];
    for k in (0..=shape.n).rev() {
        let g = &m.levels[k];
        let rows = g.num_generators();
        let mut reached: Vec<Vec<BigInt>> = vec![];
        for x in &gens {
            for w in span_basis(shape, k, x.level) {
                reached.push(eval_word(m, w)?.apply(&x.element));
            }
        }
        let rel = g.relations();
        let spans = |v: &[Vec<BigInt>], x: &[BigInt]| {
            Lattice::span(&IntMatrix::from_cols(rows, v).hstack(&rel)).contains(x)
        };
        let q = quotient(g, &IntMatrix::from_cols(rows, &reached));
        for c in 0..q.group.num_generators() {
            let v = q.lift.col(c);
            if spans(&reached, &v) {
                continue;
            }
            let mut w = v.clone();
            for _ in 0..shape.orbit_size(k) {
                reached.push(w.clone());
                w = m.weyl[k].apply(&w);
            }
            gens.push(Generator { level: k, element: v });
        }
    }
    // A generator chosen high up may be reached from lower ones afterwards.
    let mut i = 0;
    while i < gens.len() {
        let mut rest = gens.clone();
        rest.remove(i);
        if generates(m, &rest)? {
            gens = rest;
        } else {
            i += 1;
        }
    }
    Ok(gens)
}

fn generates(m: &MackeyFunctor, gens: &[Generator]) -> Result<bool, MackeyError> {
    let maps = classifying_maps(m, gens)?;
    Ok(maps.iter().enumerate().all(|(l, f)| quotient(&m.levels[l], f).group.is_zero()))
}

/// Level matrices of the map `Z_X -> M` classifying the given generators,
/// where `X` has one orbit per generator.
fn classifying_maps(m: &MackeyFunctor, gens: &[Generator]) -> Result<Vec<IntMatrix>, MackeyError> {
    let shape = m.shape;
    (0..=shape.n)
        .map(|l| {
            let mut cols = vec![];
            for g in gens {
                for t in 0..OrbitProduct::new(shape, l, g.level).count {
                    let w = SpanWord { source: l, target: g.level, t };
                    cols.push(eval_word(m, w)?.apply(&g.element));
                }
            }
            Ok(IntMatrix::from_cols(m.levels[l].num_generators(), &cols))
        })
        .collect()
}

/// A surjection from the fixed-point functor of a permutation module onto `M`.
pub fn cover(m: &MackeyFunctor) -> Result<(GSet, MackeyHom), MackeyError> {
    let gens = cover_generators(m)?;
    let x = GSet::new(m.shape, gens.iter().map(|g| g.level).collect());
    let maps = classifying_maps(m, &gens)?;
    let p = lift(&constant_z(m.shape), &x)?;
    Ok((x, MackeyHom::new(p, m.clone(), maps)?))
}

/// A complex of permutation modules `Z[X_0] <- Z[X_1] <- ...`, with
/// `diffs[i]: Z[X_{i+1}] -> Z[X_i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjComplex {
    pub shape: Shape,
    pub sets: Vec<GSet>,
    pub diffs: Vec<EquivMatrix>,
}

impl ProjComplex {
    pub fn len(&self) -> usize {
        self.diffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// `d ∘ d = 0` as equivariant maps.
    pub fn is_complex(&self) -> bool {
        self.diffs.windows(2).all(|w| w[0].compose(&w[1]).is_zero())
    }

    /// `M □ Z[X_•] = M_{X_•}` as a chain complex of Mackey functors.
    pub fn lifted(&self, m: &MackeyFunctor) -> Result<MackeyComplex, MackeyError> {
        let terms = self.sets.iter().map(|x| lift(m, x)).collect::<Result<Vec<_>, _>>()?;
        let diffs = self.diffs.iter().map(|d| covariant_maps(m, d)).collect();
        Ok(MackeyComplex { shape: self.shape, lo: 0, terms, diffs })
    }

    /// `Hom(Z[X_•], N) = N_{X_•}` as a cochain complex, stored as a chain
    /// complex in degrees `-len..=0`.
    pub fn dual(&self, n: &MackeyFunctor) -> Result<MackeyComplex, MackeyError> {
        let terms = self.sets.iter().rev().map(|x| lift(n, x)).collect::<Result<Vec<_>, _>>()?;
        let diffs = self.diffs.iter().rev().map(|d| contravariant_maps(n, d)).collect();
        Ok(MackeyComplex { shape: self.shape, lo: -(self.len() as i64), terms, diffs })
    }
}

/// A resolution `Z_{X_•} -> M`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub target: MackeyFunctor,
    pub complex: ProjComplex,
    pub augmentation: MackeyHom,
}

/// Exactness of a resolution in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub degree: usize,
    pub exact: bool,
}

impl Resolution {
    /// Checks, level by level, that the augmented complex is exact in degrees
    /// `0..len`: the augmentation is onto, its kernel is the image of `d_1`,
    /// and the homology vanishes above.
    pub fn certificates(&self) -> Result<Vec<Certificate>, MackeyError> {
        let z = constant_z(self.complex.shape);
        let c = self.complex.lifted(&z)?;
        let n = self.complex.shape.n;
        let level_map = |i: usize, l: usize| {
            GroupHom::new_unchecked(c.terms[i + 1].levels[l].clone(), c.terms[i].levels[l].clone(), c.diffs[i][l].clone())
        };
        let mut out = vec![];
        let exact0 = (0..=n).all(|l| {
            let aug = &self.augmentation.maps[l];
            let onto = cokernel(aug).group.is_zero();
            onto && (self.complex.len() == 0 || homology_at(&level_map(0, l), aug).group.is_zero())
        });
        out.push(Certificate { degree: 0, exact: exact0 });
        for i in 1..self.complex.len() {
            let exact = (0..=n).all(|l| homology_at(&level_map(i, l), &level_map(i - 1, l)).group.is_zero());
            out.push(Certificate { degree: i, exact });
        }
        Ok(out)
    }

    pub fn is_exact(&self) -> Result<bool, MackeyError> {
        Ok(self.certificates()?.iter().all(|c| c.exact))
    }
}

fn kernel_functor(source: &MackeyFunctor, target: &MackeyFunctor, maps: &[IntMatrix]) -> SubFunctor {
    let subs = maps
        .iter()
        .enumerate()
        .map(|(l, f)| kernel(&GroupHom::new_unchecked(source.levels[l].clone(), target.levels[l].clone(), f.clone())))
        .collect();
    subquotient_functor(source, subs).expect("kernel of a natural map")
}

/// Resolves `M` by iterated covers of kernels, computing `length` differentials.
pub fn resolve(m: &MackeyFunctor, length: usize) -> Result<Resolution, HomalgError> {
    if length < 4 {
        return Err(HomalgError::TooShort(length));
    }
    let shape = m.shape;
    let z = constant_z(shape);
    let (x0, augmentation) = cover(m)?;
    let aug_maps: Vec<IntMatrix> = augmentation.maps.iter().map(|f| f.matrix.clone()).collect();
    let mut syz = kernel_functor(&augmentation.source, m, &aug_maps);
    let mut prev_term = augmentation.source.clone();
    let mut sets = vec![x0];
    let mut diffs = vec![];
    for _ in 0..length {
        let prev = sets.last().expect("nonempty");
        let gens = cover_generators(&syz.functor)?;
        let x = GSet::new(shape, gens.iter().map(|g| g.level).collect());
        let mut d = EquivMatrix::zero(&x, prev);
        for (gi, g) in gens.iter().enumerate() {
            let y = syz.lift(g.level).mul_vec(&g.element);
            for (&(j, _), coeffs) in &classifying_map(g.level, prev, &y).blocks {
                for (t, a) in coeffs.iter().enumerate() {
                    if !a.is_zero() {
                        d.add_word(j, gi, t, a);
                    }
                }
            }
        }
        let term = lift(&z, &x)?;
        syz = kernel_functor(&term, &prev_term, &covariant_maps(&z, &d));
        prev_term = term;
        sets.push(x);
        diffs.push(d);
    }
    let complex = ProjComplex { shape, sets, diffs };
    Ok(Resolution { target: m.clone(), complex, augmentation })
}

/// Degrees `0..len` of the homology of `c`, negated if `cochain`.
fn derived(c: &MackeyComplex, len: usize, cochain: bool) -> GradedMackey {
    let mut out = GradedMackey::new(c.shape, 0, len as i64 - 1);
    for d in 0..len {
        let pos = if cochain { c.terms.len() - 1 - d } else { d };
        out.insert(d as i64, c.homology_at(pos));
    }
    out
}

fn check_top_degree(g: GradedMackey) -> Result<GradedMackey, HomalgError> {
    if let Some((degree, m)) = g.iter().find(|&(d, _)| d > TOP_DEGREE) {
        return Err(HomalgError::AboveTopDegree { degree, value: render_lewis(m) });
    }
    Ok(g)
}

/// `Ext^i(M, N)` for `i` in `0..length`, without checking the vanishing above degree 3.
pub fn ext_unchecked(m: &MackeyFunctor, n: &MackeyFunctor, length: usize) -> Result<GradedMackey, HomalgError> {
    n.require_cohomological()?;
    let r = resolve(m, length)?;
    Ok(derived(&r.complex.dual(n)?, length, true))
}

/// `Tor_i(M, N)` for `i` in `0..length`, without checking the vanishing above degree 3.
pub fn tor_unchecked(m: &MackeyFunctor, n: &MackeyFunctor, length: usize) -> Result<GradedMackey, HomalgError> {
    m.require_cohomological()?;
    let r = resolve(n, length)?;
    Ok(derived(&r.complex.lifted(m)?, length, false))
}

/// `Ext^*(M, N)`. Degrees 4 and 5 are computed too; a nonzero value there is
/// reported as an error.
pub fn ext_z(m: &MackeyFunctor, n: &MackeyFunctor) -> Result<GradedMackey, HomalgError> {
    check_top_degree(ext_unchecked(m, n, RESOLUTION_LENGTH)?)
}

/// `Tor_*(M, N)`, with the same check as [`ext_z`].
pub fn tor_z(m: &MackeyFunctor, n: &MackeyFunctor) -> Result<GradedMackey, HomalgError> {
    check_top_degree(tor_unchecked(m, n, RESOLUTION_LENGTH)?)
}

/// Outcome of comparing derived functors before and after pulling back.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PullbackReport {
    /// Degrees and functor (`"ext"` or `"tor"`) where the two sides differ.
    pub mismatches: Vec<(String, i64)>,
}

impl PullbackReport {
    pub fn is_ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares `Ψ*_k Ext(M, N)` with `Ext(Ψ*_k M, Ψ*_k N)`, and likewise for `Tor`.
pub fn pullback_compat_check(m: &MackeyFunctor, n: &MackeyFunctor, k: usize) -> Result<PullbackReport, HomalgError> {
    let (pm, pn) = (pullback_psi(m, k)?, pullback_psi(n, k)?);
    let shape = pm.shape;
    let mut report = PullbackReport::default();
    let pairs = [("ext", ext_z(m, n)?, ext_z(&pm, &pn)?), ("tor", tor_z(m, n)?, tor_z(&pm, &pn)?)];
    for (name, below, above) in pairs {
        let pulled = below.map(shape, |x| pullback_psi(x, k).expect("derived functors are cohomological"));
        let (a, b) = (pulled.fingerprints(), above.fingerprints());
        for d in a.keys().chain(b.keys()) {
            if a.get(d) != b.get(d) && !report.mismatches.contains(&(name.to_string(), *d)) {
                report.mismatches.push((name.to_string(), *d));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxhom::box_product;
    use crate::burnside::perm_functor;
    use crate::mackey::{b_form, dual_levelwise, fingerprint, form_z, z_star, DualMode};

    fn sh(p: u64, n: usize) -> Shape {
        Shape::new(p, n).unwrap()
    }

    fn only(g: &GradedMackey, expect: &[(i64, &MackeyFunctor)]) {
        let want: Vec<i64> = expect.iter().map(|e| e.0).collect();
        assert_eq!(g.support(), want);
        for (d, m) in expect {
            assert_eq!(fingerprint(&g.degree(*d)), fingerprint(m), "degree {d}");
        }
    }

    #[test]
    fn cover_of_projectives() {
        let s = sh(3, 2);
        let (x, f) = cover(&constant_z(s)).unwrap();
        assert_eq!(x.orbits, vec![2]);
        assert!(f.is_iso());
        let free = perm_functor(s, &[0]);
        let (x, f) = cover(&free).unwrap();
        assert_eq!(x.orbits, vec![0]);
        assert!(f.is_iso());
    }

    #[test]
    fn cover_of_b1_is_z() {
        let s = sh(5, 1);
        let (x, f) = cover(&b_form(s, &[1]).unwrap()).unwrap();
        assert_eq!(x.orbits, vec![1]);
        assert!(f.maps.iter().all(|m| cokernel(&m).group.is_zero()));
    }

    #[test]
    fn classifying_map_matches_yoneda() {
        // The equivariant map classifying y agrees with the Yoneda map built
        // from span words on Z_X.
        let s = sh(2, 2);
        let x = GSet::new(s, vec![1, 0, 2]);
        let z = constant_z(s);
        let zx = lift(&z, &x).unwrap();
        for k in 0..=2 {
            let rank = zx.levels[k].num_generators();
            for i in 0..rank {
                let mut y = vec![BigInt::zero(); rank];
                y[i] = BigInt::from(1);
                y[(i + 1) % rank] += BigInt::from(3);
                let d = classifying_map(k, &x, &y);
                let via_words = classifying_maps(&zx, &[Generator { level: k, element: y.clone() }]).unwrap();
                assert_eq!(covariant_maps(&z, &d), via_words);
            }
        }
    }

    #[test]
    fn resolution_of_b1() {
        for p in [2, 3, 5] {
            let s = sh(p, 1);
            let r = resolve(&b_form(s, &[1]).unwrap(), 5).unwrap();
            assert!(r.complex.is_complex());
            assert!(r.is_exact().unwrap());
            let orbits: Vec<Vec<usize>> = r.complex.sets.iter().map(|x| x.orbits.clone()).collect();
            assert_eq!(&orbits[..4], &[vec![1], vec![0], vec![0], vec![1]]);
            assert!(orbits[4].is_empty());
        }
    }

    #[test]
    fn resolution_of_projective_stops() {
        let s = sh(3, 2);
        let r = resolve(&constant_z(s), 4).unwrap();
        assert!(r.complex.sets[1..].iter().all(|x| x.orbits.is_empty()));
    }

    #[test]
    fn resolutions_are_exact() {
        let s = sh(2, 2);
        for m in [b_form(s, &[1, 1]).unwrap(), form_z(s, &[1, 0]).unwrap(), z_star(s)] {
            let r = resolve(&m, 5).unwrap();
            assert!(r.complex.is_complex());
            assert!(r.is_exact().unwrap());
        }
    }

    #[test]
    fn ext_table_over_cp() {
        for p in [2, 3] {
            let s = sh(p, 1);
            let b = b_form(s, &[1]).unwrap();
            let z = constant_z(s);
            only(&ext_z(&b, &z).unwrap(), &[(3, &b)]);
            only(&ext_z(&b, &b).unwrap(), &[(0, &b), (3, &b)]);
            only(&ext_z(&b, &form_z(s, &[1]).unwrap()).unwrap(), &[(1, &b)]);
        }
    }

    #[test]
    fn tor_examples() {
        let s = sh(3, 1);
        let b = b_form(s, &[1]).unwrap();
        only(&tor_z(&b, &b).unwrap(), &[(0, &b), (3, &b)]);
        let s = sh(2, 2);
        let z10 = form_z(s, &[1, 0]).unwrap();
        let t = tor_z(&z10, &z10).unwrap();
        let sum = crate::mackey::direct_sum_m(&form_z(s, &[1, 1]).unwrap(), &b_form(s, &[0, 1]).unwrap());
        only(&t, &[(0, &sum), (1, &b_form(s, &[1, 0]).unwrap())]);
        assert_eq!(fingerprint(&t.degree(0)), fingerprint(&box_product(&z10, &z10).unwrap()));
    }

    #[test]
    fn ext_of_form_into_z() {
        let s = sh(3, 2);
        let m = form_z(s, &[0, 1]).unwrap();
        let dual = dual_levelwise(&b_form(s, &[0, 1]).unwrap(), DualMode::E);
        only(&ext_z(&m, &constant_z(s)).unwrap(), &[(0, &constant_z(s)), (2, &dual)]);
    }

    #[test]
    fn pullback_of_cp_table() {
        let s = sh(2, 1);
        let r = pullback_compat_check(&b_form(s, &[1]).unwrap(), &constant_z(s), 1).unwrap();
        assert!(r.is_ok(), "{r:?}");
    }

    #[test]
    fn short_resolution_rejected() {
        assert!(matches!(resolve(&constant_z(sh(2, 1)), 3), Err(HomalgError::TooShort(3))));
    }
}
