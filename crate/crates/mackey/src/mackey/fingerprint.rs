use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{hom_group, MackeyFunctor, MackeyHom, Shape};
use crate::intlin::{cokernel, image, kernel, Canonical, GroupHom};

/// Kernel, image and cokernel of one homomorphism, up to isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MapInvariant {
    pub kernel: Canonical,
    pub image: Canonical,
    pub cokernel: Canonical,
}

impl MapInvariant {
    pub fn of(f: &GroupHom) -> Self {
        MapInvariant {
            kernel: kernel(f).group.canonical(),
            image: image(f).group.canonical(),
            cokernel: cokernel(f).group.canonical(),
        }
    }
}

/// Isomorphism invariants of a Mackey functor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    pub shape: Shape,
    pub levels: Vec<Canonical>,
    pub res: Vec<MapInvariant>,
    pub tr: Vec<MapInvariant>,
    /// `tr[k]∘res[k]` on level `k + 1`.
    pub tr_res: Vec<MapInvariant>,
    /// `res[k]∘tr[k]` on level `k`.
    pub res_tr: Vec<MapInvariant>,
    /// `1 - weyl[k]` on level `k`.
    pub weyl: Vec<MapInvariant>,
    /// Restriction and transfer between each pair of non-adjacent levels.
    pub long_res: Vec<MapInvariant>,
    pub long_tr: Vec<MapInvariant>,
}

pub fn fingerprint(m: &MackeyFunctor) -> Fingerprint {
    let n = m.n();
    let mut long_res = vec![];
    let mut long_tr = vec![];
    for hi in 2..=n {
        for lo in 0..hi - 1 {
            long_res.push(MapInvariant::of(&m.res_chain(hi, lo)));
            long_tr.push(MapInvariant::of(&m.tr_chain(lo, hi)));
        }
    }
    Fingerprint {
        shape: m.shape,
        levels: m.levels.iter().map(|g| g.canonical()).collect(),
        res: m.res.iter().map(MapInvariant::of).collect(),
        tr: m.tr.iter().map(MapInvariant::of).collect(),
        tr_res: (0..n).map(|k| MapInvariant::of(&m.tr[k].compose(&m.res[k]))).collect(),
        res_tr: (0..n).map(|k| MapInvariant::of(&m.res[k].compose(&m.tr[k]))).collect(),
        weyl: (0..=n).map(|k| MapInvariant::of(&GroupHom::identity(&m.levels[k]).sub(&m.weyl[k]))).collect(),
        long_res,
        long_tr,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IsoError {
    #[error("isomorphism search exceeded {0} candidates without a decision")]
    ResourceLimit(u64),
    #[error("functors live over different groups")]
    ShapeMismatch,
}

/// Decides isomorphism: fingerprints first, then a search through combinations
/// of natural maps `M -> N`. Free coefficients are tried in `[-2, 2]`; if the
/// search space exceeds `budget` or a free coefficient range had to be
/// truncated without success, a resource-limit error is returned.
pub fn is_isomorphic(m: &MackeyFunctor, n: &MackeyFunctor, budget: u64) -> Result<bool, IsoError> {
    if m.shape != n.shape {
        return Err(IsoError::ShapeMismatch);
    }
    if fingerprint(m) != fingerprint(n) {
        return Ok(false);
    }
    if m.is_zero() {
        return Ok(true);
    }
    let (g, reps) = hom_group(m, n);
    let free_bound = 2i64;
    let ranges: Vec<Vec<BigInt>> = g
        .orders()
        .iter()
        .map(|o| {
            if o.is_zero() {
                (-free_bound..=free_bound).map(BigInt::from).collect()
            } else {
                num_iter(o)
            }
        })
        .collect();
    let total = ranges.iter().try_fold(1u64, |acc, r| acc.checked_mul(r.len() as u64));
    let exhaustive = g.is_torsion();
    match total {
        Some(t) if t <= budget => {}
        _ => return Err(IsoError::ResourceLimit(budget)),
    }
    let mut idx = vec![0usize; ranges.len()];
    loop {
        let f = combine(m, n, &reps, &ranges, &idx);
        if f.is_iso() {
            return Ok(true);
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return if exhaustive { Ok(false) } else { Err(IsoError::ResourceLimit(budget)) };
            }
            idx[pos] += 1;
            if idx[pos] < ranges[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn num_iter(o: &BigInt) -> Vec<BigInt> {
    let mut out = vec![];
    let mut x = BigInt::zero();
    while &x < o {
        out.push(x.clone());
        x += BigInt::one();
    }
    out
}

fn combine(m: &MackeyFunctor, n: &MackeyFunctor, reps: &[MackeyHom], ranges: &[Vec<BigInt>], idx: &[usize]) -> MackeyHom {
    let maps = (0..=m.n())
        .map(|k| {
            let mut acc = GroupHom::zero(&m.levels[k], &n.levels[k]);
            for (r, (range, &i)) in reps.iter().zip(ranges.iter().zip(idx)) {
                if !range[i].is_zero() {
                    acc = acc.add(&r.maps[k].scale(&range[i]));
                }
            }
            acc
        })
        .collect();
    MackeyHom { source: m.clone(), target: n.clone(), maps }
}

#[cfg(test)]
mod tests {
    use super::super::{b_form, dual_levelwise, form_z, DualMode};
    use super::*;

    fn sh(p: u64, n: usize) -> Shape {
        Shape::new(p, n).unwrap()
    }

    #[test]
    fn forms_are_distinguished() {
        let s = sh(3, 2);
        assert_ne!(fingerprint(&form_z(s, &[1, 0]).unwrap()), fingerprint(&form_z(s, &[0, 1]).unwrap()));
    }

    #[test]
    fn self_isomorphic() {
        let b = b_form(sh(2, 2), &[1, 1]).unwrap();
        assert_eq!(is_isomorphic(&b, &b, 10_000), Ok(true));
        let f = form_z(sh(3, 2), &[0, 1]).unwrap();
        assert_eq!(is_isomorphic(&f, &f, 10_000), Ok(true));
    }

    #[test]
    fn b10_differs_from_its_dual() {
        let b = b_form(sh(3, 2), &[1, 0]).unwrap();
        let e = dual_levelwise(&b, DualMode::E);
        assert_eq!(is_isomorphic(&b, &e, 10_000), Ok(false));
    }
}
