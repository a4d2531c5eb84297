use std::collections::BTreeMap;

use super::{fingerprint, subquotient_functor, zero_functor, Fingerprint, MackeyFunctor, Shape};
use crate::intlin::{homology_at, FgAbGroup, GroupHom, IntMatrix};

/// Mackey functors indexed by degree over a computed range `lo..=hi`; degrees
/// outside the stored map are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMackey {
    pub shape: Shape,
    pub lo: i64,
    pub hi: i64,
    values: BTreeMap<i64, MackeyFunctor>,
}

impl GradedMackey {
    pub fn new(shape: Shape, lo: i64, hi: i64) -> Self {
        GradedMackey { shape, lo, hi, values: BTreeMap::new() }
    }

    /// Stores `m` in degree `d`, dropping zero functors.
    pub fn insert(&mut self, d: i64, m: MackeyFunctor) {
        assert_eq!(m.shape, self.shape);
        self.lo = self.lo.min(d);
        self.hi = self.hi.max(d);
        if m.is_zero() {
            self.values.remove(&d);
        } else {
            self.values.insert(d, m);
        }
    }

    pub fn get(&self, d: i64) -> Option<&MackeyFunctor> {
        self.values.get(&d)
    }

    /// The value in degree `d`, zero if absent.
    pub fn degree(&self, d: i64) -> MackeyFunctor {
        self.values.get(&d).cloned().unwrap_or_else(|| zero_functor(self.shape))
    }

    /// Degrees with a nonzero value, ascending.
    pub fn support(&self) -> Vec<i64> {
        self.values.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &MackeyFunctor)> {
        self.values.iter().map(|(&d, m)| (d, m))
    }

    /// Applies `f` to every nonzero value.
    pub fn map<F: Fn(&MackeyFunctor) -> MackeyFunctor>(&self, shape: Shape, f: F) -> GradedMackey {
        let mut out = GradedMackey::new(shape, self.lo, self.hi);
        for (d, m) in self.iter() {
            out.insert(d, f(m));
        }
        out
    }

    /// Moves degree `d` to `a * d + b`.
    pub fn reindex(&self, a: i64, b: i64) -> GradedMackey {
        let (x, y) = (a * self.lo + b, a * self.hi + b);
        let mut out = GradedMackey::new(self.shape, x.min(y), x.max(y));
        for (d, m) in self.iter() {
            out.insert(a * d + b, m.clone());
        }
        out
    }

    pub fn fingerprints(&self) -> BTreeMap<i64, Fingerprint> {
        self.iter().map(|(d, m)| (d, fingerprint(m))).collect()
    }

    /// Degreewise fingerprint equality of the nonzero values.
    pub fn same_as(&self, other: &GradedMackey) -> bool {
        self.shape == other.shape && self.fingerprints() == other.fingerprints()
    }
}

/// A chain complex of Mackey functors: `diffs[i]` maps `terms[i + 1]` to
/// `terms[i]`, level by level, and `terms[i]` sits in degree `lo + i`.
#[derive(Clone, Debug)]
pub struct MackeyComplex {
    pub shape: Shape,
    pub lo: i64,
    pub terms: Vec<MackeyFunctor>,
    pub diffs: Vec<Vec<IntMatrix>>,
}

impl MackeyComplex {
    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    fn level_map(&self, i: usize, l: usize) -> GroupHom {
        GroupHom::new_unchecked(
            self.terms[i + 1].levels[l].clone(),
            self.terms[i].levels[l].clone(),
            self.diffs[i][l].clone(),
        )
    }

    /// Homology at position `i` with the induced Mackey structure.
    pub fn homology_at(&self, i: usize) -> MackeyFunctor {
        let mid = &self.terms[i];
        let subs = (0..=self.shape.n)
            .map(|l| {
                let g = &mid.levels[l];
                let incoming = if i + 1 < self.terms.len() {
                    self.level_map(i, l)
                } else {
                    GroupHom::zero(&FgAbGroup::zero(), g)
                };
                let outgoing = if i > 0 { self.level_map(i - 1, l) } else { GroupHom::zero(g, &FgAbGroup::zero()) };
                homology_at(&incoming, &outgoing)
            })
            .collect();
        subquotient_functor(mid, subs).expect("homology of a complex of natural maps").functor
    }

    pub fn homology(&self) -> GradedMackey {
        let mut out = GradedMackey::new(self.shape, self.lo, self.hi());
        for i in 0..self.terms.len() {
            out.insert(self.lo + i as i64, self.homology_at(i));
        }
        out
    }

    /// `d ∘ d = 0` at every level.
    pub fn is_complex(&self) -> bool {
        (1..self.diffs.len()).all(|i| {
            (0..=self.shape.n).all(|l| {
                let c = self.diffs[i - 1][l].mul(&self.diffs[i][l]);
                self.terms[i - 1].levels[l].reduce_matrix(&c).is_zero()
            })
        })
    }
}
