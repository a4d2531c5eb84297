//! Mackey functors for `G = C_{p^n}` stored as Lewis-diagram towers.
//!
//! Level `k` is the orbit `G/C_{p^k}`: level `n` is `G/G`, level 0 is `G/e`.
//! `weyl[k]` is the action of one fixed generator `γ` of `G` on level `k`.

mod catalog;
mod fingerprint;
mod graded;
mod hom;
mod names;
mod ops;
mod render;

use std::fmt;

use num_bigint::BigInt;

use crate::intlin::{FgAbGroup, GroupHom, IntMatrix};

pub use catalog::{
    b_form, constant_z, fixed_point_module, form_z, orbit_module, z_minus, z_minus_dotted, z_star, zero_functor,
    CatalogError,
};
pub use fingerprint::{fingerprint, is_isomorphic, Fingerprint, IsoError, MapInvariant};
pub use graded::{GradedMackey, MackeyComplex};
pub use hom::{hom_group, hom_space, HomSpace};
pub use names::{forms, full_catalog, parse_catalog, torsion_catalog, Namer};
pub use ops::{
    cokernel_m, direct_sum_all, direct_sum_m, dual_levelwise, free_quotient, image_m, kernel_m, pullback_psi,
    subquotient_functor, torsion_part, DualMode, SubFunctor,
};
pub use render::{from_json, render_lewis, render_lewis_block, to_json, JsonError, SCHEMA};

/// The group `C_{p^n}` as far as the tower is concerned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    pub p: u64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MackeyError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponent must be at least 1")]
    ZeroExponent,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("Mackey axioms fail: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("functor is not cohomological")]
    NotCohomological,
}

impl Shape {
    pub fn new(p: u64, n: usize) -> Result<Self, MackeyError> {
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(MackeyError::NotPrime(p));
        }
        if n == 0 {
            return Err(MackeyError::ZeroExponent);
        }
        Ok(Shape { p, n })
    }

    /// `p^e`.
    pub fn pow(&self, e: usize) -> u64 {
        self.p.pow(e as u32)
    }

    /// Number of points of `G/C_{p^k}`.
    pub fn orbit_size(&self, k: usize) -> u64 {
        self.pow(self.n - k)
    }

    pub fn order(&self) -> u64 {
        self.pow(self.n)
    }

    /// Shape of the quotient `G/C_{p^k}`.
    pub fn quotient(&self, k: usize) -> Shape {
        Shape { p: self.p, n: self.n - k }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C_{}^{}", self.p, self.n)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct MackeyFunctor {
    pub shape: Shape,
    pub levels: Vec<FgAbGroup>,
    /// `res[k]: levels[k + 1] -> levels[k]`.
    pub res: Vec<GroupHom>,
    /// `tr[k]: levels[k] -> levels[k + 1]`.
    pub tr: Vec<GroupHom>,
    pub weyl: Vec<GroupHom>,
}

/// A failed axiom, with the level where it fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Shape(String),
    NotWellDefined { map: &'static str, level: usize },
    TopWeylNontrivial,
    WeylOrder { level: usize },
    ResEquivariance { level: usize },
    TrEquivariance { level: usize },
    DoubleCoset { level: usize },
    TrTwist { level: usize },
    ResTwist { level: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(s) => write!(f, "shape: {s}"),
            Violation::NotWellDefined { map, level } => write!(f, "{map}[{level}] is not well defined"),
            Violation::TopWeylNontrivial => write!(f, "weyl at the top level is not the identity"),
            Violation::WeylOrder { level } => write!(f, "weyl[{level}] has the wrong order"),
            Violation::ResEquivariance { level } => write!(f, "res[{level}] does not commute with weyl"),
            Violation::TrEquivariance { level } => write!(f, "tr[{level}] does not commute with weyl"),
            Violation::DoubleCoset { level } => write!(f, "res∘tr at level {level} is not the orbit sum"),
            Violation::TrTwist { level } => write!(f, "tr[{level}] is not invariant under its Weyl group"),
            Violation::ResTwist { level } => write!(f, "image of res[{level}] is not Weyl invariant"),
        }
    }
}

impl MackeyFunctor {
    /// Builds and validates.
    pub fn new(
        shape: Shape,
        levels: Vec<FgAbGroup>,
        res: Vec<IntMatrix>,
        tr: Vec<IntMatrix>,
        weyl: Vec<IntMatrix>,
    ) -> Result<Self, MackeyError> {
        let m = Self::from_matrices(shape, levels, res, tr, weyl)?;
        let v = m.validate();
        if v.is_empty() {
            Ok(m)
        } else {
            Err(MackeyError::Invalid(v))
        }
    }

    /// Builds without checking the Mackey axioms (shapes are still checked).
    pub fn from_matrices(
        shape: Shape,
        levels: Vec<FgAbGroup>,
        res: Vec<IntMatrix>,
        tr: Vec<IntMatrix>,
        weyl: Vec<IntMatrix>,
    ) -> Result<Self, MackeyError> {
        let n = shape.n;
        if levels.len() != n + 1 || res.len() != n || tr.len() != n || weyl.len() != n + 1 {
            return Err(MackeyError::Shape(format!("expected {} levels", n + 1)));
        }
        let dims = |m: &IntMatrix, r: &FgAbGroup, c: &FgAbGroup| {
            m.rows() == r.num_generators() && m.cols() == c.num_generators()
        };
        for k in 0..n {
            if !dims(&res[k], &levels[k], &levels[k + 1]) || !dims(&tr[k], &levels[k + 1], &levels[k]) {
                return Err(MackeyError::Shape(format!("structure map at level {k} has the wrong size")));
            }
        }
        for k in 0..=n {
            if !dims(&weyl[k], &levels[k], &levels[k]) {
                return Err(MackeyError::Shape(format!("weyl[{k}] has the wrong size")));
            }
        }
        let hom = |s: &FgAbGroup, t: &FgAbGroup, m: IntMatrix| GroupHom::new_unchecked(s.clone(), t.clone(), m);
        Ok(MackeyFunctor {
            shape,
            res: res.into_iter().enumerate().map(|(k, m)| hom(&levels[k + 1], &levels[k], m)).collect(),
            tr: tr.into_iter().enumerate().map(|(k, m)| hom(&levels[k], &levels[k + 1], m)).collect(),
            weyl: weyl.into_iter().enumerate().map(|(k, m)| hom(&levels[k], &levels[k], m)).collect(),
            levels,
        })
    }

    pub fn n(&self) -> usize {
        self.shape.n
    }

    pub fn p(&self) -> u64 {
        self.shape.p
    }

    pub fn is_zero(&self) -> bool {
        self.levels.iter().all(FgAbGroup::is_zero)
    }

    /// All violated axioms; empty iff `self` is a Mackey functor.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = vec![];
        let n = self.n();
        for k in 0..n {
            if !self.res[k].is_well_defined() {
                out.push(Violation::NotWellDefined { map: "res", level: k });
            }
            if !self.tr[k].is_well_defined() {
                out.push(Violation::NotWellDefined { map: "tr", level: k });
            }
        }
        for k in 0..=n {
            if !self.weyl[k].is_well_defined() {
                out.push(Violation::NotWellDefined { map: "weyl", level: k });
            }
        }
        if !out.is_empty() {
            return out;
        }
        if !self.weyl[n].equals(&GroupHom::identity(&self.levels[n])) {
            out.push(Violation::TopWeylNontrivial);
        }
        for k in 0..=n {
            let id = GroupHom::identity(&self.levels[k]);
            if !self.weyl[k].pow(self.shape.orbit_size(k)).equals(&id) {
                out.push(Violation::WeylOrder { level: k });
            }
        }
        for k in 0..n {
            let (res, tr) = (&self.res[k], &self.tr[k]);
            if !res.compose(&self.weyl[k + 1]).equals(&self.weyl[k].compose(res)) {
                out.push(Violation::ResEquivariance { level: k });
            }
            if !tr.compose(&self.weyl[k]).equals(&self.weyl[k + 1].compose(tr)) {
                out.push(Violation::TrEquivariance { level: k });
            }
            let w = self.weyl[k].pow(self.shape.orbit_size(k + 1));
            if !res.compose(tr).equals(&self.orbit_sum(k)) {
                out.push(Violation::DoubleCoset { level: k });
            }
            if !tr.compose(&w).equals(tr) {
                out.push(Violation::TrTwist { level: k });
            }
            if !w.compose(res).equals(res) {
                out.push(Violation::ResTwist { level: k });
            }
        }
        out
    }

    /// `Σ_{i<p} weyl[k]^{i p^{n-k-1}}`, the double-coset sum for `res[k]∘tr[k]`.
    pub fn orbit_sum(&self, k: usize) -> GroupHom {
        let w = self.weyl[k].pow(self.shape.orbit_size(k + 1));
        let mut acc = GroupHom::zero(&self.levels[k], &self.levels[k]);
        let mut term = GroupHom::identity(&self.levels[k]);
        for _ in 0..self.p() {
            acc = acc.add(&term);
            term = w.compose(&term);
        }
        acc
    }

    /// `tr[k]∘res[k] = p` on level `k + 1` for every adjacent pair.
    pub fn is_cohomological(&self) -> bool {
        (0..self.n()).all(|k| {
            let p = BigInt::from(self.p());
            let lhs = self.tr[k].compose(&self.res[k]);
            lhs.equals(&GroupHom::identity(&self.levels[k + 1]).scale(&p))
        })
    }

    pub(crate) fn require_cohomological(&self) -> Result<(), MackeyError> {
        if self.is_cohomological() {
            Ok(())
        } else {
            Err(MackeyError::NotCohomological)
        }
    }

    /// Composite restriction from level `from` down to level `to`.
    pub fn res_chain(&self, from: usize, to: usize) -> GroupHom {
        assert!(to <= from);
        let mut acc = GroupHom::identity(&self.levels[from]);
        for k in (to..from).rev() {
            acc = self.res[k].compose(&acc);
        }
        acc
    }

    /// Composite transfer from level `from` up to level `to`.
    pub fn tr_chain(&self, from: usize, to: usize) -> GroupHom {
        assert!(from <= to);
        let mut acc = GroupHom::identity(&self.levels[from]);
        for k in from..to {
            acc = self.tr[k].compose(&acc);
        }
        acc
    }

    /// Inverse of the Weyl action on level `k`.
    pub fn weyl_inverse(&self, k: usize) -> GroupHom {
        self.weyl[k].pow(self.shape.orbit_size(k) - 1)
    }
}

impl fmt::Debug for MackeyFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_lewis(self))
    }
}

/// Natural transformation between Mackey functors over the same shape.
#[derive(Clone, Debug)]
pub struct MackeyHom {
    pub source: MackeyFunctor,
    pub target: MackeyFunctor,
    pub maps: Vec<GroupHom>,
}

impl MackeyHom {
    pub fn new(source: MackeyFunctor, target: MackeyFunctor, maps: Vec<IntMatrix>) -> Result<Self, MackeyError> {
        let h = Self::new_unchecked(source, target, maps)?;
        if h.is_natural() {
            Ok(h)
        } else {
            Err(MackeyError::Shape("levelwise maps do not commute with the structure maps".into()))
        }
    }

    pub fn new_unchecked(source: MackeyFunctor, target: MackeyFunctor, maps: Vec<IntMatrix>) -> Result<Self, MackeyError> {
        if source.shape != target.shape || maps.len() != source.n() + 1 {
            return Err(MackeyError::Shape("hom between different shapes".into()));
        }
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(k, m)| {
                GroupHom::new(source.levels[k].clone(), target.levels[k].clone(), m)
                    .map_err(|e| MackeyError::Shape(format!("level {k}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MackeyHom { source, target, maps })
    }

    pub fn identity(m: &MackeyFunctor) -> Self {
        MackeyHom { source: m.clone(), target: m.clone(), maps: m.levels.iter().map(GroupHom::identity).collect() }
    }

    pub fn is_natural(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        (0..s.n()).all(|k| {
            self.maps[k].compose(&s.res[k]).equals(&t.res[k].compose(&self.maps[k + 1]))
                && self.maps[k + 1].compose(&s.tr[k]).equals(&t.tr[k].compose(&self.maps[k]))
        }) && (0..=s.n()).all(|k| self.maps[k].compose(&s.weyl[k]).equals(&t.weyl[k].compose(&self.maps[k])))
    }

    pub fn compose(&self, other: &MackeyHom) -> MackeyHom {
        MackeyHom {
            source: other.source.clone(),
            target: self.target.clone(),
            maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.compose(b)).collect(),
        }
    }

    pub fn is_iso(&self) -> bool {
        self.maps.iter().all(GroupHom::is_iso)
    }
}
