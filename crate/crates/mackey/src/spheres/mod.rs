//! Cellular chains of representation spheres and their Bredon homology with
//! coefficients in the constant functor `Z`.
//!
//! Homology is reported in homological degree: `H_d(S^V)`, which is
//! `π_{d - V}` of the Eilenberg-MacLane spectrum of `Z`.

mod cells;
mod label;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::homalg::{ext_z, tor_z, HomalgError};
use crate::mackey::{
    direct_sum_m, dual_levelwise, fingerprint, free_quotient, torsion_part, DualMode, GradedMackey, MackeyError,
    MackeyFunctor, Shape,
};

pub use cells::{chain_lambda, chain_sigma, reduced_chain, sphere_chain, CellComplex};
pub use label::RepLabel;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SphereError {
    #[error("cannot parse '{token}': {reason}")]
    Parse { token: String, reason: String },
    #[error("twist {0} is divisible by p")]
    Twist(u64),
    #[error("λ_{0} is not a nontrivial rotation of this group")]
    Level(usize),
    #[error("the sign representation needs p = 2, got p = {0}")]
    NoSign(u64),
    #[error("{0} is not an actual representation")]
    NotActual(String),
    #[error("cellular differentials do not square to zero")]
    NotAComplex,
    #[error("underlying homology is {found} in degree {degree} (p = {}, n = {})", shape.p, shape.n)]
    Underlying { degree: i64, found: String, shape: Shape },
    #[error("the two cell models of {label} disagree in degree {degree}")]
    ModelMismatch { label: String, degree: i64 },
    #[error("not a form of Z: {0}")]
    NotAForm(String),
    #[error(transparent)]
    Mackey(#[from] MackeyError),
    #[error(transparent)]
    Homalg(#[from] HomalgError),
}

/// `H_*(S^V; Z)` as graded Mackey functors.
///
/// The underlying level is checked to be `Z` in degree `|V|` only. For an
/// actual representation the homology is also computed from the one-orbit-per-cell
/// model and the two answers must agree.
pub fn bredon_homology(v: &RepLabel) -> Result<GradedMackey, SphereError> {
    let c = sphere_chain(v)?;
    c.check_underlying(v.dim())?;
    let h = c.homology()?;
    if v.is_actual() {
        let r = reduced_chain(v)?;
        r.check_underlying(v.dim())?;
        let hr = r.homology()?;
        let (a, b) = (h.fingerprints(), hr.fingerprints());
        if let Some(d) = a.keys().chain(b.keys()).find(|d| a.get(d) != b.get(d)) {
            return Err(SphereError::ModelMismatch { label: v.to_string(), degree: *d });
        }
    }
    Ok(h)
}

/// The index `t` with `M ≅ Z_t` when `M` is a form of `Z`.
pub fn form_index(m: &MackeyFunctor) -> Option<Vec<u8>> {
    let p = BigInt::from(m.p());
    let one = |x: &BigInt| x.abs() == BigInt::from(1);
    let ok_levels = m.levels.iter().all(|g| g.is_free() && g.free_rank() == 1)
        && m.weyl.iter().all(|w| w.matrix[(0, 0)] == BigInt::from(1));
    if !ok_levels {
        return None;
    }
    (0..m.n())
        .map(|k| {
            let (r, t) = (&m.res[k].matrix[(0, 0)], &m.tr[k].matrix[(0, 0)]);
            if (r * t).abs() != p {
                None
            } else if one(r) {
                Some(0)
            } else if one(t) {
                Some(1)
            } else {
                None
            }
        })
        .collect()
}

/// A virtual representation `V` with `H_*(S^V) = M` in degree 0.
///
/// Level by level from the bottom: a restriction `p` contributes
/// `2 - λ_k` and flips the remaining indices, an isomorphism contributes nothing.
pub fn form_to_rep(m: &MackeyFunctor) -> Result<RepLabel, SphereError> {
    let t = form_index(m).ok_or_else(|| SphereError::NotAForm(crate::mackey::render_lewis(m)))?;
    let shape = m.shape;
    let mut v = RepLabel::zero(shape);
    let mut sign = 1;
    let mut t = t;
    for k in 0..t.len() {
        if t[k] == 1 {
            v.t += 2 * sign;
            v.a[k] -= sign;
            sign = -sign;
            for x in t.iter_mut().skip(k + 1) {
                *x = 1 - *x;
            }
        }
    }
    Ok(v.canonical())
}

/// Result of comparing two computations degree by degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    /// `(what, degree)` for every disagreement.
    pub mismatches: Vec<(String, i64)>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn same(a: &MackeyFunctor, b: &MackeyFunctor) -> bool {
    fingerprint(a) == fingerprint(b)
}

/// Anderson duality for `H = H_*(S^V)` and `H' = H_*(S^{2 - λ_0 - V})`:
/// `0 -> Ext_L(H_{d-1}) -> H'_{-d} -> Hom_L(H_d) -> 0` in every degree.
/// For orientable `V` the sequence must split.
pub fn anderson_check(v: &RepLabel) -> Result<Report, SphereError> {
    let shape = v.shape;
    let h = bredon_homology(v)?;
    let w = RepLabel::trivial(shape, 2).sub(&RepLabel::lambda(shape, 0, 1)).sub(&v.untwisted());
    let hd = bredon_homology(&w)?;
    let mut degrees: Vec<i64> = h.support().iter().flat_map(|&d| [d, d + 1]).collect();
    degrees.extend(hd.support().iter().map(|d| -d));
    degrees.sort();
    degrees.dedup();
    let mut report = Report::default();
    for d in degrees {
        let ext = dual_levelwise(&h.degree(d - 1), DualMode::E);
        let hom = dual_levelwise(&h.degree(d), DualMode::Star);
        let x = hd.degree(-d);
        let ok = if ext.is_zero() {
            same(&x, &hom)
        } else if hom.is_zero() {
            same(&x, &ext)
        } else {
            let parts = same(&torsion_part(&x), &ext) && same(&free_quotient(&x), &hom);
            parts && (!v.is_orientable() || same(&x, &direct_sum_m(&ext, &hom)))
        };
        if !ok {
            report.mismatches.push(("anderson".into(), d));
        }
    }
    Ok(report)
}

/// Ext and Tor between forms of `Z` from two independent engines:
/// `Ext^i(M, N) = H_{-i}(S^{V_N - V_M})` and `Tor_i(M, N) = H_i(S^{V_M + V_N})`.
pub fn ext_sphere_crosscheck(m: &MackeyFunctor, n: &MackeyFunctor) -> Result<Report, SphereError> {
    let (v1, v2) = (form_to_rep(m)?, form_to_rep(n)?);
    let mut report = Report::default();
    let pairs = [
        ("ext", ext_z(m, n)?, bredon_homology(&v2.sub(&v1))?.reindex(-1, 0)),
        ("tor", tor_z(m, n)?, bredon_homology(&v1.add(&v2))?),
    ];
    for (what, alg, top) in pairs {
        let (a, b) = (alg.fingerprints(), top.fingerprints());
        let mut ds: Vec<i64> = a.keys().chain(b.keys()).copied().collect();
        ds.sort();
        ds.dedup();
        for d in ds {
            if a.get(&d) != b.get(&d) {
                report.mismatches.push((what.into(), d));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests;
