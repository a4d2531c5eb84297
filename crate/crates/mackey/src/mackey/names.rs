//! Short names for catalog functors, as used on the command line.
//!
//! ```text
//! Z  Z*  Z10  B1  B101  Z-  Z-dot  Z[0]  Z[0,1]  0  B10^E  Z11^*  Z11+B01
//! ```
//! Digits after `Z`/`B` are the index `t_1 .. t_n`; `Z[k, ..]` is the
//! permutation module on the listed orbits; `Z-` is the sign module (p = 2)
//! and `Z-dot` its orbit functor.

use std::sync::OnceLock;

use super::catalog::{b_form, constant_z, form_z, z_minus, z_minus_dotted, z_star, zero_functor, CatalogError};
use super::fingerprint::{fingerprint, Fingerprint};
use super::ops::{direct_sum_m, dual_levelwise, DualMode};
use super::{MackeyFunctor, Shape};
use crate::burnside::perm_functor;

fn bad(name: &str, why: &str) -> CatalogError {
    CatalogError::Parse(format!("'{name}': {why}"))
}

fn bits(shape: Shape, name: &str, digits: &str) -> Result<Vec<u8>, CatalogError> {
    if digits.len() != shape.n || !digits.chars().all(|c| c == '0' || c == '1') {
        return Err(bad(name, &format!("expected {} binary digits", shape.n)));
    }
    Ok(digits.bytes().map(|b| b - b'0').collect())
}

fn atom(shape: Shape, name: &str) -> Result<MackeyFunctor, CatalogError> {
    let (base, dual) = match name.rsplit_once('^') {
        Some((b, "E")) => (b, Some(DualMode::E)),
        Some((b, "*")) => (b, Some(DualMode::Star)),
        Some(_) => return Err(bad(name, "unknown dual, use ^E or ^*")),
        None => (name, None),
    };
    let m = match base {
        "0" => zero_functor(shape),
        "Z" => constant_z(shape),
        "Z*" => z_star(shape),
        "Z-" => z_minus(shape)?,
        "Z-dot" => z_minus_dotted(shape)?,
        _ if base.starts_with("Z[") && base.ends_with(']') => {
            let inner = &base[2..base.len() - 1];
            let orbits = inner
                .split(',')
                .map(|k| k.trim().parse::<usize>().ok().filter(|&k| k <= shape.n))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| bad(name, "orbit levels must be integers in 0..=n"))?;
            perm_functor(shape, &orbits)
        }
        _ if base.starts_with('Z') => form_z(shape, &bits(shape, name, &base[1..])?)?,
        _ if base.starts_with('B') => b_form(shape, &bits(shape, name, &base[1..])?)?,
        _ => return Err(bad(name, "unknown functor")),
    };
    Ok(match dual {
        Some(mode) => dual_levelwise(&m, mode),
        None => m,
    })
}

/// Parses a catalog name; `+` forms direct sums.
pub fn parse_catalog(shape: Shape, name: &str) -> Result<MackeyFunctor, CatalogError> {
    let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    let mut acc: Option<MackeyFunctor> = None;
    for part in compact.split('+') {
        if part.is_empty() {
            return Err(bad(name, "empty summand"));
        }
        let m = atom(shape, part)?;
        acc = Some(match acc {
            Some(a) => direct_sum_m(&a, &m),
            None => m,
        });
    }
    acc.ok_or_else(|| bad(name, "empty name"))
}

fn all_bits(n: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..1u32 << n).map(move |x| (0..n).map(|i| ((x >> (n - 1 - i)) & 1) as u8).collect())
}

fn digits(t: &[u8]) -> String {
    t.iter().map(|b| b.to_string()).collect()
}

/// Every form `Z_t`, named `Z<t>`.
pub fn forms(shape: Shape) -> Vec<(String, MackeyFunctor)> {
    all_bits(shape.n).map(|t| (format!("Z{}", digits(&t)), form_z(shape, &t).expect("valid index"))).collect()
}

/// The torsion part of the catalog: `B(t)` and `B(t)^E` for `t != 0`.
pub fn torsion_catalog(shape: Shape) -> Vec<(String, MackeyFunctor)> {
    let mut out = vec![];
    for t in all_bits(shape.n).filter(|t| t.iter().any(|&b| b == 1)) {
        let b = b_form(shape, &t).expect("valid index");
        out.push((format!("B{}^E", digits(&t)), dual_levelwise(&b, DualMode::E)));
        out.push((format!("B{}", digits(&t)), b));
    }
    out
}

/// Forms, torsion modules, permutation modules on one orbit, and `Z-` for `p = 2`.
pub fn full_catalog(shape: Shape) -> Vec<(String, MackeyFunctor)> {
    let mut out = forms(shape);
    out.extend(torsion_catalog(shape));
    for k in 0..shape.n {
        out.push((format!("Z[{k}]"), perm_functor(shape, &[k])));
    }
    if shape.p == 2 {
        out.push(("Z-".into(), z_minus(shape).expect("p = 2")));
    }
    out
}

/// Recognizes catalog functors and sums of two of them, up to isomorphism.
pub struct Namer {
    singles: Vec<(Fingerprint, String)>,
    parts: Vec<(String, MackeyFunctor)>,
    pairs: OnceLock<Vec<(Fingerprint, String)>>,
}

impl Namer {
    pub fn new(shape: Shape) -> Self {
        let mut parts = vec![("Z".to_string(), constant_z(shape))];
        parts.extend(full_catalog(shape));
        if shape.p == 2 {
            parts.push(("Z-dot".into(), z_minus_dotted(shape).expect("p = 2")));
        }
        // Self-dual torsion modules get their plain name.
        parts.sort_by_key(|(name, _)| name.contains('^'));
        let mut singles: Vec<(Fingerprint, String)> = vec![];
        let mut kept = vec![];
        for (name, m) in parts {
            let f = fingerprint(&m);
            if !singles.iter().any(|(g, _)| *g == f) {
                singles.push((f, name.clone()));
                kept.push((name, m));
            }
        }
        Namer { singles, parts: kept, pairs: OnceLock::new() }
    }

    /// A name accepted by [`parse_catalog`], if `m` is in the table.
    pub fn name(&self, m: &MackeyFunctor) -> Option<String> {
        if m.is_zero() {
            return Some("0".into());
        }
        let f = fingerprint(m);
        let find = |table: &[(Fingerprint, String)]| table.iter().find(|(g, _)| *g == f).map(|(_, n)| n.clone());
        find(&self.singles).or_else(|| {
            find(self.pairs.get_or_init(|| {
                let mut out = vec![];
                for (i, (a, x)) in self.parts.iter().enumerate() {
                    for (b, y) in &self.parts[i..] {
                        out.push((fingerprint(&direct_sum_m(x, y)), format!("{a}+{b}")));
                    }
                }
                out
            }))
        })
    }
}
