use num_bigint::BigInt;
use num_traits::Zero;

use super::{MackeyFunctor, MackeyHom};
use crate::intlin::{kernel, subquotient, FgAbGroup, GroupHom, IntMatrix, Subquotient};

/// Unknown `F_k[i][j]` of a candidate natural map, one block per level.
struct Unknowns {
    offsets: Vec<usize>,
    cols: Vec<usize>,
    total: usize,
}

impl Unknowns {
    fn new(m: &MackeyFunctor, n: &MackeyFunctor) -> Self {
        let mut offsets = vec![];
        let mut cols = vec![];
        let mut total = 0;
        for k in 0..=m.n() {
            offsets.push(total);
            cols.push(m.levels[k].num_generators());
            total += n.levels[k].num_generators() * m.levels[k].num_generators();
        }
        Unknowns { offsets, cols, total }
    }

    fn at(&self, k: usize, i: usize, j: usize) -> usize {
        self.offsets[k] + i * self.cols[k] + j
    }
}

/// Accumulates linear congruences `row · x ≡ 0 (mod modulus)`.
struct System {
    rows: Vec<Vec<BigInt>>,
    moduli: Vec<BigInt>,
    width: usize,
}

impl System {
    fn push(&mut self, row: Vec<BigInt>, modulus: &BigInt) {
        if row.iter().any(|x| !x.is_zero()) {
            self.rows.push(row);
            self.moduli.push(modulus.clone());
        }
    }

    fn blank(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.width]
    }
}

/// The group of natural transformations `M -> N`, with one representative map
/// per generator.
pub fn hom_group(m: &MackeyFunctor, n: &MackeyFunctor) -> (FgAbGroup, Vec<MackeyHom>) {
    let h = hom_space(m, n);
    (h.group().clone(), h.reps)
}

/// Natural transformations `M -> N` together with a coordinate map.
pub struct HomSpace {
    pub reps: Vec<MackeyHom>,
    sub: Subquotient,
    unknowns: Unknowns,
}

impl HomSpace {
    pub fn group(&self) -> &FgAbGroup {
        &self.sub.group
    }

    /// Coordinates of a natural map given by its level matrices.
    pub fn coords(&self, maps: &[IntMatrix]) -> Option<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.unknowns.total];
        for (k, f) in maps.iter().enumerate() {
            for i in 0..f.rows() {
                for j in 0..f.cols() {
                    v[self.unknowns.at(k, i, j)] = f[(i, j)].clone();
                }
            }
        }
        self.sub.project(&v)
    }
}

pub fn hom_space(m: &MackeyFunctor, n: &MackeyFunctor) -> HomSpace {
    assert_eq!(m.shape, n.shape, "natural maps between functors over different groups");
    let u = Unknowns::new(m, n);
    let mut sys = System { rows: vec![], moduli: vec![], width: u.total };
    let levels = m.n();

    for k in 0..=levels {
        let (a, b) = (&m.levels[k], &n.levels[k]);
        for j in 0..a.num_generators() {
            let o = &a.orders()[j];
            if o.is_zero() {
                continue;
            }
            for i in 0..b.num_generators() {
                let mut row = sys.blank();
                row[u.at(k, i, j)] = o.clone();
                sys.push(row, &b.orders()[i]);
            }
        }
    }

    // F_t ∘ f_M - g_N ∘ F_s ≡ 0 for f_M: M(s) -> M(t) and g_N: N(s) -> N(t).
    let mut square = |s: usize, t: usize, fm: &IntMatrix, gn: &IntMatrix| {
        let tgt = &n.levels[t];
        for i in 0..tgt.num_generators() {
            for j in 0..m.levels[s].num_generators() {
                let mut row = sys.blank();
                for l in 0..m.levels[t].num_generators() {
                    row[u.at(t, i, l)] += &fm[(l, j)];
                }
                for l in 0..n.levels[s].num_generators() {
                    row[u.at(s, l, j)] -= &gn[(i, l)];
                }
                sys.push(row, &tgt.orders()[i]);
            }
        }
    };
    for k in 0..levels {
        square(k + 1, k, &m.res[k].matrix, &n.res[k].matrix);
        square(k, k + 1, &m.tr[k].matrix, &n.tr[k].matrix);
    }
    for k in 0..=levels {
        square(k, k, &m.weyl[k].matrix, &n.weyl[k].matrix);
    }

    let constraints = IntMatrix::from_rows_with_cols(&sys.rows, u.total);
    let target = FgAbGroup::diagonal_unchecked(sys.moduli.clone());
    let solutions = kernel(&GroupHom::new_unchecked(FgAbGroup::free(u.total), target, constraints));

    // Maps whose entries are multiples of the target orders are zero.
    let mut zero_maps = vec![];
    for k in 0..=levels {
        for i in 0..n.levels[k].num_generators() {
            let o = &n.levels[k].orders()[i];
            if o.is_zero() {
                continue;
            }
            for j in 0..m.levels[k].num_generators() {
                let mut v = vec![BigInt::zero(); u.total];
                v[u.at(k, i, j)] = o.clone();
                zero_maps.push(v);
            }
        }
    }
    let zero_maps = IntMatrix::from_cols(u.total, &zero_maps);
    let h = subquotient(&solutions.lift.hstack(&zero_maps), &zero_maps);

    let reps = (0..h.group.num_generators())
        .map(|g| {
            let v = h.lift.col(g);
            let maps = (0..=levels)
                .map(|k| {
                    let (r, c) = (n.levels[k].num_generators(), m.levels[k].num_generators());
                    let mut f = IntMatrix::zeros(r, c);
                    for i in 0..r {
                        for j in 0..c {
                            f[(i, j)] = v[u.at(k, i, j)].clone();
                        }
                    }
                    f
                })
                .collect();
            MackeyHom::new_unchecked(m.clone(), n.clone(), maps).expect("solution is a natural map")
        })
        .collect();
    HomSpace { reps, sub: h, unknowns: u }
}

#[cfg(test)]
mod tests {
    use super::super::{b_form, constant_z, fixed_point_module, form_z, Shape};
    use super::*;

    fn sh(p: u64, n: usize) -> Shape {
        Shape::new(p, n).unwrap()
    }

    #[test]
    fn hom_from_unit_is_top_level() {
        let s = sh(3, 2);
        let n = b_form(s, &[1, 1]).unwrap();
        let (g, reps) = hom_group(&constant_z(s), &n);
        assert_eq!(g.to_string(), "Z/9");
        assert!(reps.iter().all(MackeyHom::is_natural));
    }

    #[test]
    fn hom_regular_to_b1_vanishes() {
        let s = sh(3, 1);
        let shift = IntMatrix::from_i64(3, 3, &[0, 0, 1, 1, 0, 0, 0, 1, 0]);
        let free = fixed_point_module(s, &shift).unwrap();
        let (g, _) = hom_group(&free, &b_form(s, &[1]).unwrap());
        assert!(g.is_zero());
    }

    #[test]
    fn hom_between_forms() {
        let s = sh(2, 2);
        // Z -> Z_{1,0} must be divisible by p at the level where res jumps
        let (g, reps) = hom_group(&constant_z(s), &form_z(s, &[1, 0]).unwrap());
        assert_eq!(g.to_string(), "Z");
        assert!(reps[0].is_natural());
        let (g2, _) = hom_group(&form_z(s, &[1, 0]).unwrap(), &constant_z(s));
        assert_eq!(g2.to_string(), "Z");
    }
}
