//! Box product and internal Hom of modules over the constant functor `Z`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::burnside::{eval_perm, lift, EquivMatrix, GSet, SpanWord};
use crate::intlin::{present, FgAbGroup, IntMatrix, Presented};
use crate::mackey::{hom_space, MackeyError, MackeyFunctor, Shape};

pub use crate::mackey::hom_group;

/// One level of the inductive construction.
struct BoxLevel {
    /// Tensor generators come first, transfer generators after them.
    pres: Presented,
    weyl: IntMatrix,
    /// `res` from this level to the previous one (normalized coordinates).
    res: Option<IntMatrix>,
    /// `tr` from the previous level into this one.
    tr: Option<IntMatrix>,
}

impl BoxLevel {
    fn group(&self) -> &FgAbGroup {
        &self.pres.group
    }

    /// Normalized class of the tensor generator `(i, j)`.
    fn pair(&self, cols: usize, i: usize, j: usize) -> Vec<BigInt> {
        self.pres.to_new.col(i * cols + j)
    }
}

fn col_vec(v: &mut [BigInt], offset: usize, x: &[BigInt], sign: i64) {
    for (k, c) in x.iter().enumerate() {
        v[offset + k] += c * sign;
    }
}

/// `M □ N` for cohomological `M` and `N`, quotiented to a module over `Z`.
pub fn box_product(m: &MackeyFunctor, n: &MackeyFunctor) -> Result<MackeyFunctor, MackeyError> {
    build(m, n, true)
}

/// The box product without the final cohomological relation.
pub fn box_plain(m: &MackeyFunctor, n: &MackeyFunctor) -> Result<MackeyFunctor, MackeyError> {
    build(m, n, false)
}

fn build(m: &MackeyFunctor, n: &MackeyFunctor, cohomological: bool) -> Result<MackeyFunctor, MackeyError> {
    m.require_cohomological()?;
    n.require_cohomological()?;
    if m.shape != n.shape {
        return Err(MackeyError::Shape("box product over different groups".into()));
    }
    let shape = m.shape;
    let p = BigInt::from(shape.p);
    let mut levels: Vec<BoxLevel> = vec![];
    for k in 0..=shape.n {
        let (gm, gn) = (m.levels[k].num_generators(), n.levels[k].num_generators());
        let t = gm * gn;
        let prev = levels.last();
        let g_prev = prev.map_or(0, |l| l.group().num_generators());
        let width = t + g_prev;
        let mut rels: Vec<Vec<BigInt>> = vec![];
        let unit = |idx: usize, c: &BigInt| {
            let mut v = vec![BigInt::zero(); width];
            v[idx] = c.clone();
            v
        };
        for i in 0..gm {
            for j in 0..gn {
                for o in [&m.levels[k].orders()[i], &n.levels[k].orders()[j]] {
                    if !o.is_zero() {
                        rels.push(unit(i * gn + j, o));
                    }
                }
            }
        }
        // γ acts diagonally on tensors and through the previous level on transfers
        let mut weyl_raw = IntMatrix::zeros(width, width);
        for i in 0..gm {
            for j in 0..gn {
                for i2 in 0..gm {
                    for j2 in 0..gn {
                        weyl_raw[(i2 * gn + j2, i * gn + j)] = &m.weyl[k].matrix[(i2, i)] * &n.weyl[k].matrix[(j2, j)];
                    }
                }
            }
        }
        let mut res_raw = None;
        if let Some(prev) = prev {
            let (pm, pn) = (m.levels[k - 1].num_generators(), n.levels[k - 1].num_generators());
            let prev_pair = |i: usize, j: usize| prev.pair(pn, i, j);
            let gp = prev.group();
            let step = shape.orbit_size(k);
            let w = pow_mod(&prev.weyl, step, gp);
            for x in 0..g_prev {
                let o = &gp.orders()[x];
                if !o.is_zero() {
                    rels.push(unit(t + x, o));
                }
                let mut v = unit(t + x, &BigInt::from(1));
                col_vec(&mut v, t, &w.col(x), -1);
                rels.push(v);
                for y in 0..g_prev {
                    weyl_raw[(t + y, t + x)] = prev.weyl[(y, x)].clone();
                }
            }
            // a ⊗ Tr(b) = Tr(Res(a) ⊗ b)
            for a in 0..gm {
                for b in 0..pn {
                    let mut v = vec![BigInt::zero(); width];
                    for j in 0..gn {
                        v[a * gn + j] += &n.tr[k - 1].matrix[(j, b)];
                    }
                    for i in 0..pm {
                        let c = &m.res[k - 1].matrix[(i, a)];
                        if !c.is_zero() {
                            col_vec(&mut v, t, &prev_pair(i, b).iter().map(|x| x * c).collect::<Vec<_>>(), -1);
                        }
                    }
                    rels.push(v);
                }
            }
            // Tr(c) ⊗ d = Tr(c ⊗ Res(d))
            for c in 0..pm {
                for d in 0..gn {
                    let mut v = vec![BigInt::zero(); width];
                    for i in 0..gm {
                        v[i * gn + d] += &m.tr[k - 1].matrix[(i, c)];
                    }
                    for j in 0..pn {
                        let e = &n.res[k - 1].matrix[(j, d)];
                        if !e.is_zero() {
                            col_vec(&mut v, t, &prev_pair(c, j).iter().map(|x| x * e).collect::<Vec<_>>(), -1);
                        }
                    }
                    rels.push(v);
                }
            }
            // res of a ⊗ b is res a ⊗ res b; res of Tr(x) is the orbit sum of x
            let mut r = IntMatrix::zeros(g_prev, width);
            for a in 0..gm {
                for b in 0..gn {
                    let mut v = vec![BigInt::zero(); g_prev];
                    for i in 0..pm {
                        for j in 0..pn {
                            let c = &m.res[k - 1].matrix[(i, a)] * &n.res[k - 1].matrix[(j, b)];
                            if !c.is_zero() {
                                col_vec(&mut v, 0, &prev_pair(i, j).iter().map(|x| x * &c).collect::<Vec<_>>(), 1);
                            }
                        }
                    }
                    for (y, x) in v.into_iter().enumerate() {
                        r[(y, a * gn + b)] = x;
                    }
                }
            }
            let mut orbit = IntMatrix::zeros(g_prev, g_prev);
            let mut term = IntMatrix::identity(g_prev);
            for _ in 0..shape.p {
                orbit = orbit.add(&term);
                term = gp.reduce_matrix(&w.mul(&term));
            }
            r.set_block(0, t, &orbit);
            if cohomological {
                for g in 0..t {
                    let mut v = unit(g, &p);
                    col_vec(&mut v, t, &r.col(g), -1);
                    rels.push(v);
                }
            }
            res_raw = Some(gp.reduce_matrix(&r));
        }
        let pres = present(width, &IntMatrix::from_cols(width, &rels));
        let g = &pres.group;
        let weyl = g.reduce_matrix(&pres.to_new.mul(&weyl_raw).mul(&pres.from_new));
        let res = res_raw.map(|r| prev.unwrap().group().reduce_matrix(&r.mul(&pres.from_new)));
        let tr = prev.map(|_| g.reduce_matrix(&pres.to_new.select_cols(&(t..width).collect::<Vec<_>>())));
        levels.push(BoxLevel { pres, weyl, res, tr });
    }
    let groups = levels.iter().map(|l| l.group().clone()).collect();
    let res = levels[1..].iter().map(|l| l.res.clone().unwrap()).collect();
    let tr = levels[1..].iter().map(|l| l.tr.clone().unwrap()).collect();
    let weyl = levels.iter().map(|l| l.weyl.clone()).collect();
    MackeyFunctor::new(shape, groups, res, tr, weyl)
}

fn pow_mod(w: &IntMatrix, e: u64, g: &FgAbGroup) -> IntMatrix {
    let mut acc = IntMatrix::identity(w.rows());
    for _ in 0..e {
        acc = g.reduce_matrix(&w.mul(&acc));
    }
    acc
}

/// Equivariant maps between `G/C_{p^l} × G/C_{p^k}` induced by a map of the second factor.
fn orbit_factor(shape: Shape, l: usize, f: &EquivMatrix) -> EquivMatrix {
    EquivMatrix::identity(&GSet::orbit(shape, l)).tensor(f)
}

/// Natural map `N_{X'} -> N_X` induced by `f: Z[X] -> Z[X']`.
fn lift_map(n: &MackeyFunctor, f: &EquivMatrix) -> Vec<IntMatrix> {
    (0..=n.n()).map(|l| eval_perm(n, &orbit_factor(n.shape, l, f)).expect("cohomological").matrix).collect()
}

/// `Hom(M, N)` as a Mackey functor, with value `Hom(M, N_{G/C_{p^k}})` at level `k`.
pub fn internal_hom(m: &MackeyFunctor, n: &MackeyFunctor) -> Result<MackeyFunctor, MackeyError> {
    m.require_cohomological()?;
    n.require_cohomological()?;
    let shape = m.shape;
    let spaces: Vec<_> = (0..=shape.n)
        .map(|k| {
            let target = lift(n, &GSet::orbit(shape, k))?;
            Ok(hom_space(m, &target))
        })
        .collect::<Result<_, MackeyError>>()?;
    // post-compose every generator of level `from` with the lift map, then read coordinates at `to`
    let induced = |from: usize, to: usize, w: SpanWord| -> IntMatrix {
        let phi = lift_map(n, &EquivMatrix::word(shape, w));
        let cols: Vec<Vec<BigInt>> = spaces[from]
            .reps
            .iter()
            .map(|f| {
                let maps: Vec<IntMatrix> = f.maps.iter().zip(&phi).map(|(g, p)| p.mul(&g.matrix)).collect();
                spaces[to].coords(&maps).expect("composite is a natural map")
            })
            .collect();
        IntMatrix::from_cols(spaces[to].group().num_generators(), &cols)
    };
    let mut res = vec![];
    let mut tr = vec![];
    for k in 0..shape.n {
        res.push(induced(k + 1, k, SpanWord { source: k, target: k + 1, t: 0 }));
        tr.push(induced(k, k + 1, SpanWord { source: k + 1, target: k, t: 0 }));
    }
    let weyl = (0..=shape.n)
        .map(|k| induced(k, k, SpanWord { source: k, target: k, t: 1 % shape.orbit_size(k) as usize }))
        .collect();
    let levels = spaces.iter().map(|s| s.group().clone()).collect();
    MackeyFunctor::new(shape, levels, res, tr, weyl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burnside::perm_functor;
    use crate::intlin::{hom_ab, tensor_ab};
    use crate::mackey::{b_form, constant_z, direct_sum_m, fingerprint, form_z, z_star};

    fn sh(p: u64, n: usize) -> Shape {
        Shape::new(p, n).unwrap()
    }

    #[test]
    fn unit() {
        for s in [sh(2, 1), sh(3, 2)] {
            let z = constant_z(s);
            for m in [b_form(s, &vec![1; s.n]).unwrap(), z_star(s), perm_functor(s, &[0])] {
                assert_eq!(fingerprint(&box_product(&z, &m).unwrap()), fingerprint(&m));
                assert_eq!(fingerprint(&box_product(&m, &z).unwrap()), fingerprint(&m));
            }
        }
    }

    #[test]
    fn form_one_zero_squared() {
        for p in [2, 3] {
            let s = sh(p, 2);
            let f = form_z(s, &[1, 0]).unwrap();
            let want = direct_sum_m(&form_z(s, &[1, 1]).unwrap(), &b_form(s, &[0, 1]).unwrap());
            assert_eq!(fingerprint(&box_product(&f, &f).unwrap()), fingerprint(&want));
        }
    }

    #[test]
    fn regular_squared_is_lift() {
        let s = sh(3, 1);
        let free = perm_functor(s, &[0]);
        let b = box_product(&free, &free).unwrap();
        assert_eq!(fingerprint(&b), fingerprint(&lift(&free, &GSet::free(s)).unwrap()));
        assert_eq!(fingerprint(&b), fingerprint(&perm_functor(s, &[0, 0, 0])));
    }

    #[test]
    fn bottom_levels() {
        let s = sh(2, 2);
        let a = b_form(s, &[0, 1]).unwrap();
        let b = form_z(s, &[1, 0]).unwrap();
        let bx = box_product(&a, &b).unwrap();
        assert_eq!(bx.levels[0].canonical(), tensor_ab(&a.levels[0], &b.levels[0]).group.canonical());
        let ih = internal_hom(&b, &a).unwrap();
        assert_eq!(ih.levels[0].canonical(), hom_ab(&b.levels[0], &a.levels[0]).0.canonical());
    }

    #[test]
    fn internal_hom_examples() {
        let s = sh(3, 2);
        let z = constant_z(s);
        let f = form_z(s, &[0, 1]).unwrap();
        assert_eq!(fingerprint(&internal_hom(&f, &z).unwrap()), fingerprint(&z));
        let b = b_form(s, &[1, 1]).unwrap();
        assert_eq!(fingerprint(&internal_hom(&z, &b).unwrap()), fingerprint(&b));
        let free = perm_functor(s, &[0]);
        assert_eq!(fingerprint(&internal_hom(&free, &f).unwrap()), fingerprint(&lift(&f, &GSet::free(s)).unwrap()));
    }
}

