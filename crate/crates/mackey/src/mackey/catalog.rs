use num_bigint::BigInt;
use num_traits::One;

use super::{MackeyError, MackeyFunctor, MackeyHom, Shape};
use crate::intlin::{kernel_basis, present, FgAbGroup, IntMatrix, Lattice};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("expected {expected} entries in the index vector, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("index entries must be 0 or 1")]
    NotBinary,
    #[error("module action must be a square matrix")]
    NotSquare,
    #[error("module action does not have order dividing {0}")]
    WrongOrder(u64),
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Mackey(#[from] MackeyError),
}

fn check_t(shape: Shape, t: &[u8]) -> Result<(), CatalogError> {
    if t.len() != shape.n {
        return Err(CatalogError::WrongLength { expected: shape.n, got: t.len() });
    }
    if t.iter().any(|&x| x > 1) {
        return Err(CatalogError::NotBinary);
    }
    Ok(())
}

fn scalar(x: u64) -> IntMatrix {
    IntMatrix::from_vec(1, 1, vec![BigInt::from(x)])
}

pub fn zero_functor(shape: Shape) -> MackeyFunctor {
    let n = shape.n;
    let e = || IntMatrix::zeros(0, 0);
    MackeyFunctor::from_matrices(shape, vec![FgAbGroup::zero(); n + 1], vec![e(); n], vec![e(); n], vec![e(); n + 1])
        .expect("zero functor")
}

/// The form of `Z` whose restriction from level `i` to `i - 1` is `p^{t_i}`.
pub fn form_z(shape: Shape, t: &[u8]) -> Result<MackeyFunctor, CatalogError> {
    check_t(shape, t)?;
    let n = shape.n;
    let p = shape.p;
    let res = t.iter().map(|&ti| scalar(if ti == 1 { p } else { 1 })).collect();
    let tr = t.iter().map(|&ti| scalar(if ti == 1 { 1 } else { p })).collect();
    Ok(MackeyFunctor::new(shape, vec![FgAbGroup::free(1); n + 1], res, tr, vec![scalar(1); n + 1])?)
}

pub fn constant_z(shape: Shape) -> MackeyFunctor {
    form_z(shape, &vec![0; shape.n]).expect("constant functor")
}

/// The dual constant functor: restrictions are `p`, transfers are `1`.
pub fn z_star(shape: Shape) -> MackeyFunctor {
    form_z(shape, &vec![1; shape.n]).expect("dual constant functor")
}

/// Cokernel of the inclusion `form_z(t) -> Z`, which is `p^{t_1 + .. + t_k}` at level `k`.
pub fn b_form(shape: Shape, t: &[u8]) -> Result<MackeyFunctor, CatalogError> {
    let src = form_z(shape, t)?;
    let mut s = 0u32;
    let mut maps = vec![scalar(1)];
    for &ti in t {
        s += ti as u32;
        maps.push(scalar(shape.p.pow(s)));
    }
    let f = MackeyHom::new(src, constant_z(shape), maps)?;
    Ok(super::ops::cokernel_m(&f))
}

fn check_action(shape: Shape, gamma: &IntMatrix) -> Result<(), CatalogError> {
    if gamma.rows() != gamma.cols() {
        return Err(CatalogError::NotSquare);
    }
    if gamma.pow(shape.order()) != IntMatrix::identity(gamma.rows()) {
        return Err(CatalogError::WrongOrder(shape.order()));
    }
    Ok(())
}

/// `Σ_{i<p} g^{i·step}`.
fn coset_sum(g: &IntMatrix, step: u64, p: u64) -> IntMatrix {
    let gs = g.pow(step);
    let mut acc = IntMatrix::zeros(g.rows(), g.cols());
    let mut term = IntMatrix::identity(g.rows());
    for _ in 0..p {
        acc = acc.add(&term);
        term = gs.mul(&term);
    }
    acc
}

/// Fixed-point functor of the integral module with generator action `gamma`:
/// level `l` is the sublattice fixed by `C_{p^l}`.
pub fn fixed_point_module(shape: Shape, gamma: &IntMatrix) -> Result<MackeyFunctor, CatalogError> {
    check_action(shape, gamma)?;
    let n = shape.n;
    let m = gamma.rows();
    let id = IntMatrix::identity(m);
    let bases: Vec<Lattice> = (0..=n)
        .map(|l| {
            if l == 0 {
                Lattice::from_basis(id.clone())
            } else {
                Lattice::from_basis(kernel_basis(&gamma.pow(shape.orbit_size(l)).sub(&id)))
            }
        })
        .collect();
    let coords = |l: usize, x: &IntMatrix| bases[l].coords_matrix(x).expect("vector leaves the fixed sublattice");
    let levels = bases.iter().map(|b| FgAbGroup::free(b.rank())).collect();
    let res = (0..n).map(|l| coords(l, &bases[l + 1].basis)).collect();
    let tr = (0..n)
        .map(|l| coords(l + 1, &coset_sum(gamma, shape.orbit_size(l + 1), shape.p).mul(&bases[l].basis)))
        .collect();
    let weyl = (0..=n).map(|l| coords(l, &gamma.mul(&bases[l].basis))).collect();
    Ok(MackeyFunctor::new(shape, levels, res, tr, weyl)?)
}

/// Orbit functor: level `l` is the module of `C_{p^l}`-coinvariants.
pub fn orbit_module(shape: Shape, gamma: &IntMatrix) -> Result<MackeyFunctor, CatalogError> {
    check_action(shape, gamma)?;
    let n = shape.n;
    let m = gamma.rows();
    let id = IntMatrix::identity(m);
    let pres: Vec<_> = (0..=n).map(|l| present(m, &gamma.pow(shape.orbit_size(l)).sub(&id))).collect();
    let levels: Vec<FgAbGroup> = pres.iter().map(|q| q.group.clone()).collect();
    let into = |l: usize, x: &IntMatrix| levels[l].reduce_matrix(&pres[l].to_new.mul(x));
    let res = (0..n)
        .map(|l| into(l, &coset_sum(gamma, shape.orbit_size(l + 1), shape.p).mul(&pres[l + 1].from_new)))
        .collect();
    let tr = (0..n).map(|l| into(l + 1, &pres[l].from_new)).collect();
    let weyl = (0..=n).map(|l| into(l, &gamma.mul(&pres[l].from_new))).collect();
    Ok(MackeyFunctor::new(shape, levels.clone(), res, tr, weyl)?)
}

/// Fixed points of the sign module (`p = 2`): zero on top, `Z` with `γ = -1` below.
pub fn z_minus(shape: Shape) -> Result<MackeyFunctor, CatalogError> {
    if shape.p != 2 {
        return Err(CatalogError::Parse("the sign module needs p = 2".into()));
    }
    let mut g = IntMatrix::zeros(1, 1);
    g[(0, 0)] = -BigInt::one();
    fixed_point_module(shape, &g)
}

/// Orbits of the sign module (`p = 2`): the nonsplit partner of [`z_minus`],
/// with `Z/2` on top and transfer onto it.
pub fn z_minus_dotted(shape: Shape) -> Result<MackeyFunctor, CatalogError> {
    if shape.p != 2 {
        return Err(CatalogError::Parse("the sign module needs p = 2".into()));
    }
    let mut g = IntMatrix::zeros(1, 1);
    g[(0, 0)] = -BigInt::one();
    orbit_module(shape, &g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sh(p: u64, n: usize) -> Shape {
        Shape::new(p, n).unwrap()
    }

    #[test]
    fn form_z_one_zero() {
        let m = form_z(sh(3, 2), &[1, 0]).unwrap();
        assert_eq!(m.res[1].matrix, scalar(1));
        assert_eq!(m.res[0].matrix, scalar(3));
        assert_eq!(m.tr[1].matrix, scalar(3));
        assert_eq!(m.tr[0].matrix, scalar(1));
        assert!(m.is_cohomological());
    }

    #[test]
    fn b_one_zero() {
        let b = b_form(sh(3, 2), &[1, 0]).unwrap();
        let lv: Vec<String> = b.levels.iter().map(|g| g.to_string()).collect();
        assert_eq!(lv, ["0", "Z/3", "Z/3"]);
        assert!(b.res[1].is_iso());
        assert!(b.tr[1].is_zero());
        assert!(b.is_cohomological());
    }

    #[test]
    fn wrong_length_rejected() {
        assert_eq!(form_z(sh(2, 2), &[1]).unwrap_err(), CatalogError::WrongLength { expected: 2, got: 1 });
    }

    #[test]
    fn double_coset_violation_detected() {
        let s = sh(3, 1);
        let m = MackeyFunctor::new(s, vec![FgAbGroup::free(1); 2], vec![scalar(1)], vec![scalar(1)], vec![scalar(1); 2]);
        assert!(matches!(m, Err(MackeyError::Invalid(v)) if v.contains(&super::super::Violation::DoubleCoset { level: 0 })));
    }

    #[test]
    fn regular_module_fixed_points() {
        let s = sh(3, 1);
        let shift = IntMatrix::from_i64(3, 3, &[0, 0, 1, 1, 0, 0, 0, 1, 0]);
        let m = fixed_point_module(s, &shift).unwrap();
        assert_eq!(m.levels[1].to_string(), "Z");
        assert_eq!(m.levels[0].to_string(), "Z^3");
        assert!(m.is_cohomological());
        let o = orbit_module(s, &shift).unwrap();
        assert_eq!(o.levels[1].to_string(), "Z");
    }

    #[test]
    fn sign_module() {
        let m = z_minus(sh(2, 1)).unwrap();
        assert!(m.levels[1].is_zero());
        assert_eq!(m.weyl[0].matrix[(0, 0)], BigInt::from(-1));
        let m2 = z_minus(sh(2, 2)).unwrap();
        assert_eq!(m2.tr[0].matrix, scalar(2));
    }

    #[test]
    fn burnside_functor_is_not_cohomological() {
        // A for C_p: top Z^2 (basis [C_p/C_p], [C_p/e]), bottom Z.
        let s = sh(3, 1);
        let m = MackeyFunctor::new(
            s,
            vec![FgAbGroup::free(1), FgAbGroup::free(2)],
            vec![IntMatrix::from_i64(1, 2, &[1, 3])],
            vec![IntMatrix::from_i64(2, 1, &[0, 1])],
            vec![scalar(1), IntMatrix::identity(2)],
        )
        .unwrap();
        assert!(!m.is_cohomological());
    }
}
