//! Finite `C_{p^n}`-sets, equivariant maps of permutation modules in the span
//! basis, and the evaluation of cohomological Mackey functors on them.
//!
//! The orbit `G/C_{p^k}` is identified with `Z/p^{n-k}`, with `γ` acting by `+1`.

mod equiv;
mod eval;

pub(crate) use eval::{contravariant_maps, covariant_maps};

pub use equiv::{span_basis, span_decompose, EquivMatrix, EquivError, SpanWord};
pub use eval::{
    classifying_map, eval_perm, eval_word, fixed_point_functor, lift, lift_contravariant, lift_covariant, perm_functor,
    value_group,
};

use crate::mackey::Shape;

/// A finite `G`-set, recorded as the list of its orbit levels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GSet {
    pub shape: Shape,
    pub orbits: Vec<usize>,
}

impl GSet {
    pub fn new(shape: Shape, orbits: Vec<usize>) -> Self {
        assert!(orbits.iter().all(|&k| k <= shape.n), "orbit level out of range");
        GSet { shape, orbits }
    }

    pub fn empty(shape: Shape) -> Self {
        GSet { shape, orbits: vec![] }
    }

    /// The single orbit `G/C_{p^k}`.
    pub fn orbit(shape: Shape, k: usize) -> Self {
        Self::new(shape, vec![k])
    }

    pub fn point(shape: Shape) -> Self {
        Self::orbit(shape, shape.n)
    }

    pub fn free(shape: Shape) -> Self {
        Self::orbit(shape, 0)
    }

    pub fn num_orbits(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbit_size(&self, i: usize) -> usize {
        self.shape.orbit_size(self.orbits[i]) as usize
    }

    pub fn cardinality(&self) -> usize {
        (0..self.orbits.len()).map(|i| self.orbit_size(i)).sum()
    }

    /// Offset of each orbit in the enumeration of all points.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        (0..self.orbits.len())
            .map(|i| {
                let o = acc;
                acc += self.orbit_size(i);
                o
            })
            .collect()
    }

    pub fn disjoint_union(&self, other: &GSet) -> GSet {
        assert_eq!(self.shape, other.shape);
        let mut orbits = self.orbits.clone();
        orbits.extend(&other.orbits);
        GSet { shape: self.shape, orbits }
    }

    /// `self × other`, with orbits listed by source pair `(i, j)` and then by
    /// the orbit index of [`OrbitProduct`].
    pub fn product(&self, other: &GSet) -> Product {
        assert_eq!(self.shape, other.shape);
        let mut orbits = vec![];
        let mut first = vec![vec![0; other.num_orbits()]; self.num_orbits()];
        let mut pieces = vec![vec![]; self.num_orbits()];
        for (i, &a) in self.orbits.iter().enumerate() {
            for (j, &b) in other.orbits.iter().enumerate() {
                let op = OrbitProduct::new(self.shape, a, b);
                first[i][j] = orbits.len();
                orbits.extend(std::iter::repeat(op.level).take(op.count));
                pieces[i].push(op);
            }
        }
        Product { set: GSet { shape: self.shape, orbits }, first, pieces }
    }
}

/// Decomposition of `G/C_{p^a} × G/C_{p^b}` into orbits.
///
/// The pair `(x, y)` lies in orbit `c = (y - x) mod p^{n - max(a, b)}`; its
/// position in that orbit is the coordinate of the factor with the smaller
/// level. The orbit base points are `(0, c)` when `a <= b` and
/// `(-c, 0)` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitProduct {
    pub shape: Shape,
    pub a: usize,
    pub b: usize,
    /// Level of every orbit in the product.
    pub level: usize,
    /// Number of orbits.
    pub count: usize,
}

impl OrbitProduct {
    pub fn new(shape: Shape, a: usize, b: usize) -> Self {
        OrbitProduct { shape, a, b, level: a.min(b), count: shape.orbit_size(a.max(b)) as usize }
    }

    fn size(&self, k: usize) -> i64 {
        self.shape.orbit_size(k) as i64
    }

    /// Orbit index and position of the pair `(x, y)`.
    pub fn locate(&self, x: usize, y: usize) -> (usize, usize) {
        let c = (y as i64 - x as i64).rem_euclid(self.count as i64) as usize;
        (c, if self.a <= self.b { x } else { y })
    }

    /// Base point of orbit `c`.
    pub fn base(&self, c: usize) -> (usize, usize) {
        if self.a <= self.b {
            (0, c)
        } else {
            ((-(c as i64)).rem_euclid(self.size(self.a)) as usize, 0)
        }
    }

    /// The point at `pos` of orbit `c`.
    pub fn point(&self, c: usize, pos: usize) -> (usize, usize) {
        let (x, y) = self.base(c);
        let (sa, sb) = (self.size(self.a), self.size(self.b));
        (((x + pos) as i64 % sa) as usize, ((y + pos) as i64 % sb) as usize)
    }
}

/// A product of two `G`-sets with its orbit bookkeeping.
#[derive(Clone, Debug)]
pub struct Product {
    pub set: GSet,
    first: Vec<Vec<usize>>,
    pieces: Vec<Vec<OrbitProduct>>,
}

impl Product {
    /// Product orbit index and position of the point `(x in orbit i, y in orbit j)`.
    pub fn locate(&self, i: usize, x: usize, j: usize, y: usize) -> (usize, usize) {
        let (c, pos) = self.pieces[i][j].locate(x, y);
        (self.first[i][j] + c, pos)
    }

    pub fn piece(&self, i: usize, j: usize) -> &OrbitProduct {
        &self.pieces[i][j]
    }

    pub fn first(&self, i: usize, j: usize) -> usize {
        self.first[i][j]
    }
}
