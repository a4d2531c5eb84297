use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::GSet;
use crate::intlin::IntMatrix;
use crate::mackey::Shape;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EquivError {
    #[error("matrix does not commute with the action of γ")]
    NotEquivariant,
    #[error("matrix has the wrong size for the permutation modules")]
    Shape,
}

/// Basis morphism `Z[G/C_{p^source}] -> Z[G/C_{p^target}]`.
///
/// When `source <= target` the base point goes to `e_t`; otherwise it goes
/// to the sum of the `C_{p^source}`-orbit of `e_t`. Valid twists are
/// `0 <= t < p^{n - max(source, target)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpanWord {
    pub source: usize,
    pub target: usize,
    pub t: usize,
}

fn size(shape: Shape, k: usize) -> usize {
    shape.orbit_size(k) as usize
}

fn word_count(shape: Shape, a: usize, b: usize) -> usize {
    size(shape, a.max(b))
}

impl SpanWord {
    /// Dense matrix on the standard bases.
    pub fn matrix(&self, shape: Shape) -> IntMatrix {
        let mut coeffs = vec![BigInt::zero(); word_count(shape, self.source, self.target)];
        coeffs[self.t] = BigInt::one();
        dense_block(shape, self.source, self.target, &image(shape, self.source, self.target, &coeffs))
    }
}

pub fn span_basis(shape: Shape, source: usize, target: usize) -> Vec<SpanWord> {
    (0..word_count(shape, source, target)).map(|t| SpanWord { source, target, t }).collect()
}

/// Image of the base point under `Σ c_t · word_t`.
fn image(shape: Shape, a: usize, b: usize, coeffs: &[BigInt]) -> Vec<BigInt> {
    let sb = size(shape, b);
    if a <= b {
        coeffs.to_vec()
    } else {
        let sa = size(shape, a);
        (0..sb).map(|y| coeffs[y % sa].clone()).collect()
    }
}

/// Inverse of [`image`]; fails when the vector is not fixed by `C_{p^a}`.
fn decompose_image(shape: Shape, a: usize, b: usize, img: &[BigInt]) -> Option<Vec<BigInt>> {
    if a <= b {
        return Some(img.to_vec());
    }
    let sa = size(shape, a);
    if (0..img.len()).any(|y| img[y] != img[y % sa]) {
        return None;
    }
    Some(img[..sa].to_vec())
}

fn dense_block(shape: Shape, a: usize, b: usize, img: &[BigInt]) -> IntMatrix {
    let (sa, sb) = (size(shape, a), size(shape, b));
    let mut m = IntMatrix::zeros(sb, sa);
    for x in 0..sa {
        for y in 0..sb {
            m[(y, x)] = img[(y + sb - x % sb) % sb].clone();
        }
    }
    m
}

/// Coordinates of an equivariant map between single orbits in the span basis.
pub fn span_decompose(shape: Shape, source: usize, target: usize, m: &IntMatrix) -> Result<Vec<BigInt>, EquivError> {
    let (sa, sb) = (size(shape, source), size(shape, target));
    if m.rows() != sb || m.cols() != sa {
        return Err(EquivError::Shape);
    }
    let img = m.col(0);
    let coeffs = decompose_image(shape, source, target, &img).ok_or(EquivError::NotEquivariant)?;
    if dense_block(shape, source, target, &img) != *m {
        return Err(EquivError::NotEquivariant);
    }
    Ok(coeffs)
}

/// An equivariant map `Z[source] -> Z[target]`, stored per orbit pair as
/// coefficients in the span basis. Absent blocks are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivMatrix {
    pub source: GSet,
    pub target: GSet,
    /// `(target orbit, source orbit) -> coefficients`.
    pub blocks: BTreeMap<(usize, usize), Vec<BigInt>>,
}

impl EquivMatrix {
    pub fn zero(source: &GSet, target: &GSet) -> Self {
        assert_eq!(source.shape, target.shape);
        EquivMatrix { source: source.clone(), target: target.clone(), blocks: BTreeMap::new() }
    }

    pub fn identity(x: &GSet) -> Self {
        let mut m = Self::zero(x, x);
        for i in 0..x.num_orbits() {
            m.add_word(i, i, 0, &BigInt::one());
        }
        m
    }

    pub fn shape(&self) -> Shape {
        self.source.shape
    }

    /// A single basis word between single orbits.
    pub fn word(shape: Shape, w: SpanWord) -> Self {
        let mut m = Self::zero(&GSet::orbit(shape, w.source), &GSet::orbit(shape, w.target));
        m.add_word(0, 0, w.t, &BigInt::one());
        m
    }

    fn count(&self, j: usize, i: usize) -> usize {
        word_count(self.shape(), self.source.orbits[i], self.target.orbits[j])
    }

    /// Adds `c` times word `t` from source orbit `i` to target orbit `j`.
    pub fn add_word(&mut self, j: usize, i: usize, t: usize, c: &BigInt) {
        let n = self.count(j, i);
        let e = self.blocks.entry((j, i)).or_insert_with(|| vec![BigInt::zero(); n]);
        e[t % n] += c;
        if e.iter().all(Zero::is_zero) {
            self.blocks.remove(&(j, i));
        }
    }

    pub fn coeffs(&self, j: usize, i: usize) -> Option<&Vec<BigInt>> {
        self.blocks.get(&(j, i))
    }

    fn set_block(&mut self, j: usize, i: usize, coeffs: Vec<BigInt>) {
        if coeffs.iter().any(|c| !c.is_zero()) {
            self.blocks.insert((j, i), coeffs);
        } else {
            self.blocks.remove(&(j, i));
        }
    }

    /// Image of the base point of source orbit `i` inside target orbit `j`.
    pub fn block_image(&self, j: usize, i: usize) -> Vec<BigInt> {
        let (a, b) = (self.source.orbits[i], self.target.orbits[j]);
        match self.blocks.get(&(j, i)) {
            Some(c) => image(self.shape(), a, b, c),
            None => vec![BigInt::zero(); size(self.shape(), b)],
        }
    }

    fn from_images(source: &GSet, target: &GSet, images: BTreeMap<(usize, usize), Vec<BigInt>>) -> Self {
        let mut m = Self::zero(source, target);
        for ((j, i), img) in images {
            let c = decompose_image(source.shape, source.orbits[i], target.orbits[j], &img)
                .expect("image is not fixed by the stabilizer");
            m.set_block(j, i, c);
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn to_dense(&self) -> IntMatrix {
        let (so, to) = (self.source.offsets(), self.target.offsets());
        let mut m = IntMatrix::zeros(self.target.cardinality(), self.source.cardinality());
        for &(j, i) in self.blocks.keys() {
            let img = self.block_image(j, i);
            let b = dense_block(self.shape(), self.source.orbits[i], self.target.orbits[j], &img);
            m.set_block(to[j], so[i], &b);
        }
        m
    }

    pub fn from_dense(source: &GSet, target: &GSet, m: &IntMatrix) -> Result<Self, EquivError> {
        if m.rows() != target.cardinality() || m.cols() != source.cardinality() {
            return Err(EquivError::Shape);
        }
        let (so, to) = (source.offsets(), target.offsets());
        let mut out = Self::zero(source, target);
        for i in 0..source.num_orbits() {
            for j in 0..target.num_orbits() {
                let b = m.block(to[j], so[i], target.orbit_size(j), source.orbit_size(i));
                let c = span_decompose(source.shape, source.orbits[i], target.orbits[j], &b)?;
                out.set_block(j, i, c);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.source == other.source && self.target == other.target);
        let mut out = self.clone();
        for (&(j, i), c) in &other.blocks {
            for (t, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    out.add_word(j, i, t, x);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(&self.source, &self.target);
        for (&(j, i), v) in &self.blocks {
            out.set_block(j, i, v.iter().map(|x| x * c).collect());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigInt::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(other.target, self.source, "composition of non-composable maps");
        let mut images: BTreeMap<(usize, usize), Vec<BigInt>> = BTreeMap::new();
        let shape = self.shape();
        for &(j, i) in other.blocks.keys() {
            let ia = other.block_image(j, i);
            for l in 0..self.target.num_orbits() {
                if !self.blocks.contains_key(&(l, j)) {
                    continue;
                }
                let ib = self.block_image(l, j);
                let sz = size(shape, self.target.orbits[l]);
                let acc = images.entry((l, i)).or_insert_with(|| vec![BigInt::zero(); sz]);
                for (y, a) in ia.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (z, b) in ib.iter().enumerate() {
                        if !b.is_zero() {
                            acc[(z + y) % sz] += a * b;
                        }
                    }
                }
            }
        }
        Self::from_images(&other.source, &self.target, images)
    }

    /// Transpose with respect to the standard bases (again equivariant).
    pub fn transpose(&self) -> Self {
        let mut images = BTreeMap::new();
        for &(j, i) in self.blocks.keys() {
            let img = self.block_image(j, i);
            let sy = img.len();
            let sx = self.source.orbit_size(i);
            images.insert((i, j), (0..sx).map(|x| img[(sy - x % sy) % sy].clone()).collect());
        }
        Self::from_images(&self.target, &self.source, images)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (si, ti) = (self.source.num_orbits(), self.target.num_orbits());
        let mut out = Self::zero(&self.source.disjoint_union(&other.source), &self.target.disjoint_union(&other.target));
        out.blocks = self.blocks.clone();
        for (&(j, i), c) in &other.blocks {
            out.blocks.insert((j + ti, i + si), c.clone());
        }
        out
    }

    /// `self ⊗ other: Z[X × X'] -> Z[Y × Y']`, with products laid out by [`GSet::product`].
    pub fn tensor(&self, other: &Self) -> Self {
        let shape = self.shape();
        let src = self.source.product(&other.source);
        let tgt = self.target.product(&other.target);
        let mut images: BTreeMap<(usize, usize), Vec<BigInt>> = BTreeMap::new();
        let rows_a = group_blocks(self);
        let rows_b = group_blocks(other);
        for i in 0..self.source.num_orbits() {
            for i2 in 0..other.source.num_orbits() {
                let piece = *src.piece(i, i2);
                for c in 0..piece.count {
                    let so = src.first(i, i2) + c;
                    let (x, x2) = piece.base(c);
                    for (j, ia) in rows_a.get(&i).into_iter().flatten() {
                        let sy = ia.len();
                        for (j2, ib) in rows_b.get(&i2).into_iter().flatten() {
                            let sy2 = ib.len();
                            for (dy, a) in ia.iter().enumerate() {
                                if a.is_zero() {
                                    continue;
                                }
                                let y = (x + dy) % sy;
                                for (dy2, b) in ib.iter().enumerate() {
                                    if b.is_zero() {
                                        continue;
                                    }
                                    let y2 = (x2 + dy2) % sy2;
                                    let (to, pos) = tgt.locate(*j, y, *j2, y2);
                                    let sz = size(shape, tgt.set.orbits[to]);
                                    let acc = images.entry((to, so)).or_insert_with(|| vec![BigInt::zero(); sz]);
                                    acc[pos] += a * b;
                                }
                            }
                        }
                    }
                }
            }
        }
        Self::from_images(&src.set, &tgt.set, images)
    }

    /// Restricts to the given source and target orbits (in the given order).
    pub fn submatrix(&self, target_orbits: &[usize], source_orbits: &[usize]) -> Self {
        let s = GSet::new(self.shape(), source_orbits.iter().map(|&i| self.source.orbits[i]).collect());
        let t = GSet::new(self.shape(), target_orbits.iter().map(|&j| self.target.orbits[j]).collect());
        let mut out = Self::zero(&s, &t);
        for (nj, &j) in target_orbits.iter().enumerate() {
            for (ni, &i) in source_orbits.iter().enumerate() {
                if let Some(c) = self.blocks.get(&(j, i)) {
                    out.blocks.insert((nj, ni), c.clone());
                }
            }
        }
        out
    }
}

/// Block images grouped by source orbit.
fn group_blocks(m: &EquivMatrix) -> BTreeMap<usize, Vec<(usize, Vec<BigInt>)>> {
    let mut out: BTreeMap<usize, Vec<(usize, Vec<BigInt>)>> = BTreeMap::new();
    for &(j, i) in m.blocks.keys() {
        out.entry(i).or_default().push((j, m.block_image(j, i)));
    }
    out
}
