use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::burnside::{EquivMatrix, GSet, SpanWord};
use crate::homalg::ProjComplex;
use crate::intlin::{AbComplex, FgAbGroup, GroupHom};
use crate::mackey::{constant_z, GradedMackey, MackeyError, Shape};

use super::SphereError;

/// A cellular chain complex of permutation modules; `complex.sets[i]` sits in
/// degree `lo + i`.
#[derive(Clone, Debug)]
pub struct CellComplex {
    pub lo: i64,
    pub complex: ProjComplex,
}

impl CellComplex {
    pub fn shape(&self) -> Shape {
        self.complex.shape
    }

    /// `S^0`: one fixed cell in degree 0.
    pub fn point(shape: Shape) -> Self {
        CellComplex { lo: 0, complex: ProjComplex { shape, sets: vec![GSet::point(shape)], diffs: vec![] } }
    }

    pub fn shift(mut self, k: i64) -> Self {
        self.lo += k;
        self
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.complex.sets.len() as i64 - 1
    }

    /// Number of orbits in each degree.
    pub fn orbit_counts(&self) -> Vec<usize> {
        self.complex.sets.iter().map(GSet::num_orbits).collect()
    }

    pub fn is_complex(&self) -> bool {
        self.complex.is_complex()
    }

    /// Cells reflected to negated degrees with transposed differentials.
    pub fn dualize(&self) -> Self {
        let c = &self.complex;
        let sets = c.sets.iter().rev().cloned().collect();
        let diffs = c.diffs.iter().rev().map(EquivMatrix::transpose).collect();
        CellComplex { lo: -self.hi(), complex: ProjComplex { shape: c.shape, sets, diffs } }
    }

    /// Tensor product with `d(x ⊗ y) = dx ⊗ y + (-1)^{|x|} x ⊗ dy`.
    pub fn smash(&self, other: &Self) -> Self {
        let shape = self.shape();
        assert_eq!(shape, other.shape());
        let (xs, ys) = (&self.complex.sets, &other.complex.sets);
        let len = xs.len() + ys.len() - 1;
        // pieces[s] lists (i, j, first orbit) for X_i × Y_j in total position s
        let mut sets = vec![];
        let mut pieces: Vec<BTreeMap<(usize, usize), usize>> = vec![];
        for s in 0..len {
            let mut orbits = vec![];
            let mut at = BTreeMap::new();
            for i in 0..xs.len() {
                if s < i || s - i >= ys.len() {
                    continue;
                }
                at.insert((i, s - i), orbits.len());
                orbits.extend(xs[i].product(&ys[s - i]).set.orbits);
            }
            sets.push(GSet::new(shape, orbits));
            pieces.push(at);
        }
        let mut diffs = vec![];
        for s in 0..len - 1 {
            let mut d = EquivMatrix::zero(&sets[s + 1], &sets[s]);
            for (&(i, j), &col) in &pieces[s + 1] {
                if i > 0 {
                    let b = self.complex.diffs[i - 1].tensor(&EquivMatrix::identity(&ys[j]));
                    place(&mut d, pieces[s][&(i - 1, j)], col, &b);
                }
                if j > 0 {
                    let mut b = EquivMatrix::identity(&xs[i]).tensor(&other.complex.diffs[j - 1]);
                    if (self.lo + i as i64) % 2 != 0 {
                        b = b.neg();
                    }
                    place(&mut d, pieces[s][&(i, j - 1)], col, &b);
                }
            }
            diffs.push(d);
        }
        CellComplex { lo: self.lo + other.lo, complex: ProjComplex { shape, sets, diffs } }
    }

    /// Cancels pairs of same-level orbits joined by a unit `±γ^t`, then drops
    /// empty end terms. The result is chain homotopy equivalent.
    pub fn reduced(&self) -> Self {
        let mut w = Work::new(self);
        w.eliminate();
        w.finish()
    }

    /// Bredon homology with constant `Z` coefficients.
    pub fn homology(&self) -> Result<GradedMackey, MackeyError> {
        let z = constant_z(self.shape());
        let mut c = self.complex.lifted(&z)?;
        c.lo = self.lo;
        Ok(c.homology())
    }

    /// Checks that the underlying chains compute `Z` in degree `dim` only.
    pub fn check_underlying(&self, dim: i64) -> Result<(), SphereError> {
        let c = &self.complex;
        let shape = c.shape;
        let terms: Vec<FgAbGroup> = c.sets.iter().map(|x| FgAbGroup::free(x.cardinality())).collect();
        let diffs = c
            .diffs
            .iter()
            .enumerate()
            .map(|(i, d)| GroupHom::new_unchecked(terms[i + 1].clone(), terms[i].clone(), d.to_dense()))
            .collect();
        let ab = AbComplex::new(self.lo, terms, diffs).map_err(|_| SphereError::NotAComplex)?;
        let mut found_top = false;
        for h in ab.homology() {
            let g = h.group().to_string();
            let want = if h.degree == dim { "Z" } else { "0" };
            if g != want {
                return Err(SphereError::Underlying { degree: h.degree, found: g, shape });
            }
            found_top |= h.degree == dim;
        }
        if !found_top {
            return Err(SphereError::Underlying { degree: dim, found: "0".into(), shape });
        }
        Ok(())
    }
}

/// Adds `b` into `d` with its orbits moved to the given offsets.
fn place(d: &mut EquivMatrix, row: usize, col: usize, b: &EquivMatrix) {
    for (&(j, i), c) in &b.blocks {
        for (t, x) in c.iter().enumerate() {
            if !x.is_zero() {
                d.add_word(row + j, col + i, t, x);
            }
        }
    }
}

fn single(shape: Shape, a: usize, b: usize, c: &[BigInt]) -> EquivMatrix {
    let mut m = EquivMatrix::zero(&GSet::orbit(shape, a), &GSet::orbit(shape, b));
    for (t, x) in c.iter().enumerate() {
        if !x.is_zero() {
            m.add_word(0, 0, t, x);
        }
    }
    m
}

/// Mutable sparse form of a complex used by [`CellComplex::reduced`].
struct Work {
    shape: Shape,
    lo: i64,
    levels: Vec<Vec<usize>>,
    alive: Vec<Vec<bool>>,
    /// `d[k]`: `(row in term k, column in term k + 1) -> span coefficients`.
    d: Vec<BTreeMap<(usize, usize), Vec<BigInt>>>,
    /// `by_row[k][j]`: columns with a nonzero entry in row `j` of `d[k]`.
    by_row: Vec<Vec<BTreeSet<usize>>>,
    by_col: Vec<Vec<BTreeSet<usize>>>,
}

impl Work {
    fn new(c: &CellComplex) -> Self {
        let cx = &c.complex;
        let levels: Vec<Vec<usize>> = cx.sets.iter().map(|x| x.orbits.clone()).collect();
        let alive = levels.iter().map(|l| vec![true; l.len()]).collect();
        let mut w = Work {
            shape: cx.shape,
            lo: c.lo,
            levels: levels.clone(),
            alive,
            d: vec![],
            by_row: vec![],
            by_col: vec![],
        };
        for (k, m) in cx.diffs.iter().enumerate() {
            w.d.push(m.blocks.clone());
            let mut rows = vec![BTreeSet::new(); levels[k].len()];
            let mut cols = vec![BTreeSet::new(); levels[k + 1].len()];
            for &(j, i) in m.blocks.keys() {
                rows[j].insert(i);
                cols[i].insert(j);
            }
            w.by_row.push(rows);
            w.by_col.push(cols);
        }
        w
    }

    fn unit(&self, k: usize, j: usize, i: usize) -> Option<(usize, BigInt)> {
        if self.levels[k][j] != self.levels[k + 1][i] {
            return None;
        }
        let c = self.d[k].get(&(j, i))?;
        let mut nz = c.iter().enumerate().filter(|(_, x)| !x.is_zero());
        let (t, x) = nz.next()?;
        if nz.next().is_some() || !x.abs().is_one() {
            return None;
        }
        Some((t, x.clone()))
    }

    fn set(&mut self, k: usize, j: usize, i: usize, c: Vec<BigInt>) {
        if c.iter().all(Zero::is_zero) {
            if self.d[k].remove(&(j, i)).is_some() {
                self.by_row[k][j].remove(&i);
                self.by_col[k][i].remove(&j);
            }
        } else {
            self.d[k].insert((j, i), c);
            self.by_row[k][j].insert(i);
            self.by_col[k][i].insert(j);
        }
    }

    fn remove_row(&mut self, k: usize, j: usize) {
        for i in std::mem::take(&mut self.by_row[k][j]) {
            self.d[k].remove(&(j, i));
            self.by_col[k][i].remove(&j);
        }
    }

    fn remove_col(&mut self, k: usize, i: usize) {
        for j in std::mem::take(&mut self.by_col[k][i]) {
            self.d[k].remove(&(j, i));
            self.by_row[k][j].remove(&i);
        }
    }

    /// Gaussian elimination of the unit entry `(a, b)` of `d[k]`.
    fn cancel(&mut self, k: usize, a: usize, b: usize, t: usize, sign: BigInt) {
        let shape = self.shape;
        let la = self.levels[k][a];
        let size = shape.orbit_size(la) as usize;
        let inv = {
            let mut c = vec![BigInt::zero(); size];
            c[(size - t) % size] = sign;
            single(shape, la, la, &c)
        };
        let row: Vec<usize> = self.by_row[k][a].iter().copied().filter(|&i| i != b).collect();
        let col: Vec<usize> = self.by_col[k][b].iter().copied().filter(|&j| j != a).collect();
        let right: Vec<(usize, EquivMatrix)> = row
            .iter()
            .map(|&i| {
                let m = single(shape, self.levels[k + 1][i], la, &self.d[k][&(a, i)]);
                (i, inv.compose(&m))
            })
            .collect();
        for &j in &col {
            let lj = self.levels[k][j];
            let left = single(shape, la, lj, &self.d[k][&(j, b)]);
            for (i, r) in &right {
                let li = self.levels[k + 1][*i];
                let corr = left.compose(r);
                let Some(cc) = corr.coeffs(0, 0) else { continue };
                let mut cur = self.d[k]
                    .get(&(j, *i))
                    .cloned()
                    .unwrap_or_else(|| vec![BigInt::zero(); shape.orbit_size(lj.max(li)) as usize]);
                for (x, y) in cur.iter_mut().zip(cc) {
                    *x -= y;
                }
                self.set(k, j, *i, cur);
            }
        }
        self.remove_row(k, a);
        self.remove_col(k, b);
        if k + 1 < self.d.len() {
            self.remove_row(k + 1, b);
        }
        if k > 0 {
            self.remove_col(k - 1, a);
        }
        self.alive[k][a] = false;
        self.alive[k + 1][b] = false;
    }

    fn eliminate(&mut self) {
        loop {
            let mut best: Option<(usize, usize, usize, usize, BigInt, usize)> = None;
            for k in 0..self.d.len() {
                for &(j, i) in self.d[k].keys() {
                    if let Some((t, s)) = self.unit(k, j, i) {
                        let cost = self.by_row[k][j].len() * self.by_col[k][i].len();
                        if best.as_ref().map_or(true, |b| cost < b.5) {
                            best = Some((k, j, i, t, s, cost));
                            if cost == 1 {
                                break;
                            }
                        }
                    }
                }
            }
            match best {
                Some((k, j, i, t, s, _)) => self.cancel(k, j, i, t, s),
                None => break,
            }
        }
    }

    fn finish(self) -> CellComplex {
        let shape = self.shape;
        let keep: Vec<Vec<usize>> =
            self.alive.iter().map(|a| (0..a.len()).filter(|&i| a[i]).collect()).collect();
        let index: Vec<BTreeMap<usize, usize>> =
            keep.iter().map(|v| v.iter().enumerate().map(|(n, &o)| (o, n)).collect()).collect();
        let sets: Vec<GSet> = keep
            .iter()
            .enumerate()
            .map(|(k, v)| GSet::new(shape, v.iter().map(|&o| self.levels[k][o]).collect()))
            .collect();
        let mut diffs = vec![];
        for (k, m) in self.d.iter().enumerate() {
            let mut e = EquivMatrix::zero(&sets[k + 1], &sets[k]);
            for (&(j, i), c) in m {
                e.blocks.insert((index[k][&j], index[k + 1][&i]), c.clone());
            }
            diffs.push(e);
        }
        let first = sets.iter().position(|x| x.num_orbits() > 0);
        let last = sets.iter().rposition(|x| x.num_orbits() > 0);
        match (first, last) {
            (Some(f), Some(l)) => CellComplex {
                lo: self.lo + f as i64,
                complex: ProjComplex { shape, sets: sets[f..=l].to_vec(), diffs: diffs[f..l].to_vec() },
            },
            _ => CellComplex {
                lo: 0,
                complex: ProjComplex { shape, sets: vec![GSet::empty(shape)], diffs: vec![] },
            },
        }
    }
}

fn word(shape: Shape, source: usize, target: usize, t: usize) -> EquivMatrix {
    EquivMatrix::word(shape, SpanWord { source, target, t })
}

/// Cells of `S^{λ(r p^k)}`: a fixed 0-cell and two free `G/C_{p^k}`-cells,
/// `d_1` the fold map and `d_2 = 1 - γ^r`.
pub fn chain_lambda(shape: Shape, k: usize, r: u64) -> Result<CellComplex, SphereError> {
    if k >= shape.n {
        return Err(SphereError::Level(k));
    }
    if r % shape.p == 0 {
        return Err(SphereError::Twist(r));
    }
    let orbit = GSet::orbit(shape, k);
    let size = shape.orbit_size(k);
    let d1 = word(shape, k, shape.n, 0);
    let d2 = EquivMatrix::identity(&orbit).sub(&word(shape, k, k, (r % size) as usize));
    Ok(CellComplex {
        lo: 0,
        complex: ProjComplex { shape, sets: vec![GSet::point(shape), orbit.clone(), orbit], diffs: vec![d1, d2] },
    })
}

/// Cells of `S^σ` for `p = 2`: the cofibre of the fold `G/C_{2^{n-1}} -> *`.
pub fn chain_sigma(shape: Shape) -> Result<CellComplex, SphereError> {
    if shape.p != 2 {
        return Err(SphereError::NoSign(shape.p));
    }
    let k = shape.n - 1;
    Ok(CellComplex {
        lo: 0,
        complex: ProjComplex {
            shape,
            sets: vec![GSet::point(shape), GSet::orbit(shape, k)],
            diffs: vec![word(shape, k, shape.n, 0)],
        },
    })
}

/// The one-pair-of-cells-per-summand model of an actual representation:
/// cells are attached in order of decreasing stabilizer.
pub fn reduced_chain(v: &super::RepLabel) -> Result<CellComplex, SphereError> {
    if !v.is_actual() {
        return Err(SphereError::NotActual(v.to_string()));
    }
    let shape = v.shape;
    let n = shape.n;
    let mut cells = vec![n];
    let mut diffs: Vec<EquivMatrix> = vec![];
    let one = BigInt::one();
    let x = |k: usize, c: &BigInt| {
        let mut m = EquivMatrix::identity(&GSet::orbit(shape, k));
        m.add_word(0, 0, 1, c);
        m
    };
    for j in 1..=v.s.max(0) as usize {
        let k = n - 1;
        diffs.push(match j {
            1 => word(shape, k, n, 0),
            _ if j % 2 == 0 => x(k, &-&one),
            _ => x(k, &one),
        });
        cells.push(k);
    }
    let eps = if v.s % 2 == 0 { one.clone() } else { -one.clone() };
    for k in (0..n).rev() {
        for _ in 0..v.a[k] {
            let prev = *cells.last().expect("base cell");
            let m = shape.orbit_size(prev) as usize;
            let mut norm = EquivMatrix::zero(&GSet::orbit(shape, k), &GSet::orbit(shape, prev));
            let mut c = one.clone();
            for t in 0..m {
                norm.add_word(0, 0, t, &c);
                c = &c * &eps;
            }
            diffs.push(norm);
            let r = (v.twist[k] % shape.orbit_size(k)) as usize;
            let mut d2 = EquivMatrix::identity(&GSet::orbit(shape, k));
            d2.add_word(0, 0, r, &-&eps);
            diffs.push(d2);
            cells.push(k);
            cells.push(k);
        }
    }
    let sets = cells.into_iter().map(|k| GSet::orbit(shape, k)).collect();
    Ok(CellComplex { lo: v.t, complex: ProjComplex { shape, sets, diffs } })
}

/// Incremental smash of the building blocks of `V`, reduced after each step.
pub fn sphere_chain(v: &super::RepLabel) -> Result<CellComplex, SphereError> {
    let shape = v.shape;
    let mut blocks: Vec<(CellComplex, i64)> = vec![];
    if v.s != 0 {
        blocks.push((chain_sigma(shape)?, v.s));
    }
    for k in (0..shape.n).rev() {
        if v.a[k] != 0 {
            blocks.push((chain_lambda(shape, k, v.twist[k])?, v.a[k]));
        }
    }
    let mut acc = CellComplex::point(shape).shift(v.t);
    // positive summands first keeps the intermediate complexes small
    for (b, c) in blocks.iter().filter(|(_, c)| *c > 0).chain(blocks.iter().filter(|(_, c)| *c < 0)) {
        let b = if *c > 0 { b.clone() } else { b.dualize() };
        for _ in 0..c.abs() {
            acc = acc.smash(&b).reduced();
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sh(p: u64, n: usize) -> Shape {
        Shape::new(p, n).unwrap()
    }

    #[test]
    fn blocks_are_complexes() {
        for (p, n) in [(2, 1), (3, 2), (2, 3)] {
            let s = sh(p, n);
            for k in 0..n {
                let c = chain_lambda(s, k, 1).unwrap();
                assert!(c.is_complex());
                c.check_underlying(2).unwrap();
                c.dualize().check_underlying(-2).unwrap();
            }
        }
        let c = chain_sigma(sh(2, 2)).unwrap();
        c.check_underlying(1).unwrap();
    }

    #[test]
    fn bad_blocks_rejected() {
        assert!(matches!(chain_lambda(sh(3, 1), 0, 6), Err(SphereError::Twist(6))));
        assert!(matches!(chain_sigma(sh(3, 1)), Err(SphereError::NoSign(3))));
        assert!(matches!(chain_lambda(sh(3, 1), 1, 1), Err(SphereError::Level(1))));
    }

    #[test]
    fn dualize_twice_is_identity() {
        let c = chain_lambda(sh(3, 2), 0, 2).unwrap();
        let dd = c.dualize().dualize();
        assert_eq!(dd.lo, c.lo);
        assert_eq!(dd.complex.sets, c.complex.sets);
        assert_eq!(dd.complex.diffs, c.complex.diffs);
    }

    #[test]
    fn smash_is_a_complex_and_reduces() {
        let s = sh(3, 2);
        let a = chain_lambda(s, 0, 1).unwrap();
        let b = chain_lambda(s, 1, 1).unwrap().dualize();
        let c = a.smash(&b);
        assert!(c.is_complex());
        c.check_underlying(0).unwrap();
        let r = c.reduced();
        assert!(r.is_complex());
        r.check_underlying(0).unwrap();
        assert!(r.orbit_counts().iter().sum::<usize>() < c.orbit_counts().iter().sum::<usize>());
    }

    #[test]
    fn lambda_minus_lambda_reduces_to_a_point() {
        let s = sh(5, 1);
        let a = chain_lambda(s, 0, 1).unwrap();
        let r = a.smash(&a.dualize()).reduced();
        assert_eq!(r.orbit_counts(), vec![1]);
        assert_eq!(r.lo, 0);
    }
}
