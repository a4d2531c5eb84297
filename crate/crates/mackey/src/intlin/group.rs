use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::scalar::modulo;
use super::snf::{column_echelon, kernel_basis, smith_rows, ColumnEchelon};

/// Finitely generated abelian group, stored in diagonal form
/// `Z/orders[0] + Z/orders[1] + ...` where an order of 0 means a free summand.
///
/// Every constructor that starts from an arbitrary presentation goes through
/// [`present`], which brings the relations to Smith form and records the change
/// of generators. Orders are kept in canonical order: torsion factors `> 1`
/// forming a divisibility chain, then zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FgAbGroup {
    orders: Vec<BigInt>,
}

/// Isomorphism invariant of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Canonical {
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl Canonical {
    pub fn is_zero(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }
}

impl fmt::Display for Canonical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

impl FgAbGroup {
    pub fn zero() -> Self {
        FgAbGroup { orders: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { orders: vec![BigInt::zero(); rank] }
    }

    pub fn cyclic(order: u64) -> Self {
        Self::from_orders(&[BigInt::from(order)])
    }

    /// Direct sum of cyclic groups of the given orders (0 = infinite), normalized.
    pub fn from_orders(orders: &[BigInt]) -> Self {
        let rel = IntMatrix::diagonal(orders);
        present(orders.len(), &rel).group
    }

    /// Uses `orders` as the diagonal presentation without renormalizing.
    /// Orders must be nonnegative; units are allowed but wasteful.
    pub fn diagonal_unchecked(orders: Vec<BigInt>) -> Self {
        debug_assert!(orders.iter().all(|o| !o.is_negative()));
        FgAbGroup { orders }
    }

    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    /// Relators as columns.
    pub fn relations(&self) -> IntMatrix {
        let cols: Vec<usize> = (0..self.orders.len()).filter(|&i| !self.orders[i].is_zero()).collect();
        IntMatrix::diagonal(&self.orders).select_cols(&cols)
    }

    pub fn canonical(&self) -> Canonical {
        let mut torsion: Vec<BigInt> = self.orders.iter().filter(|o| !o.is_zero() && !o.is_one()).cloned().collect();
        let free_rank = self.orders.iter().filter(|o| o.is_zero()).count();
        // orders may come from diagonal_unchecked, so re-run the divisibility normalization
        if torsion.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            torsion = super::snf::invariant_factors(&IntMatrix::diagonal(&torsion))
                .into_iter()
                .filter(|d| !d.is_one())
                .collect();
        }
        Canonical { torsion, free_rank }
    }

    pub fn is_zero(&self) -> bool {
        self.orders.iter().all(One::is_one)
    }

    pub fn is_torsion(&self) -> bool {
        self.orders.iter().all(|o| !o.is_zero())
    }

    pub fn is_free(&self) -> bool {
        self.orders.iter().all(|o| o.is_zero() || o.is_one())
    }

    pub fn free_rank(&self) -> usize {
        self.orders.iter().filter(|o| o.is_zero()).count()
    }

    /// Order of a finite group, `None` if infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.is_torsion() {
            Some(self.orders.iter().product())
        } else {
            None
        }
    }

    /// Reduces an element to its canonical representative.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        v.iter().zip(&self.orders).map(|(x, o)| modulo(x, o)).collect()
    }

    pub fn reduce_matrix(&self, m: &IntMatrix) -> IntMatrix {
        assert_eq!(m.rows(), self.orders.len(), "matrix rows must match generators");
        let mut out = m.clone();
        for i in 0..m.rows() {
            if self.orders[i].is_zero() {
                continue;
            }
            for j in 0..m.cols() {
                out[(i, j)] = modulo(&m[(i, j)], &self.orders[i]);
            }
        }
        out
    }

    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut orders = self.orders.clone();
        orders.extend(other.orders.iter().cloned());
        FgAbGroup { orders }
    }

    pub fn direct_sum_all<'a>(groups: impl IntoIterator<Item = &'a FgAbGroup>) -> Self {
        let mut orders = vec![];
        for g in groups {
            orders.extend(g.orders.iter().cloned());
        }
        FgAbGroup { orders }
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical())
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical())
    }
}

/// Result of normalizing a presentation `Z^g / relations`.
#[derive(Clone, Debug)]
pub struct Presented {
    pub group: FgAbGroup,
    /// New coordinates of each old generator: `group.ngens x g`.
    pub to_new: IntMatrix,
    /// Old-coordinate representative of each new generator: `g x group.ngens`.
    pub from_new: IntMatrix,
}

/// Normalizes the group with `ngens` generators and relators given by the columns of `relations`.
pub fn present(ngens: usize, relations: &IntMatrix) -> Presented {
    assert_eq!(relations.rows(), ngens, "relators must have one entry per generator");
    let rel = if relations.cols() == 0 { IntMatrix::zeros(ngens, 0) } else { relations.clone() };
    let s = smith_rows(&rel);
    let mut keep = vec![];
    let mut orders = vec![];
    for i in 0..ngens {
        let o = if i < s.rank() { s.factors[i].clone() } else { BigInt::zero() };
        if !o.is_one() {
            keep.push(i);
            orders.push(o);
        }
    }
    let group = FgAbGroup { orders };
    let to_new = group.reduce_matrix(&s.u.select_rows(&keep));
    let from_new = s.u_inv.select_cols(&keep);
    Presented { group, to_new, from_new }
}

/// Homomorphism between diagonal groups, acting on generator coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupHom {
    pub source: FgAbGroup,
    pub target: FgAbGroup,
    pub matrix: IntMatrix,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}: {:?}", self.source, self.target, self.matrix)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomError {
    #[error("matrix shape {0}x{1} does not match groups")]
    Shape(usize, usize),
    #[error("matrix does not respect the relations of the source")]
    NotWellDefined,
}

impl GroupHom {
    /// Builds a homomorphism, reducing entries and checking well-definedness.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self, HomError> {
        if matrix.rows() != target.num_generators() || matrix.cols() != source.num_generators() {
            return Err(HomError::Shape(matrix.rows(), matrix.cols()));
        }
        let matrix = target.reduce_matrix(&matrix);
        let h = GroupHom { source, target, matrix };
        if !h.is_well_defined() {
            return Err(HomError::NotWellDefined);
        }
        Ok(h)
    }

    /// Skips the well-definedness check; entries are still reduced.
    pub fn new_unchecked(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Self {
        let matrix = target.reduce_matrix(&matrix);
        GroupHom { source, target, matrix }
    }

    pub fn is_well_defined(&self) -> bool {
        (0..self.source.num_generators()).all(|j| {
            let o = &self.source.orders()[j];
            o.is_zero() || self.target.is_zero_element(&self.matrix.col(j).iter().map(|x| x * o).collect::<Vec<_>>())
        })
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), matrix: IntMatrix::identity(g.num_generators()) }
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.num_generators(), source.num_generators()),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupHom) -> GroupHom {
        assert_eq!(other.target, self.source, "composition of non-composable homomorphisms");
        GroupHom::new_unchecked(other.source.clone(), self.target.clone(), self.matrix.mul(&other.matrix))
    }

    pub fn add(&self, other: &GroupHom) -> GroupHom {
        GroupHom::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.add(&other.matrix))
    }

    pub fn sub(&self, other: &GroupHom) -> GroupHom {
        GroupHom::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.sub(&other.matrix))
    }

    pub fn scale(&self, c: &BigInt) -> GroupHom {
        GroupHom::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.scale(c))
    }

    pub fn pow(&self, e: u64) -> GroupHom {
        let mut acc = GroupHom::identity(&self.source);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base);
            }
        }
        acc
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.target.reduce(&self.matrix.mul_vec(v))
    }

    pub fn is_zero(&self) -> bool {
        self.target.reduce_matrix(&self.matrix).is_zero()
    }

    /// Equality as homomorphisms (entries compared modulo the target orders).
    pub fn equals(&self, other: &GroupHom) -> bool {
        self.source == other.source && self.target == other.target && self.sub(other).is_zero()
    }

    pub fn is_iso(&self) -> bool {
        kernel(self).group.is_zero() && cokernel(self).group.is_zero()
    }

    /// Block-diagonal sum of two homomorphisms.
    pub fn direct_sum(&self, other: &GroupHom) -> GroupHom {
        GroupHom {
            source: self.source.direct_sum(&other.source),
            target: self.target.direct_sum(&other.target),
            matrix: self.matrix.block_diag(&other.matrix),
        }
    }
}

/// Sublattice of `Z^n` with a basis and a coordinate solver.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub basis: IntMatrix,
    /// Echelon form of `basis`; coordinates are `w` applied to its solution.
    ech: ColumnEchelon<BigInt>,
}

impl Lattice {
    /// Lattice spanned by the columns of `gens` (which may be dependent).
    pub fn span(gens: &IntMatrix) -> Lattice {
        let ce = column_echelon(gens);
        let cols: Vec<usize> = ce.pivots.iter().map(|&(_, c)| c).collect();
        Lattice::from_basis(ce.e.select_cols(&cols))
    }

    /// Lattice whose given columns are already linearly independent.
    pub fn from_basis(basis: IntMatrix) -> Lattice {
        let ech = column_echelon(&basis);
        assert!(ech.free.is_empty(), "lattice basis is dependent");
        Lattice { basis, ech }
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    /// Coordinates of `x` in the basis, or `None` if `x` is not in the lattice.
    pub fn coords(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.ech.solve_e(x)?;
        Some(self.ech.w.mul_vec(&y))
    }

    pub fn coords_matrix(&self, m: &IntMatrix) -> Option<IntMatrix> {
        let cols: Option<Vec<Vec<BigInt>>> = (0..m.cols()).map(|j| self.coords(&m.col(j))).collect();
        Some(IntMatrix::from_cols(self.rank(), &cols?))
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.coords(x).is_some()
    }
}

/// Subgroup or subquotient of a diagonal group, with maps in and out.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub group: FgAbGroup,
    /// Ambient-coordinate representative of each generator of `group`.
    pub lift: IntMatrix,
    lattice: Lattice,
    to_new: IntMatrix,
}

impl Subquotient {
    /// `lattice / relations` where `relations` columns lie in the lattice.
    fn build(lattice: Lattice, relations: &IntMatrix) -> Subquotient {
        let rel = lattice.coords_matrix(relations).expect("relations must lie in the sublattice");
        let pres = present(lattice.rank(), &rel);
        let lift = lattice.basis.mul(&pres.from_new);
        Subquotient { group: pres.group, lift, lattice, to_new: pres.to_new }
    }

    /// Class of an ambient vector lying in the lattice.
    pub fn project(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = self.lattice.coords(x)?;
        Some(self.group.reduce(&self.to_new.mul_vec(&c)))
    }

    pub fn project_matrix(&self, m: &IntMatrix) -> Option<IntMatrix> {
        let c = self.lattice.coords_matrix(m)?;
        Some(self.group.reduce_matrix(&self.to_new.mul(&c)))
    }
}

fn relation_columns(g: &FgAbGroup) -> IntMatrix {
    let n = g.num_generators();
    let cols: Vec<Vec<BigInt>> = (0..n)
        .filter(|&i| !g.orders()[i].is_zero())
        .map(|i| {
            let mut v = vec![BigInt::zero(); n];
            v[i] = g.orders()[i].clone();
            v
        })
        .collect();
    IntMatrix::from_cols(n, &cols)
}

/// Lattice `{x in Z^a : f x = 0 in the target}`.
fn kernel_lattice(f: &GroupHom) -> Lattice {
    let a = f.source.num_generators();
    let tors: Vec<usize> = (0..f.target.num_generators()).filter(|&i| !f.target.orders()[i].is_zero()).collect();
    let mut big = f.matrix.clone();
    let mut neg_rel = IntMatrix::zeros(f.target.num_generators(), tors.len());
    for (c, &i) in tors.iter().enumerate() {
        neg_rel[(i, c)] = -f.target.orders()[i].clone();
    }
    big = big.hstack(&neg_rel);
    let k = kernel_basis(&big);
    let rows: Vec<usize> = (0..a).collect();
    Lattice::from_basis(k.select_rows(&rows))
}

/// Kernel of `f` as a subgroup of the source; `lift` is the inclusion.
pub fn kernel(f: &GroupHom) -> Subquotient {
    Subquotient::build(kernel_lattice(f), &relation_columns(&f.source))
}

/// Cokernel of `f`; `project` maps target elements to their classes.
pub fn cokernel(f: &GroupHom) -> Subquotient {
    let n = f.target.num_generators();
    let lattice = Lattice::from_basis(IntMatrix::identity(n));
    let rel = relation_columns(&f.target).hstack(&f.matrix);
    Subquotient::build(lattice, &rel)
}

/// Image of `f` as a subgroup of the target.
pub fn image(f: &GroupHom) -> Subquotient {
    let rel = relation_columns(&f.target);
    let gens = f.matrix.hstack(&rel);
    Subquotient::build(Lattice::span(&gens), &rel)
}

/// Homology `ker g / im f` at the middle group of `A -f-> B -g-> C`.
pub fn homology_at(f: &GroupHom, g: &GroupHom) -> Subquotient {
    assert_eq!(f.target, g.source, "homology of non-composable maps");
    let rel = relation_columns(&f.target).hstack(&f.matrix);
    Subquotient::build(kernel_lattice(g), &rel)
}

/// `span(gens) / span(relations)` inside `Z^m`; the relations must lie in the span of `gens`.
pub fn subquotient(gens: &IntMatrix, relations: &IntMatrix) -> Subquotient {
    Subquotient::build(Lattice::span(gens), relations)
}

/// Subgroup of `g` generated by the columns of `gens`.
pub fn subgroup(g: &FgAbGroup, gens: &IntMatrix) -> Subquotient {
    let rel = relation_columns(g);
    Subquotient::build(Lattice::span(&gens.hstack(&rel)), &rel)
}

/// Quotient of `g` by the subgroup generated by the columns of `gens`.
pub fn quotient(g: &FgAbGroup, gens: &IntMatrix) -> Subquotient {
    let n = g.num_generators();
    let rel = relation_columns(g).hstack(gens);
    Subquotient::build(Lattice::from_basis(IntMatrix::identity(n)), &rel)
}

/// `Hom(A, B)` with one representative homomorphism per generator.
pub fn hom_ab(a: &FgAbGroup, b: &FgAbGroup) -> (FgAbGroup, Vec<GroupHom>) {
    // Entry (i, j) sends generator j of A to b_i. It is well defined iff
    // ord(a_j) * x_ij = 0 in Z/ord(b_i); the group of such x is cyclic.
    let mut orders = vec![];
    let mut reps = vec![];
    for i in 0..b.num_generators() {
        for j in 0..a.num_generators() {
            let (oa, ob) = (&a.orders()[j], &b.orders()[i]);
            let (step, order) = match (oa.is_zero(), ob.is_zero()) {
                (_, true) if !oa.is_zero() => continue,
                (true, true) => (BigInt::one(), BigInt::zero()),
                (true, false) => (BigInt::one(), ob.clone()),
                (false, _) => {
                    let g = oa.gcd(ob);
                    (ob / &g, g)
                }
            };
            if order.is_one() {
                continue;
            }
            let mut m = IntMatrix::zeros(b.num_generators(), a.num_generators());
            m[(i, j)] = step;
            reps.push(GroupHom::new_unchecked(a.clone(), b.clone(), m));
            orders.push(order);
        }
    }
    let pres = present(orders.len(), &IntMatrix::diagonal(&orders));
    let reps = (0..pres.group.num_generators())
        .map(|k| {
            let mut acc = GroupHom::zero(a, b);
            for (l, r) in reps.iter().enumerate() {
                let c = &pres.from_new[(l, k)];
                if !c.is_zero() {
                    acc = acc.add(&r.scale(c));
                }
            }
            acc
        })
        .collect();
    (pres.group, reps)
}

/// `Ext^1(A, B)` from the presentation of `A`: cokernel of `Hom(Z^g, B) -> Hom(rel, B)`.
pub fn ext1_ab(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    // Diagonal presentations split the computation into Ext(Z/m, B) = B/mB.
    let mut orders = vec![];
    for oa in a.orders() {
        if oa.is_zero() {
            continue;
        }
        for ob in b.orders() {
            orders.push(if ob.is_zero() { oa.clone() } else { oa.gcd(ob) });
        }
    }
    FgAbGroup::from_orders(&orders)
}

/// Tensor product with the generator-pair map: pair `(i, j)` sits at index `i * |B| + j`
/// of the unnormalized presentation, and `to_new`/`from_new` translate.
pub fn tensor_ab(a: &FgAbGroup, b: &FgAbGroup) -> Presented {
    let mut orders = vec![];
    for oa in a.orders() {
        for ob in b.orders() {
            orders.push(oa.gcd(ob));
        }
    }
    present(orders.len(), &IntMatrix::diagonal(&orders))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(orders: &[u64]) -> FgAbGroup {
        FgAbGroup::from_orders(&orders.iter().map(|&o| BigInt::from(o)).collect::<Vec<_>>())
    }

    #[test]
    fn normalization_merges_coprime() {
        let x = g(&[2, 3, 0]);
        assert_eq!(x.canonical().torsion, vec![BigInt::from(6)]);
        assert_eq!(x.free_rank(), 1);
    }

    #[test]
    fn hom_examples() {
        assert!(hom_ab(&g(&[2]), &g(&[0])).0.is_zero());
        assert_eq!(hom_ab(&g(&[0]), &g(&[4, 0])).0.canonical(), g(&[4, 0]).canonical());
        assert_eq!(hom_ab(&g(&[4]), &g(&[6])).0.canonical(), g(&[2]).canonical());
        for h in hom_ab(&g(&[4]), &g(&[6])).1 {
            assert!(h.is_well_defined());
        }
    }

    #[test]
    fn ext_and_tensor_examples() {
        assert!(ext1_ab(&g(&[0]), &g(&[5])).is_zero());
        assert_eq!(ext1_ab(&g(&[3]), &g(&[0])).canonical(), g(&[3]).canonical());
        assert_eq!(ext1_ab(&g(&[4]), &g(&[6])).canonical(), g(&[2]).canonical());
        assert!(tensor_ab(&g(&[2]), &g(&[3])).group.is_zero());
        assert_eq!(tensor_ab(&g(&[4]), &g(&[6])).group.canonical(), g(&[2]).canonical());
        assert_eq!(tensor_ab(&g(&[0]), &g(&[4, 0])).group.canonical(), g(&[4, 0]).canonical());
    }

    #[test]
    fn kernel_cokernel_of_multiplication() {
        let z4 = g(&[4]);
        let two = GroupHom::new(z4.clone(), z4.clone(), IntMatrix::from_i64(1, 1, &[2])).unwrap();
        assert_eq!(kernel(&two).group.canonical(), g(&[2]).canonical());
        assert_eq!(cokernel(&two).group.canonical(), g(&[2]).canonical());
        assert_eq!(image(&two).group.canonical(), g(&[2]).canonical());
        let z = g(&[0]);
        let to_z2 = GroupHom::new(z.clone(), g(&[2]), IntMatrix::from_i64(1, 1, &[1])).unwrap();
        let k = kernel(&to_z2);
        assert_eq!(k.group.free_rank(), 1);
        assert_eq!(k.lift[(0, 0)].abs(), BigInt::from(2));
    }

    #[test]
    fn ill_defined_rejected() {
        let r = GroupHom::new(g(&[2]), g(&[0]), IntMatrix::from_i64(1, 1, &[1]));
        assert_eq!(r.unwrap_err(), HomError::NotWellDefined);
    }

    #[test]
    fn subquotient_projection() {
        // Z^2 / <(2, 0)>, then project (3, 5)
        let q = quotient(&g(&[0, 0]), &IntMatrix::from_i64(2, 1, &[2, 0]));
        assert_eq!(q.group.canonical(), g(&[2, 0]).canonical());
        let x = q.project(&[BigInt::from(2), BigInt::from(0)]).unwrap();
        assert!(q.group.is_zero_element(&x));
    }
}
