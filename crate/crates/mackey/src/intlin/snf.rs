use num_bigint::BigInt;
use num_traits::Zero;

use super::matrix::{IntMatrix, Matrix};
use super::scalar::{self, Overflow, Scalar};

/// `u * a * v = d` with `u`, `v` unimodular and `d` diagonal in divisibility order.
///
/// `u_inv` is carried along because presentations need to map the new
/// generators back to the old ones.
#[derive(Clone)]
pub struct SmithForm<T> {
    pub u: Matrix<T>,
    pub u_inv: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
    /// Nonzero diagonal entries `d_1 | d_2 | ...`, all positive.
    pub factors: Vec<T>,
}

impl<T: Scalar> SmithForm<T> {
    pub fn compute(a: &Matrix<T>) -> Result<Self, Overflow> {
        let mut e = Eliminator::new(a.clone(), true);
        e.run()?;
        let factors = diag_factors(&e.d);
        Ok(SmithForm { u: e.u.unwrap(), u_inv: e.u_inv.unwrap(), d: e.d, v: e.v.unwrap(), factors })
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    fn to_bigint(&self) -> SmithForm<BigInt> {
        SmithForm {
            u: self.u.to_bigint(),
            u_inv: self.u_inv.to_bigint(),
            d: self.d.to_bigint(),
            v: self.v.to_bigint(),
            factors: self.factors.iter().map(Scalar::to_bigint).collect(),
        }
    }
}

impl<T: Scalar> std::fmt::Debug for SmithForm<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SmithForm").field("d", &self.d).field("factors", &self.factors).finish()
    }
}

fn diag_factors<T: Scalar>(d: &Matrix<T>) -> Vec<T> {
    (0..d.rows().min(d.cols())).map(|i| d[(i, i)].clone()).take_while(|x| !x.is_zero()).collect()
}

/// Smith normal form with transforms. Small inputs run in `i64` and fall back to
/// arbitrary precision on overflow.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm<BigInt> {
    if let Some(small) = a.convert::<i64>() {
        if let Ok(s) = SmithForm::compute(&small) {
            return s.to_bigint();
        }
    }
    SmithForm::compute(a).expect("arbitrary precision does not overflow")
}

/// Smith form with the row transforms only; `v` is left empty.
pub fn smith_rows(a: &IntMatrix) -> SmithForm<BigInt> {
    fn go<T: Scalar>(a: &Matrix<T>) -> Result<SmithForm<T>, Overflow> {
        let mut e = Eliminator::tracking(a.clone(), true, false);
        e.run()?;
        let factors = diag_factors(&e.d);
        Ok(SmithForm { u: e.u.unwrap(), u_inv: e.u_inv.unwrap(), d: e.d, v: Matrix::zeros(0, 0), factors })
    }
    if let Some(small) = a.convert::<i64>() {
        if let Ok(s) = go(&small) {
            return s.to_bigint();
        }
    }
    go(a).expect("arbitrary precision does not overflow")
}

/// Invariant factors only (no transforms), including the unit factors.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    if let Some(small) = a.convert::<i64>() {
        let mut e = Eliminator::new(small, false);
        if e.run().is_ok() {
            return diag_factors(&e.d).iter().map(Scalar::to_bigint).collect();
        }
    }
    let mut e = Eliminator::new(a.clone(), false);
    e.run().expect("arbitrary precision does not overflow");
    diag_factors(&e.d)
}

struct Eliminator<T> {
    d: Matrix<T>,
    u: Option<Matrix<T>>,
    u_inv: Option<Matrix<T>>,
    v: Option<Matrix<T>>,
}

fn quot<T: Scalar>(a: &T, b: &T) -> Result<T, Overflow> {
    if b.is_one() {
        Ok(a.clone())
    } else if (-b.clone()).is_one() {
        scalar::sub(&T::zero(), a)
    } else {
        Ok(a.div_floor(b))
    }
}

impl<T: Scalar> Eliminator<T> {
    fn new(d: Matrix<T>, track: bool) -> Self {
        Self::tracking(d, track, track)
    }

    fn tracking(d: Matrix<T>, rows: bool, cols: bool) -> Self {
        let (m, n) = (d.rows(), d.cols());
        Eliminator {
            u: rows.then(|| Matrix::identity(m)),
            u_inv: rows.then(|| Matrix::identity(m)),
            v: cols.then(|| Matrix::identity(n)),
            d,
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.d.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.d.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
    }

    /// row_i -= q * row_t
    fn row_op(&mut self, i: usize, t: usize, q: &T, from_col: usize) -> Result<(), Overflow> {
        let n = self.d.cols();
        for c in from_col..n {
            let x = self.d[(t, c)].clone();
            if !x.is_zero() {
                self.d[(i, c)] = scalar::sub_mul(&self.d[(i, c)], q, &x)?;
            }
        }
        if let Some(u) = &mut self.u {
            for c in 0..u.cols() {
                let x = u[(t, c)].clone();
                if !x.is_zero() {
                    u[(i, c)] = scalar::sub_mul(&u[(i, c)], q, &x)?;
                }
            }
        }
        if let Some(ui) = &mut self.u_inv {
            // inverse gets col_t += q * col_i
            for r in 0..ui.rows() {
                let x = ui[(r, i)].clone();
                if !x.is_zero() {
                    ui[(r, t)] = scalar::add(&ui[(r, t)], &scalar::mul(q, &x)?)?;
                }
            }
        }
        Ok(())
    }

    /// col_j -= q * col_t
    fn col_op(&mut self, j: usize, t: usize, q: &T, from_row: usize) -> Result<(), Overflow> {
        let m = self.d.rows();
        for r in from_row..m {
            let x = self.d[(r, t)].clone();
            if !x.is_zero() {
                self.d[(r, j)] = scalar::sub_mul(&self.d[(r, j)], q, &x)?;
            }
        }
        if let Some(v) = &mut self.v {
            for r in 0..v.rows() {
                let x = v[(r, t)].clone();
                if !x.is_zero() {
                    v[(r, j)] = scalar::sub_mul(&v[(r, j)], q, &x)?;
                }
            }
        }
        Ok(())
    }

    fn negate_row(&mut self, t: usize) -> Result<(), Overflow> {
        let neg = |x: &T| scalar::sub(&T::zero(), x);
        for c in 0..self.d.cols() {
            self.d[(t, c)] = neg(&self.d[(t, c)])?;
        }
        if let Some(u) = &mut self.u {
            for c in 0..u.cols() {
                u[(t, c)] = neg(&u[(t, c)])?;
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for r in 0..ui.rows() {
                ui[(r, t)] = neg(&ui[(r, t)])?;
            }
        }
        Ok(())
    }

    /// Smallest entry of the active block; ties go to the least fill-in
    /// (Markowitz cost), which keeps entries and transforms small.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let (m, n) = (self.d.rows(), self.d.cols());
        let mut row_nnz = vec![0usize; m];
        let mut col_nnz = vec![0usize; n];
        for i in t..m {
            for j in t..n {
                if !self.d[(i, j)].is_zero() {
                    row_nnz[i] += 1;
                    col_nnz[j] += 1;
                }
            }
        }
        let mut best: Option<(usize, usize, T, usize)> = None;
        for i in (t..m).filter(|&i| row_nnz[i] > 0) {
            for j in t..n {
                let x = &self.d[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let (a, cost) = (x.abs(), (row_nnz[i] - 1) * (col_nnz[j] - 1));
                let better = match &best {
                    None => true,
                    Some((_, _, b, c)) => a < *b || (a == *b && cost < *c),
                };
                if better {
                    if a.is_one() && cost == 0 {
                        return Some((i, j));
                    }
                    best = Some((i, j, a, cost));
                }
            }
        }
        best.map(|(i, j, _, _)| (i, j))
    }

    fn run(&mut self) -> Result<(), Overflow> {
        let (m, n) = (self.d.rows(), self.d.cols());
        for t in 0..m.min(n) {
            let Some((pi, pj)) = self.min_pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..m {
                    if !self.d[(i, t)].is_zero() {
                        let q = quot(&self.d[(i, t)], &self.d[(t, t)])?;
                        self.row_op(i, t, &q, t)?;
                        clean &= self.d[(i, t)].is_zero();
                    }
                }
                for j in t + 1..n {
                    if !self.d[(t, j)].is_zero() {
                        let q = quot(&self.d[(t, j)], &self.d[(t, t)])?;
                        self.col_op(j, t, &q, t)?;
                        clean &= self.d[(t, j)].is_zero();
                    }
                }
                if !clean {
                    let mut best = (t, t);
                    for i in t + 1..m {
                        let x = &self.d[(i, t)];
                        if !x.is_zero() && x.abs() < self.d[best].abs() {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..n {
                        let x = &self.d[(t, j)];
                        if !x.is_zero() && x.abs() < self.d[best].abs() {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                let piv = self.d[(t, t)].clone();
                if piv.abs().is_one() {
                    break;
                }
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !self.d[(i, j)].is_multiple_of(&piv)));
                match bad {
                    // row_t += row_i, then the next pass leaves a smaller remainder
                    Some(i) => self.row_op(t, i, &(-T::one()), t)?,
                    None => break,
                }
            }
            if self.d[(t, t)].is_negative() {
                self.negate_row(t)?;
            }
        }
        Ok(())
    }
}

/// Basis of `{x : a x = 0}` as the columns of the returned matrix.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let ce = column_echelon(a);
    ce.w.select_cols(&ce.free)
}

/// `e = a w` with `w` unimodular, reached by column operations.
///
/// Column `pivots[c].1` is nonzero in row `pivots[c].0` and every later pivot
/// column and every free column vanish there, so `a x = b` can be solved by
/// walking the pivots in order. Free columns of `e` are zero.
#[derive(Clone)]
pub struct ColumnEchelon<T> {
    pub e: Matrix<T>,
    pub w: Matrix<T>,
    /// `(row, column)` in elimination order.
    pub pivots: Vec<(usize, usize)>,
    pub free: Vec<usize>,
}

impl<T: Scalar> std::fmt::Debug for ColumnEchelon<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ColumnEchelon").field("pivots", &self.pivots).field("free", &self.free).finish()
    }
}

impl ColumnEchelon<BigInt> {
    /// `y` with `e y = x`, or `None` when `x` is not in the column span of `e`.
    pub fn solve_e(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut x = x.to_vec();
        let mut y = vec![BigInt::zero(); self.e.cols()];
        for &(r, c) in &self.pivots {
            if x[r].is_zero() {
                continue;
            }
            let (q, rem) = num_integer::Integer::div_rem(&x[r], &self.e[(r, c)]);
            if !rem.is_zero() {
                return None;
            }
            for i in 0..x.len() {
                let v = &self.e[(i, c)];
                if !v.is_zero() {
                    x[i] -= &q * v;
                }
            }
            y[c] = q;
        }
        x.iter().all(Zero::is_zero).then_some(y)
    }
}

/// Column echelon form, in `i64` when it fits.
pub fn column_echelon(a: &IntMatrix) -> ColumnEchelon<BigInt> {
    let big = |c: ColumnEchelon<i64>| ColumnEchelon { e: c.e.to_bigint(), w: c.w.to_bigint(), pivots: c.pivots, free: c.free };
    if let Some(small) = a.convert::<i64>() {
        if let Ok(c) = echelon_generic(&small) {
            return big(c);
        }
    }
    echelon_generic(a).expect("arbitrary precision does not overflow")
}

/// Pivots are the smallest entries with the least fill-in; each pivot row is
/// cleared by a Euclid loop over the remaining columns.
fn echelon_generic<T: Scalar>(a: &Matrix<T>) -> Result<ColumnEchelon<T>, Overflow> {
    let (m, n) = (a.rows(), a.cols());
    let mut e = a.clone();
    let mut w = Matrix::<T>::identity(n);
    let mut active = vec![true; n];
    let mut row_done = vec![false; m];
    let mut pivots = vec![];
    // col_j -= q * col_p on both e and w
    let col_op = |e: &mut Matrix<T>, w: &mut Matrix<T>, j: usize, p: usize, q: &T| -> Result<(), Overflow> {
        for r in 0..m {
            let x = e[(r, p)].clone();
            if !x.is_zero() {
                e[(r, j)] = scalar::sub_mul(&e[(r, j)], q, &x)?;
            }
        }
        for r in 0..n {
            let x = w[(r, p)].clone();
            if !x.is_zero() {
                w[(r, j)] = scalar::sub_mul(&w[(r, j)], q, &x)?;
            }
        }
        Ok(())
    };
    loop {
        let mut row_nnz = vec![0usize; m];
        let mut col_nnz = vec![0usize; n];
        for i in (0..m).filter(|&i| !row_done[i]) {
            for j in (0..n).filter(|&j| active[j]) {
                if !e[(i, j)].is_zero() {
                    row_nnz[i] += 1;
                    col_nnz[j] += 1;
                }
            }
        }
        let mut best: Option<(usize, T, usize)> = None;
        'scan: for i in (0..m).filter(|&i| row_nnz[i] > 0) {
            for j in (0..n).filter(|&j| active[j]) {
                let x = &e[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let (v, cost) = (x.abs(), (row_nnz[i] - 1) * (col_nnz[j] - 1));
                if best.as_ref().map_or(true, |(_, b, c)| v < *b || (v == *b && cost < *c)) {
                    let done = v.is_one() && cost == 0;
                    best = Some((i, v, cost));
                    if done {
                        break 'scan;
                    }
                }
            }
        }
        let Some((i, _, _)) = best else { break };
        loop {
            let mut piv: Option<usize> = None;
            for j in (0..n).filter(|&j| active[j] && !e[(i, j)].is_zero()) {
                if piv.map_or(true, |p| e[(i, j)].abs() < e[(i, p)].abs()) {
                    piv = Some(j);
                }
            }
            let p = piv.expect("row has a nonzero active entry");
            let mut clean = true;
            for j in (0..n).filter(|&j| j != p && active[j]) {
                if e[(i, j)].is_zero() {
                    continue;
                }
                let q = quot(&e[(i, j)], &e[(i, p)])?;
                col_op(&mut e, &mut w, j, p, &q)?;
                clean &= e[(i, j)].is_zero();
            }
            if clean {
                active[p] = false;
                row_done[i] = true;
                pivots.push((i, p));
                break;
            }
        }
    }
    let free = (0..n).filter(|&j| active[j]).collect();
    Ok(ColumnEchelon { e, w, pivots, free })
}

/// Integer solution of `a x = b`: a particular solution plus a kernel basis
/// (columns), or `None` when no integer solution exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<(Vec<BigInt>, IntMatrix)> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let s = smith_normal_form(a);
    let ub = s.u.mul_vec(b);
    let r = s.rank();
    let mut y = vec![BigInt::zero(); a.cols()];
    for i in 0..ub.len() {
        if i < r {
            let (q, rem) = num_integer::Integer::div_rem(&ub[i], &s.factors[i]);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ub[i].is_zero() {
            return None;
        }
    }
    let x = s.v.mul_vec(&y);
    let kernel_cols: Vec<usize> = (r..a.cols()).collect();
    Some((x, s.v.select_cols(&kernel_cols)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use num_traits::{One, Signed};

    fn check(a: &IntMatrix) -> SmithForm<BigInt> {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(a.rows()));
        assert!(s.u.det().abs().is_one() && s.v.det().abs().is_one());
        for w in s.factors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn diag_two_three() {
        let s = check(&IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]));
        assert_eq!(s.factors, ints(&[1, 6]));
    }

    #[test]
    fn identity_and_zero() {
        assert_eq!(check(&IntMatrix::identity(3)).factors, ints(&[1, 1, 1]));
        assert!(check(&IntMatrix::zeros(1, 1)).factors.is_empty());
    }

    #[test]
    fn negative_pivot_and_rectangular() {
        let s = check(&IntMatrix::from_i64(2, 3, &[-4, 6, 2, 8, -2, 10]));
        assert_eq!(invariant_factors(&IntMatrix::from_i64(2, 3, &[-4, 6, 2, 8, -2, 10])), s.factors);
        let s = check(&IntMatrix::from_i64(3, 1, &[-6, 0, 9]));
        assert_eq!(s.factors, ints(&[3]));
    }

    #[test]
    fn bigint_fallback() {
        let big = BigInt::from(i64::MAX) * BigInt::from(4);
        let a = IntMatrix::from_vec(2, 2, vec![big.clone(), BigInt::from(2), BigInt::from(6), big]);
        check(&a);
    }

    #[test]
    fn solve_examples() {
        let (x, k) = solve_integer(&IntMatrix::from_i64(1, 1, &[2]), &ints(&[4])).unwrap();
        assert_eq!(x, ints(&[2]));
        assert_eq!(k.cols(), 0);
        assert!(solve_integer(&IntMatrix::from_i64(1, 1, &[2]), &ints(&[3])).is_none());
        let (x, k) = solve_integer(&IntMatrix::from_i64(1, 2, &[1, 1]), &ints(&[0])).unwrap();
        assert_eq!(x, ints(&[0, 0]));
        assert_eq!(k.cols(), 1);
        let kv = k.col(0);
        assert_eq!(&kv[0] + &kv[1], BigInt::zero());
        assert!(kv[0].abs().is_one());
    }

    #[test]
    fn kernel_spans_solutions() {
        let a = IntMatrix::from_i64(2, 4, &[1, 2, 3, 4, 2, 4, 6, 9]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).is_zero());
    }
}
