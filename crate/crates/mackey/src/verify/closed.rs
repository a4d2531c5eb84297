//! Closed forms for `H_*(S^V; Z)` over `C_p`, `C_2` and `C_{p^2}`.

use crate::mackey::{
    b_form, constant_z, direct_sum_m, dual_levelwise, form_z, pullback_psi, z_minus, z_minus_dotted, z_star,
    DualMode, GradedMackey, MackeyFunctor, Shape,
};

/// A graded functor assembled by direct sums.
struct Table {
    g: GradedMackey,
}

impl Table {
    fn new(shape: Shape) -> Self {
        Table { g: GradedMackey::new(shape, 0, 0) }
    }

    fn add(&mut self, d: i64, m: &MackeyFunctor) {
        let m = match self.g.get(d) {
            Some(old) => direct_sum_m(old, m),
            None => m.clone(),
        };
        self.g.insert(d, m);
    }
}

fn bits(shape: Shape, t: &[u8]) -> MackeyFunctor {
    b_form(shape, t).expect("index has length n")
}

/// `H_*(S^{aλ + b})` over `C_p`.
pub fn cp_sphere(shape: Shape, a: i64, b: i64) -> GradedMackey {
    assert_eq!(shape.n, 1);
    let b1 = bits(shape, &[1]);
    let mut t = Table::new(shape);
    if a >= 0 {
        t.add(2 * a + b, &constant_z(shape));
        for i in 0..a {
            t.add(2 * i + b, &b1);
        }
    } else {
        t.add(2 * a + b, &z_star(shape));
        for i in 1..-a {
            t.add(2 * a + 2 * i - 1 + b, &b1);
        }
    }
    t.g
}

/// `H_*(S^{sσ + b})` over `C_2`.
pub fn c2_sphere(shape: Shape, s: i64, b: i64) -> GradedMackey {
    assert_eq!((shape.p, shape.n), (2, 1));
    let b1 = bits(shape, &[1]);
    let sign = z_minus(shape).expect("p = 2");
    let mut t = Table::new(shape);
    if s >= 0 {
        t.add(s + b, &if s % 2 == 0 { constant_z(shape) } else { sign });
        for d in (0..s).step_by(2) {
            t.add(d + b, &b1);
        }
    } else {
        let k = -s;
        let top = match k {
            _ if k % 2 == 0 => z_star(shape),
            1 => sign,
            _ => z_minus_dotted(shape).expect("p = 2"),
        };
        t.add(s + b, &top);
        // Σ^{-1} u^{-j} a^{-(k - 2j)} with k - 2j >= 2
        for j in (1..).take_while(|j| k - 2 * j >= 2) {
            t.add(-1 - 2 * j + b, &b1);
        }
    }
    t.g
}

/// `H_*(S^{nλ_1 + mλ_0})` over `C_{p^2}`.
pub fn cp2_sphere(shape: Shape, n: i64, m: i64) -> GradedMackey {
    assert_eq!(shape.n, 2);
    let z = constant_z(shape);
    let z11 = form_z(shape, &[1, 1]).expect("index has length 2");
    let (b01, b10, b11) = (bits(shape, &[0, 1]), bits(shape, &[1, 0]), bits(shape, &[1, 1]));
    let mut t = Table::new(shape);
    if m >= 0 && n >= 0 {
        t.add(2 * (m + n), &z);
        for i in 1..=n {
            t.add(2 * (n - i), &b01);
        }
        for j in 1..=m {
            t.add(2 * (m + n - j), &b11);
        }
    } else if m < 0 && n <= 0 {
        t.add(2 * (m + n), &z11);
        for i in 1..-m {
            t.add(2 * (m + n) + 2 * i - 1, &b11);
        }
        for j in 0..-n {
            t.add(2 * n + 2 * j - 1, &b01);
        }
    } else if n < 0 && m > 0 {
        t.add(2 * (m + n), &z);
        t.add(2 * n, &dual_levelwise(&b10, DualMode::E));
        for i in 1..-n {
            t.add(2 * n + 2 * i - 1, &b01);
        }
        for j in 1..m {
            t.add(2 * n + 2 * j, &b11);
        }
    } else if n > 0 && m < -1 {
        t.add(2 * (m + n), &z11);
        t.add(2 * n - 3, &b10);
        for i in 2..=n {
            t.add(2 * (n - i), &b01);
        }
        for i in 1..-m - 1 {
            t.add(2 * (m + n) + 2 * i - 1, &b11);
        }
    } else if n > 0 && m == -1 {
        t.add(2 * (n - 1), &form_z(shape, &[1, 0]).expect("index has length 2"));
        for i in 2..=n {
            t.add(2 * (n - i), &b01);
        }
    } else {
        // n < 0, m = 0: pulled back from the quotient by C_p
        let q = Shape::new(shape.p, 1).expect("prime already checked");
        return cp_sphere(q, n, 0).map(shape, |x| pullback_psi(x, 1).expect("cohomological"));
    }
    t.g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let s = Shape::new(3, 1).unwrap();
        assert_eq!(cp_sphere(s, 2, 1).support(), vec![1, 3, 5]);
        assert_eq!(cp_sphere(s, -3, 0).support(), vec![-6, -5, -3]);
        let c2 = Shape::new(2, 1).unwrap();
        assert_eq!(c2_sphere(c2, -5, 0).support(), vec![-5, -3]);
        assert_eq!(c2_sphere(c2, 3, 0).support(), vec![0, 2, 3]);
        let q = Shape::new(3, 2).unwrap();
        assert_eq!(cp2_sphere(q, 2, 1).support(), vec![0, 2, 4, 6]);
        assert_eq!(cp2_sphere(q, 3, -1).support(), vec![0, 2, 4]);
    }
}
