use std::fmt;

use crate::mackey::Shape;

use super::SphereError;

/// A virtual representation of `C_{p^n}`: `Σ a_i λ_i + s σ + t`.
///
/// `λ_i` is the 2-dimensional rotation with kernel `C_{p^i}`; `twist[i] = r`
/// means every copy of `λ_i` is read as `λ(r p^i)`. For `p = 2` the label is
/// kept in canonical form with `λ_{n-1}` rewritten as `2σ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RepLabel {
    pub shape: Shape,
    pub a: Vec<i64>,
    pub t: i64,
    pub s: i64,
    pub twist: Vec<u64>,
}

impl RepLabel {
    pub fn zero(shape: Shape) -> Self {
        RepLabel { shape, a: vec![0; shape.n], t: 0, s: 0, twist: vec![1; shape.n] }
    }

    pub fn trivial(shape: Shape, t: i64) -> Self {
        RepLabel { t, ..Self::zero(shape) }
    }

    /// `c λ_k`.
    pub fn lambda(shape: Shape, k: usize, c: i64) -> Self {
        let mut v = Self::zero(shape);
        v.a[k] = c;
        v.canonical()
    }

    pub fn sigma(shape: Shape, c: i64) -> Result<Self, SphereError> {
        if shape.p != 2 {
            return Err(SphereError::NoSign(shape.p));
        }
        Ok(RepLabel { s: c, ..Self::zero(shape) })
    }

    /// Rewrites `λ_{n-1}` as `2σ` when `p = 2`.
    pub fn canonical(mut self) -> Self {
        let n = self.shape.n;
        if self.shape.p == 2 && n > 0 {
            self.s += 2 * self.a[n - 1];
            self.a[n - 1] = 0;
            self.twist[n - 1] = 1;
        }
        self
    }

    /// The same label with all twists reset to 1.
    pub fn untwisted(&self) -> Self {
        RepLabel { twist: vec![1; self.shape.n], ..self.clone() }
    }

    pub fn dim(&self) -> i64 {
        2 * self.a.iter().sum::<i64>() + self.s + self.t
    }

    /// An actual representation: no negative summands apart from the trivial part.
    pub fn is_actual(&self) -> bool {
        self.a.iter().all(|&c| c >= 0) && self.s >= 0
    }

    /// Orientable: an even number of copies of `σ`.
    pub fn is_orientable(&self) -> bool {
        self.s % 2 == 0
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape, other.shape);
        RepLabel {
            shape: self.shape,
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
            t: self.t + other.t,
            s: self.s + other.s,
            twist: self.twist.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        RepLabel {
            shape: self.shape,
            a: self.a.iter().map(|x| -x).collect(),
            t: -self.t,
            s: -self.s,
            twist: self.twist.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Parses labels such as `"4s-3L0"`, `"2 - L1"` or `"L0@2 + L1"`.
    ///
    /// Terms are an optional integer coefficient followed by `L<k>` (with an
    /// optional `@r` twist), `s`, or nothing for the trivial summand.
    pub fn parse(shape: Shape, text: &str) -> Result<Self, SphereError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(SphereError::Parse { token: text.to_string(), reason: "empty label".into() });
        }
        let mut v = Self::zero(shape);
        let mut twisted = vec![None; shape.n];
        for (sign, token) in split_terms(&compact)? {
            let bad = |reason: &str| SphereError::Parse { token: token.clone(), reason: reason.into() };
            let digits = token.chars().take_while(|c| c.is_ascii_digit()).count();
            let (num, rest) = token.split_at(digits);
            let coef: i64 = if num.is_empty() { 1 } else { num.parse().map_err(|_| bad("coefficient too large"))? };
            let coef = sign * coef;
            if rest.is_empty() {
                if num.is_empty() {
                    return Err(bad("missing term"));
                }
                v.t += coef;
            } else if rest == "s" {
                if shape.p != 2 {
                    return Err(bad("σ exists only for p = 2"));
                }
                v.s += coef;
            } else if let Some(body) = rest.strip_prefix('L') {
                let (k, r) = match body.split_once('@') {
                    Some((k, r)) => (k, Some(r)),
                    None => (body, None),
                };
                let k: usize = k.parse().map_err(|_| bad("expected a level after L"))?;
                if k >= shape.n {
                    return Err(bad(&format!("level must be below {}", shape.n)));
                }
                let r: u64 = match r {
                    Some(r) => r.parse().map_err(|_| bad("expected a twist after @"))?,
                    None => 1,
                };
                if r % shape.p == 0 {
                    return Err(bad(&format!("twist must be prime to {}", shape.p)));
                }
                match twisted[k] {
                    Some(old) if old != r => return Err(bad("conflicting twists for the same level")),
                    _ => twisted[k] = Some(r),
                }
                v.a[k] += coef;
                v.twist[k] = r;
            } else {
                return Err(bad("unknown summand"));
            }
        }
        Ok(v.canonical())
    }
}

fn split_terms(s: &str) -> Result<Vec<(i64, String)>, SphereError> {
    let mut out = vec![];
    let mut sign = 1;
    let mut cur = String::new();
    let mut started = false;
    for c in s.chars() {
        if c == '+' || c == '-' {
            if started {
                if cur.is_empty() {
                    return Err(SphereError::Parse { token: s.to_string(), reason: "dangling sign".into() });
                }
                out.push((sign, std::mem::take(&mut cur)));
            } else if !cur.is_empty() {
                out.push((sign, std::mem::take(&mut cur)));
            }
            sign = if c == '-' { -1 } else { 1 };
            started = true;
        } else {
            cur.push(c);
        }
    }
    if cur.is_empty() {
        return Err(SphereError::Parse { token: s.to_string(), reason: "dangling sign".into() });
    }
    out.push((sign, cur));
    Ok(out)
}

impl fmt::Display for RepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(i64, String)> = vec![];
        for (k, &c) in self.a.iter().enumerate() {
            let tw = if self.twist[k] != 1 { format!("@{}", self.twist[k]) } else { String::new() };
            parts.push((c, format!("L{k}{tw}")));
        }
        parts.push((self.s, "s".into()));
        parts.push((self.t, String::new()));
        let mut out = String::new();
        for (c, name) in parts.into_iter().filter(|(c, _)| *c != 0) {
            if c < 0 {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if c.abs() != 1 || name.is_empty() {
                out.push_str(&c.abs().to_string());
            }
            out.push_str(&name);
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sh(p: u64, n: usize) -> Shape {
        Shape::new(p, n).unwrap()
    }

    #[test]
    fn parses_and_prints() {
        let v = RepLabel::parse(sh(2, 2), "4s - 3L0").unwrap();
        assert_eq!((v.a.clone(), v.s, v.t), (vec![-3, 0], 4, 0));
        assert_eq!(v.to_string(), "-3L0+4s");
        assert_eq!(v.dim(), -2);
        let w = RepLabel::parse(sh(3, 2), "2-L1").unwrap();
        assert_eq!(w.to_string(), "-L1+2");
        assert_eq!(RepLabel::parse(sh(3, 1), " 0 ").unwrap().to_string(), "0");
    }

    #[test]
    fn sign_rep_canonical_form() {
        let v = RepLabel::parse(sh(2, 3), "-L0+L1-L2+2").unwrap();
        assert_eq!(v.to_string(), "-L0+L1-2s+2");
        assert_eq!(v.dim(), 0);
        assert_eq!(RepLabel::parse(sh(2, 1), "L0").unwrap().s, 2);
    }

    #[test]
    fn twists() {
        let v = RepLabel::parse(sh(5, 1), "L0@3").unwrap();
        assert_eq!(v.twist, vec![3]);
        assert_eq!(v.to_string(), "L0@3");
        assert!(RepLabel::parse(sh(5, 1), "L0@10").is_err());
        assert!(RepLabel::parse(sh(5, 1), "L0@2+L0@3").is_err());
    }

    #[test]
    fn errors_cite_the_token() {
        let e = RepLabel::parse(sh(3, 2), "L0+2x").unwrap_err();
        assert!(e.to_string().contains("2x"), "{e}");
        assert!(RepLabel::parse(sh(3, 2), "s").is_err());
        assert!(RepLabel::parse(sh(3, 2), "L2").is_err());
        assert!(RepLabel::parse(sh(3, 2), "L0+").is_err());
        assert!(RepLabel::parse(sh(3, 2), "").is_err());
    }
}
