use num_bigint::BigInt;
use serde_json::{json, Value};

use super::{MackeyError, MackeyFunctor, Shape};
use crate::intlin::{FgAbGroup, IntMatrix};

pub const SCHEMA: &str = "mackey/1";

fn render_matrix(m: &IntMatrix) -> String {
    if m.rows() == 1 && m.cols() == 1 {
        return m[(0, 0)].to_string();
    }
    if m.rows() == 0 || m.cols() == 0 {
        return "0".into();
    }
    let rows: Vec<String> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

fn weyl_is_trivial(m: &MackeyFunctor) -> bool {
    m.weyl.iter().all(|w| w.equals(&crate::intlin::GroupHom::identity(&w.source)))
}

/// One-line Lewis diagram, top level first: `Z ⇅(res,tr) Z ...`.
/// A nontrivial Weyl action is appended per level.
pub fn render_lewis(m: &MackeyFunctor) -> String {
    let n = m.n();
    let mut s = m.levels[n].to_string();
    for k in (0..n).rev() {
        s.push_str(&format!(" ⇅({},{}) {}", render_matrix(&m.res[k].matrix), render_matrix(&m.tr[k].matrix), m.levels[k]));
    }
    if !weyl_is_trivial(m) {
        let parts: Vec<String> =
            (0..=n).rev().map(|k| render_matrix(&m.weyl[k].matrix)).collect();
        s.push_str(&format!("  γ=({})", parts.join(", ")));
    }
    s
}

/// Multi-line Lewis diagram with one row per level, `G/G` on top.
pub fn render_lewis_block(m: &MackeyFunctor) -> String {
    let n = m.n();
    let name = |k: usize| match k {
        0 => "G/e".to_string(),
        k if k == n => "G/G".to_string(),
        k => format!("G/C{}", m.p().pow(k as u32)),
    };
    let mut lines = vec![];
    for k in (0..=n).rev() {
        let mut line = format!("{:<8}{}", name(k), m.levels[k]);
        if !m.weyl[k].equals(&crate::intlin::GroupHom::identity(&m.levels[k])) {
            line.push_str(&format!("   γ={}", render_matrix(&m.weyl[k].matrix)));
        }
        lines.push(line);
        if k > 0 {
            lines.push(format!(
                "{:<8}res ↓ {}   tr ↑ {}",
                "",
                render_matrix(&m.res[k - 1].matrix),
                render_matrix(&m.tr[k - 1].matrix)
            ));
        }
    }
    lines.join("\n")
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|x| json!(x.to_string())).collect())).collect())
}

pub fn to_json(m: &MackeyFunctor) -> Value {
    json!({
        "schema": SCHEMA,
        "p": m.p(),
        "n": m.n(),
        "levels": m.levels.iter().map(|g| g.orders().iter().map(|o| o.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "res": m.res.iter().map(|f| matrix_json(&f.matrix)).collect::<Vec<_>>(),
        "tr": m.tr.iter().map(|f| matrix_json(&f.matrix)).collect::<Vec<_>>(),
        "weyl": m.weyl.iter().map(|f| matrix_json(&f.matrix)).collect::<Vec<_>>(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JsonError {
    #[error("{path}: {msg}")]
    Schema { path: String, msg: String },
    #[error(transparent)]
    Invalid(#[from] MackeyError),
}

fn schema_err(path: &str, msg: impl Into<String>) -> JsonError {
    JsonError::Schema { path: path.into(), msg: msg.into() }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, JsonError> {
    v.get(key).ok_or_else(|| schema_err(&format!("$.{key}"), "missing field"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, JsonError> {
    v.as_array().ok_or_else(|| schema_err(path, "expected an array"))
}

fn as_int(v: &Value, path: &str) -> Result<BigInt, JsonError> {
    let s = v.as_str().ok_or_else(|| schema_err(path, "expected an integer string"))?;
    s.trim().parse().map_err(|_| schema_err(path, format!("not an integer: {s:?}")))
}

fn parse_matrix(v: &Value, path: &str, rows: usize, cols: usize) -> Result<IntMatrix, JsonError> {
    let rs = as_array(v, path)?;
    if rs.len() != rows {
        return Err(schema_err(path, format!("expected {rows} rows, found {}", rs.len())));
    }
    let mut m = IntMatrix::zeros(rows, cols);
    for (i, r) in rs.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let cs = as_array(r, &rp)?;
        if cs.len() != cols {
            return Err(schema_err(&rp, format!("expected {cols} entries, found {}", cs.len())));
        }
        for (j, x) in cs.iter().enumerate() {
            m[(i, j)] = as_int(x, &format!("{rp}[{j}]"))?;
        }
    }
    Ok(m)
}

/// Parses and validates a functor written by [`to_json`].
pub fn from_json(v: &Value) -> Result<MackeyFunctor, JsonError> {
    match field(v, "schema")?.as_str() {
        Some(SCHEMA) => {}
        _ => return Err(schema_err("$.schema", format!("expected \"{SCHEMA}\""))),
    }
    let p = field(v, "p")?.as_u64().ok_or_else(|| schema_err("$.p", "expected a prime"))?;
    let n = field(v, "n")?.as_u64().ok_or_else(|| schema_err("$.n", "expected a positive integer"))? as usize;
    let shape = Shape::new(p, n)?;
    let lv = as_array(field(v, "levels")?, "$.levels")?;
    if lv.len() != n + 1 {
        return Err(schema_err("$.levels", format!("expected {} levels", n + 1)));
    }
    let mut levels = vec![];
    for (k, l) in lv.iter().enumerate() {
        let path = format!("$.levels[{k}]");
        let orders = as_array(l, &path)?
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let o = as_int(x, &format!("{path}[{i}]"))?;
                if o < BigInt::from(0) {
                    return Err(schema_err(&format!("{path}[{i}]"), "orders are nonnegative"));
                }
                Ok(o)
            })
            .collect::<Result<Vec<_>, _>>()?;
        levels.push(FgAbGroup::diagonal_unchecked(orders));
    }
    let size = |k: usize| levels[k].num_generators();
    let maps = |key: &str, count: usize, dims: &dyn Fn(usize) -> (usize, usize)| -> Result<Vec<IntMatrix>, JsonError> {
        let arr = as_array(field(v, key)?, &format!("$.{key}"))?;
        if arr.len() != count {
            return Err(schema_err(&format!("$.{key}"), format!("expected {count} matrices")));
        }
        arr.iter()
            .enumerate()
            .map(|(k, x)| {
                let (r, c) = dims(k);
                parse_matrix(x, &format!("$.{key}[{k}]"), r, c)
            })
            .collect()
    };
    let res = maps("res", n, &|k| (size(k), size(k + 1)))?;
    let tr = maps("tr", n, &|k| (size(k + 1), size(k)))?;
    let weyl = maps("weyl", n + 1, &|k| (size(k), size(k)))?;
    Ok(MackeyFunctor::new(shape, levels, res, tr, weyl)?)
}

#[cfg(test)]
mod tests {
    use super::super::{b_form, constant_z, fixed_point_module, form_z};
    use super::*;

    #[test]
    fn one_line_form() {
        let s = Shape::new(3, 1).unwrap();
        assert_eq!(render_lewis(&form_z(s, &[1]).unwrap()), "Z ⇅(3,1) Z");
        assert_eq!(render_lewis(&constant_z(s)), "Z ⇅(1,3) Z");
    }

    #[test]
    fn json_round_trip() {
        let s = Shape::new(2, 2).unwrap();
        let b = b_form(s, &[1, 1]).unwrap();
        assert_eq!(from_json(&to_json(&b)).unwrap(), b);
        let shift = IntMatrix::from_i64(4, 4, &[0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0]);
        let r = fixed_point_module(s, &shift).unwrap();
        assert_eq!(from_json(&to_json(&r)).unwrap(), r);
    }

    #[test]
    fn json_rejects_bad_double_coset() {
        let mut v = to_json(&constant_z(Shape::new(3, 1).unwrap()));
        v["tr"][0][0][0] = json!("1");
        assert!(matches!(from_json(&v), Err(JsonError::Invalid(MackeyError::Invalid(_)))));
        v["tr"][0][0][0] = json!("x");
        assert_eq!(from_json(&v).unwrap_err().to_string(), "$.tr[0][0][0]: not an integer: \"x\"");
    }
}
