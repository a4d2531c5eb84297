use std::collections::BTreeSet;
use std::fmt::Write;

use mackey::intlin::Canonical;
use mackey::mackey::{
    fingerprint, render_lewis, render_lewis_block, to_json, Fingerprint, MackeyFunctor, MapInvariant, Namer, SCHEMA,
};
use mackey::spheres::RepLabel;
use serde_json::{json, Value};

use crate::job::{Column, Job, Outcome};
use crate::Format;

fn canonical(c: &Canonical) -> Value {
    json!(c.to_string())
}

fn invariants(v: &[MapInvariant]) -> Value {
    v.iter()
        .map(|m| json!({"ker": canonical(&m.kernel), "im": canonical(&m.image), "coker": canonical(&m.cokernel)}))
        .collect()
}

pub fn fingerprint_json(f: &Fingerprint) -> Value {
    json!({
        "levels": f.levels.iter().map(canonical).collect::<Vec<_>>(),
        "res": invariants(&f.res),
        "tr": invariants(&f.tr),
        "tr_res": invariants(&f.tr_res),
        "res_tr": invariants(&f.res_tr),
        "weyl": invariants(&f.weyl),
        "long_res": invariants(&f.long_res),
        "long_tr": invariants(&f.long_tr),
    })
}

fn functor_json(m: &MackeyFunctor, namer: &Namer) -> Value {
    json!({
        "name": namer.name(m),
        "lewis": render_lewis(m),
        "fingerprint": fingerprint_json(&fingerprint(m)),
        "functor": to_json(m),
    })
}

/// `π_{d - V}` written as a label.
fn pi_index(rep: &RepLabel, d: i64) -> String {
    RepLabel::trivial(rep.shape, d).sub(rep).to_string()
}

pub fn to_value(job: &Job, outcome: &Outcome) -> Value {
    let namer = Namer::new(job.shape);
    let result = match outcome {
        Outcome::Functor { title, m } => {
            let mut v = functor_json(m, &Namer::new(m.shape));
            v["title"] = json!(title);
            v
        }
        Outcome::Graded { columns, .. } => columns
            .iter()
            .map(|c| {
                let degrees: Vec<Value> = c
                    .values
                    .iter()
                    .map(|(d, m)| {
                        let mut v = functor_json(m, &namer);
                        v["degree"] = json!(d);
                        if let Some(rep) = &c.rep {
                            v["pi"] = json!(pi_index(rep, d));
                        }
                        v
                    })
                    .collect();
                json!({"label": c.label, "degrees": degrees})
            })
            .collect(),
        Outcome::Forms(rows) => rows
            .iter()
            .map(|r| {
                let mut v = functor_json(&r.m, &namer);
                v["index"] = json!(digits(&r.index));
                v["rep"] = json!(r.rep.to_string());
                v
            })
            .collect(),
        Outcome::Check { title, mismatches } => json!({
            "title": title,
            "ok": mismatches.is_empty(),
            "mismatches": mismatches.iter().map(|(w, d)| json!({"what": w, "degree": d})).collect::<Vec<_>>(),
        }),
    };
    json!({
        "schema": SCHEMA,
        "command": job.command,
        "p": job.shape.p,
        "n": job.shape.n,
        "operands": job.operands.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
        "result": result,
    })
}

fn digits(t: &[u8]) -> String {
    t.iter().map(|b| b.to_string()).collect()
}

pub fn render(job: &Job, outcome: &Outcome) -> String {
    match job.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&to_value(job, outcome)).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Lewis => lewis(job, outcome),
        Format::Grid => match outcome {
            Outcome::Graded { title, columns } => grid(job, title, columns),
            _ => lewis(job, outcome),
        },
    }
}

fn lewis(job: &Job, outcome: &Outcome) -> String {
    let namer = Namer::new(job.shape);
    let name = |m: &MackeyFunctor| {
        let named = if m.shape == job.shape { namer.name(m) } else { Namer::new(m.shape).name(m) };
        named.unwrap_or_else(|| "-".into())
    };
    let mut out = String::new();
    match outcome {
        Outcome::Functor { title, m } => {
            writeln!(out, "{title} = {}", name(m)).unwrap();
            writeln!(out, "{}", render_lewis_block(m)).unwrap();
        }
        Outcome::Graded { title, columns } => {
            writeln!(out, "{title}").unwrap();
            for c in columns {
                if columns.len() > 1 || c.rep.is_some() {
                    writeln!(out, "V = {}", c.label).unwrap();
                }
                if c.values.is_zero() {
                    writeln!(out, "  zero in every degree").unwrap();
                }
                for (d, m) in c.values.iter() {
                    match &c.rep {
                        Some(rep) => writeln!(out, "{d:>5}  {:<16}  {:<12}  {}", format!("π_{{{}}}", pi_index(rep, d)), name(m), render_lewis(m)),
                        None => writeln!(out, "{d:>5}  {:<12}  {}", name(m), render_lewis(m)),
                    }
                    .unwrap();
                }
            }
        }
        Outcome::Forms(rows) => {
            writeln!(out, "Forms of Z over {}", job.shape).unwrap();
            for r in rows {
                writeln!(out, "{:<8}  V = {:<12}  {}", r.name, r.rep.to_string(), render_lewis(&r.m)).unwrap();
            }
        }
        Outcome::Check { title, mismatches } => {
            if mismatches.is_empty() {
                writeln!(out, "{title}: ok").unwrap();
            } else {
                writeln!(out, "{title}: {} mismatches", mismatches.len()).unwrap();
                for (what, d) in mismatches {
                    writeln!(out, "  {what} in degree {d}").unwrap();
                }
            }
        }
    }
    out
}

/// Degrees down, one column per computation; unnamed values get a key below the table.
fn grid(job: &Job, title: &str, columns: &[Column]) -> String {
    let namer = Namer::new(job.shape);
    let mut legend: Vec<String> = vec![];
    let degrees: BTreeSet<i64> = columns.iter().flat_map(|c| c.values.support()).collect();
    let single = columns.len() == 1 && columns[0].rep.is_some();
    let mut rows: Vec<Vec<String>> = vec![];
    let mut header = vec!["d".to_string()];
    if single {
        header.push("π index".into());
    }
    header.extend(columns.iter().map(|c| c.label.clone()));
    rows.push(header);
    for &d in degrees.iter().rev() {
        let mut row = vec![d.to_string()];
        if single {
            row.push(pi_index(columns[0].rep.as_ref().expect("single sphere column"), d));
        }
        for c in columns {
            row.push(match c.values.get(d) {
                None => ".".into(),
                Some(m) => namer.name(m).unwrap_or_else(|| {
                    let diagram = render_lewis(m);
                    let pos = legend.iter().position(|x| *x == diagram).unwrap_or_else(|| {
                        legend.push(diagram);
                        legend.len() - 1
                    });
                    format!("[{}]", pos + 1)
                }),
            });
        }
        rows.push(row);
    }
    let widths: Vec<usize> =
        (0..rows[0].len()).map(|j| rows.iter().map(|r| r[j].chars().count()).max().unwrap_or(0)).collect();
    let mut out = format!("{title}\n");
    for (i, r) in rows.iter().enumerate() {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        writeln!(out, "{}", cells.join(" | ")).unwrap();
        if i == 0 {
            writeln!(out, "{}", widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("-+-")).unwrap();
        }
    }
    for (i, diagram) in legend.iter().enumerate() {
        writeln!(out, "[{}] {diagram}", i + 1).unwrap();
    }
    out
}
