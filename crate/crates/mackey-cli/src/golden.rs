//! Golden files: stored JSON output of fixed invocations, compared by
//! fingerprint first and by matrix on request.

use std::path::{Path, PathBuf};

use clap::Parser;
use mackey::verify::{self, Options, CRITERIA};
use serde_json::Value;

use crate::job::{CliError, Job};
use crate::{output, Cli};

/// `(file stem, arguments)`.
const MANIFEST: &[(&str, &[&str])] = &[
    ("ext-c3-b1-z", &["ext", "--p", "3", "--n", "1", "B1", "Z"]),
    ("ext-c4-z01-b10", &["ext", "--p", "2", "--n", "2", "Z01", "B10"]),
    ("ext-c9-z11-z", &["ext", "--p", "3", "--n", "2", "Z11", "Z"]),
    ("tor-c4-z10-z10", &["tor", "--p", "2", "--n", "2", "Z10", "Z10"]),
    ("box-c9-z-sum", &["box", "--p", "3", "--n", "2", "Z", "Z11+B01"]),
    ("box-c4-z10-z10", &["box", "--p", "2", "--n", "2", "Z10", "Z10"]),
    ("hom-c3-b1-z", &["hom", "--p", "3", "--n", "1", "B1", "Z"]),
    ("sphere-c2-minus-2s", &["sphere", "--p", "2", "--n", "1", "-2s"]),
    ("sphere-c4-4s-3l0", &["sphere", "--p", "2", "--n", "2", "4s-3L0"]),
    ("sphere-c4-5s-3l0", &["sphere", "--p", "2", "--n", "2", "5s-3L0"]),
    ("sphere-c9-2l1-3l0", &["sphere", "--p", "3", "--n", "2", "2L1-3L0"]),
    ("sphere-c5-minus-3l0", &["sphere", "--p", "5", "--n", "1", "-3L0+1"]),
    ("forms-c8", &["forms", "--p", "2", "--n", "3"]),
    ("pullback-c3-b1", &["pullback", "--p", "3", "--n", "1", "B1"]),
];

pub fn golden_dir() -> PathBuf {
    match std::env::var_os("MACKEY_GOLDEN_DIR") {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("golden"),
    }
}

fn compute(args: &[&str]) -> Result<Value, CliError> {
    let argv = ["mackey"].iter().chain(args).chain(&["--format", "json"]).copied();
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Invalid(e.to_string()))?;
    let job = Job::from_cli(&cli)?;
    let outcome = job.compute(&cli)?;
    Ok(output::to_value(&job, &outcome))
}

/// Every `(path, value)` under a key named `key`.
fn collect<'a>(v: &'a Value, key: &str, path: String, out: &mut Vec<(String, &'a Value)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = format!("{path}.{k}");
                if k == key {
                    out.push((p, x));
                } else {
                    collect(x, key, p, out);
                }
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                collect(x, key, format!("{path}[{i}]"), out);
            }
        }
        _ => {}
    }
}

/// First place where `want` and `got` differ.
fn first_difference(want: &Value, got: &Value, path: String) -> Option<String> {
    match (want, got) {
        (Value::Object(a), Value::Object(b)) => {
            let keys: std::collections::BTreeSet<&String> = a.keys().chain(b.keys()).collect();
            keys.into_iter().find_map(|k| match (a.get(k), b.get(k)) {
                (Some(x), Some(y)) => first_difference(x, y, format!("{path}.{k}")),
                _ => Some(format!("{path}.{k}")),
            })
        }
        (Value::Array(a), Value::Array(b)) if a.len() == b.len() => {
            a.iter().zip(b).enumerate().find_map(|(i, (x, y))| first_difference(x, y, format!("{path}[{i}]")))
        }
        _ if want == got => None,
        _ => Some(path),
    }
}

fn compare_key(want: &Value, got: &Value, key: &str) -> Option<String> {
    let (mut a, mut b) = (vec![], vec![]);
    collect(want, key, "$".into(), &mut a);
    collect(got, key, "$".into(), &mut b);
    if a.len() != b.len() {
        return Some(format!("{} {key} entries stored, {} computed", a.len(), b.len()));
    }
    a.iter().zip(&b).find_map(|((pa, x), (pb, y))| {
        if pa != pb {
            Some(format!("{key} moved from {pa} to {pb}"))
        } else {
            first_difference(x, y, pa.clone()).map(|at| format!("{key} differs at {at}"))
        }
    })
}

enum Verdict {
    Pass,
    Missing(PathBuf),
    Mismatch(String),
}

fn check(dir: &Path, stem: &str, args: &[&str], diff: bool) -> Verdict {
    let path = dir.join(format!("{stem}.json"));
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(_) => return Verdict::Missing(path),
    };
    let want: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => return Verdict::Mismatch(format!("unreadable: {e}")),
    };
    let got = match compute(args) {
        Ok(v) => v,
        Err(e) => return Verdict::Mismatch(format!("command failed: {e}")),
    };
    let keys: &[&str] = if diff { &["fingerprint", "functor"] } else { &["fingerprint"] };
    match keys.iter().find_map(|k| compare_key(&want, &got, k)) {
        Some(why) => Verdict::Mismatch(why),
        None => Verdict::Pass,
    }
}

pub fn bless(dir: &Path) -> Result<usize, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Failed(format!("{}: {e}", dir.display())))?;
    for (stem, args) in MANIFEST {
        let v = compute(args)?;
        let mut text = serde_json::to_string_pretty(&v).expect("values serialize");
        text.push('\n');
        let path = dir.join(format!("{stem}.json"));
        std::fs::write(&path, text).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))?;
    }
    Ok(MANIFEST.len())
}

pub fn selftest(suite: Option<&str>, pmax: u64, bless_files: bool, diff: bool) -> Result<(), CliError> {
    let dir = golden_dir();
    if bless_files {
        let k = bless(&dir)?;
        println!("wrote {k} golden files to {}", dir.display());
        return Ok(());
    }
    let ids: Vec<usize> = match suite {
        None => CRITERIA.iter().map(|c| c.0).collect(),
        Some("golden") => vec![],
        Some(key) => vec![verify::lookup(key).ok_or_else(|| {
            let keys: Vec<&str> = CRITERIA.iter().map(|c| c.1).collect();
            CliError::Invalid(format!("unknown suite '{key}'; expected golden, {}", keys.join(", ")))
        })?],
    };
    let opts = Options { pmax, ..Options::default() };
    let (mut failed, mut missing) = (0, 0);
    for id in ids {
        let out = verify::run(id, &opts);
        println!("{out}");
        failed += usize::from(!out.passed);
    }
    if matches!(suite, None | Some("golden")) {
        for (stem, args) in MANIFEST {
            match check(&dir, stem, args, diff) {
                Verdict::Pass => println!("[PASS] golden {stem}"),
                Verdict::Missing(path) => {
                    missing += 1;
                    println!("[MISSING] golden {stem}: no file at {}", path.display());
                }
                Verdict::Mismatch(why) => {
                    failed += 1;
                    println!("[FAIL] golden {stem}: {why}");
                }
            }
        }
    }
    match (failed, missing) {
        (0, 0) => {
            println!("selftest: all passed");
            Ok(())
        }
        _ => Err(CliError::Failed(format!("selftest: {failed} failed, {missing} golden files missing"))),
    }
}
