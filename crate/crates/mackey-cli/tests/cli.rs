use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mackey(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mackey")).args(args).output().expect("binary runs")
}

fn mackey_in(golden: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mackey"))
        .args(args)
        .env("MACKEY_GOLDEN_DIR", golden)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut argv = args.to_vec();
    argv.extend(["--format", "json"]);
    let o = mackey(&argv);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

/// `(degree, name)` for each nonzero degree of the first column.
fn named_degrees(v: &Value) -> Vec<(i64, String)> {
    v["result"][0]["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| (d["degree"].as_i64().unwrap(), d["name"].as_str().unwrap_or("-").to_string()))
        .collect()
}

fn pairs(xs: &[(i64, &str)]) -> Vec<(i64, String)> {
    xs.iter().map(|&(d, s)| (d, s.to_string())).collect()
}

#[test]
fn ext_of_b1_into_z_over_c3() {
    let v = json(&["ext", "--p", "3", "--n", "1", "B1", "Z"]);
    assert_eq!(v["schema"], "mackey/1");
    assert_eq!(named_degrees(&v), pairs(&[(3, "B1")]));
}

#[test]
fn box_with_z_echoes_the_operand() {
    for m in ["Z", "Z11+B01", "B10", "B01", "Z10^E", "Z[1]"] {
        let boxed = json(&["box", "--p", "3", "--n", "2", "Z", m]);
        let hom = json(&["hom", "--p", "3", "--n", "2", "Z", m]);
        assert_eq!(boxed["result"]["fingerprint"], hom["result"]["fingerprint"], "{m}");
        if !m.contains('^') && !m.contains('[') {
            assert_eq!(boxed["result"]["name"], m);
        }
    }
}

#[test]
fn tor_of_z10_with_itself_over_c4() {
    let v = json(&["tor", "--p", "2", "--n", "2", "Z10", "Z10"]);
    assert_eq!(named_degrees(&v), pairs(&[(0, "Z11+B01"), (1, "B10")]));
}

#[test]
fn sphere_minus_two_sigma_over_c2() {
    let v = json(&["sphere", "--p", "2", "--n", "1", "-2s"]);
    assert_eq!(named_degrees(&v), pairs(&[(-2, "Z1")]));
    assert_eq!(v["result"][0]["degrees"][0]["pi"], "2s-2");
    let grid = stdout(&mackey(&["sphere", "--p", "2", "--n", "1", "-2s", "--format", "grid"]));
    let row = grid.lines().find(|l| l.trim_start().starts_with("-2 |")).expect("row at -2");
    assert!(row.ends_with("Z1"), "{row}");
}

#[test]
fn sphere_of_zero_is_z_in_degree_zero() {
    let v = json(&["sphere", "0"]);
    assert_eq!(named_degrees(&v), pairs(&[(0, "Z")]));
}

#[test]
fn sphere_over_c4() {
    let v = json(&["sphere", "--p", "2", "--n", "2", "4s-3L0"]);
    assert_eq!(named_degrees(&v), pairs(&[(-2, "Z11"), (-1, "B11"), (0, "B01"), (1, "B10")]));
}

#[test]
fn selftest_cp2_grid() {
    let o = mackey(&["selftest", "--suite", "cp2", "--pmax", "5"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("[PASS]") && l.contains("cp2")), "{out}");
    assert!(!out.contains("golden"));
}

#[test]
fn exit_codes() {
    assert_eq!(mackey(&["ext", "--p", "3", "B1", "Q"]).status.code(), Some(2));
    assert_eq!(mackey(&["box", "--p", "4", "Z", "Z"]).status.code(), Some(2));
    assert_eq!(mackey(&["sphere", "--p", "3", "2s"]).status.code(), Some(2));
    assert_eq!(mackey(&["selftest", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(mackey(&["sphere", "--p", "3", "20L0"]).status.code(), Some(3));
    assert_eq!(mackey(&["forms", "--p", "3", "--n", "2"]).status.code(), Some(0));
}

#[test]
fn parse_errors_cite_the_token() {
    let o = mackey(&["sphere", "--p", "3", "--n", "2", "2L1-x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("'x'"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["tor", "--p", "2", "--n", "2", "Z10", "Z01", "--format", "json"][..],
        &["sphere", "--p", "3", "--n", "2", "2L1-3L0+1"][..],
        &["forms", "--p", "2", "--n", "3", "--format", "json"][..],
    ] {
        assert_eq!(mackey(args).stdout, mackey(args).stdout, "{args:?}");
    }
}

#[test]
fn parallel_grid_matches_sequential() {
    let base = ["sphere", "--p", "2", "--n", "2", "4s-3L0", "--and", "5s-3L0", "--and", "L1-L0", "--and", "-2s", "--format", "grid"];
    let seq = mackey(&[&base[..], &["--jobs", "1"]].concat());
    let par = mackey(&[&base[..], &["--jobs", "4"]].concat());
    assert!(seq.status.success());
    assert_eq!(seq.stdout, par.stdout);
}

#[test]
fn json_functors_round_trip_as_operands() {
    let dir = tempfile::tempdir().unwrap();
    let tor = json(&["tor", "--p", "2", "--n", "2", "Z10", "Z10"]);
    for (i, d) in tor["result"][0]["degrees"].as_array().unwrap().iter().enumerate() {
        let path = dir.path().join(format!("t{i}.json"));
        std::fs::write(&path, serde_json::to_string(&d["functor"]).unwrap()).unwrap();
        let path = path.to_str().unwrap();
        let again = json(&["box", "--p", "2", "--n", "2", "Z", path]);
        assert_eq!(again["result"]["fingerprint"], d["fingerprint"]);
        assert_eq!(again["result"]["functor"], d["functor"]);
    }
    let wrong = mackey(&["box", "--p", "3", "--n", "2", "Z", dir.path().join("t0.json").to_str().unwrap()]);
    assert_eq!(wrong.status.code(), Some(2));
}

fn copy_golden() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("golden");
    for entry in std::fs::read_dir(src).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    dir
}

#[test]
fn bundled_golden_files_pass() {
    let o = mackey(&["selftest", "--suite", "golden", "--diff"]);
    let out = stdout(&o);
    assert!(o.status.success(), "{out}");
    assert!(out.lines().filter(|l| l.starts_with("[PASS] golden")).count() >= 14);
}

#[test]
fn one_perturbed_invariant_factor_is_one_named_failure() {
    let dir = copy_golden();
    let path = dir.path().join("ext-c3-b1-z.json");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    let level = &mut v["result"][0]["degrees"][0]["fingerprint"]["levels"][1];
    assert_eq!(level, "Z/3");
    *level = "Z/9".into();
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();

    let o = mackey_in(dir.path(), &["selftest", "--suite", "golden"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let fails: Vec<&str> = out.lines().filter(|l| l.starts_with("[FAIL]")).collect();
    assert_eq!(fails.len(), 1, "{out}");
    assert!(fails[0].starts_with("[FAIL] golden ext-c3-b1-z:"), "{}", fails[0]);
    assert!(!out.contains("[MISSING]"));
}

#[test]
fn a_perturbed_matrix_shows_only_under_diff() {
    let dir = copy_golden();
    let path = dir.path().join("hom-c3-b1-z.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["result"]["functor"]["note"] = "edited".into();
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();

    assert!(mackey_in(dir.path(), &["selftest", "--suite", "golden"]).status.success());
    let o = mackey_in(dir.path(), &["selftest", "--suite", "golden", "--diff"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("[FAIL] golden hom-c3-b1-z")).count(), 1, "{out}");
}

#[test]
fn missing_golden_files_are_reported_separately() {
    let dir = copy_golden();
    std::fs::remove_file(dir.path().join("forms-c8.json")).unwrap();
    let o = mackey_in(dir.path(), &["selftest", "--suite", "golden"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("[MISSING] golden forms-c8")), "{out}");
    assert!(!out.contains("[FAIL]"), "{out}");
}

#[test]
fn bless_then_check_in_a_fresh_directory() {
    let dir = tempfile::tempdir().unwrap();
    let golden = dir.path().join("g");
    assert!(mackey_in(&golden, &["selftest", "--bless"]).status.success());
    assert!(mackey_in(&golden, &["selftest", "--suite", "golden", "--diff"]).status.success());
}
