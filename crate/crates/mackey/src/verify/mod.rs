//! Self-verification: fifteen checks against closed forms, worked examples
//! and cross-engine agreement. Shared by the test suite and `mackey selftest`.

pub mod closed;
pub mod props;

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::boxhom::box_product;
use crate::burnside::{lift_covariant, EquivMatrix, SpanWord};
use crate::homalg::{ext_unchecked, ext_z, pullback_compat_check, tor_unchecked, tor_z, RESOLUTION_LENGTH};
use crate::intlin::{FgAbGroup, IntMatrix};
use crate::mackey::{
    b_form, constant_z, direct_sum_m, dual_levelwise, fingerprint, form_z, forms, free_quotient, full_catalog,
    kernel_m, torsion_catalog, torsion_part, z_star, DualMode, GradedMackey, MackeyFunctor, Shape,
};
use crate::spheres::{anderson_check, bredon_homology, ext_sphere_crosscheck, form_to_rep, RepLabel};

/// Result of one check.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: usize,
    pub key: &'static str,
    pub title: &'static str,
    pub passed: bool,
    /// Number of comparisons made, or the first failures.
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "[{status}] {:>2} {:<12} {:<44} {:>8.2}s  {}",
            self.id,
            self.key,
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// Knobs for the self test.
#[derive(Clone, Copy, Debug)]
pub struct Options {
    /// Largest prime used; checks drop primes above it.
    pub pmax: u64,
    /// Seed for the generated inputs of the property check.
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { pmax: 5, seed: 0x5eed }
    }
}

/// `(id, key, title, time budget in seconds)`.
pub const CRITERIA: [(usize, &str, &str, Option<u64>); 15] = [
    (1, "ext-cp", "Ext table over C_p", None),
    (2, "ext-torsion", "Ext(M, Z) for torsion M", Some(30)),
    (3, "ext-forms", "Ext(Z_t, Z) for forms over C_{p^2}", None),
    (4, "tor", "Tor and box product examples", None),
    (5, "gldim", "Ext and Tor vanish in degrees 4 and 5", None),
    (6, "sphere-cp", "sphere grid over C_p", Some(60)),
    (7, "sphere-c2", "sphere grid over C_2", None),
    (8, "cp2", "sphere grid over C_{p^2}", Some(600)),
    (9, "c4", "non-orientable example over C_4", None),
    (10, "twist", "twist invariance and S^{-λ}", None),
    (11, "formz", "forms of Z from spheres", None),
    (12, "crosscheck", "Ext/Tor against spheres", None),
    (13, "anderson", "Anderson duality on the C_{p^2} grid", None),
    (14, "pullback", "pullback of Ext/Tor tables", None),
    (15, "props", "axioms, Smith forms, box laws", Some(120)),
];

/// Looks up a criterion by number or key.
pub fn lookup(name: &str) -> Option<usize> {
    CRITERIA.iter().find(|c| c.1 == name || c.0.to_string() == name).map(|c| c.0)
}

/// Collects comparisons and the first few failures.
struct Checker {
    count: usize,
    failures: Vec<String>,
}

impl Checker {
    fn new() -> Self {
        Checker { count: 0, failures: vec![] }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn graded(&mut self, got: Result<GradedMackey, String>, want: &GradedMackey, what: impl Fn() -> String) {
        match got {
            Ok(g) => {
                let (a, b) = (g.fingerprints(), want.fingerprints());
                let bad: Vec<i64> = a.keys().chain(b.keys()).filter(|d| a.get(d) != b.get(d)).copied().collect();
                self.check(bad.is_empty(), || format!("{} differs in degrees {bad:?}", what()));
            }
            Err(e) => self.check(false, || format!("{}: {e}", what())),
        }
    }

    fn same(&mut self, a: &MackeyFunctor, b: &MackeyFunctor, what: impl FnOnce() -> String) {
        self.check(fingerprint(a) == fingerprint(b), what);
    }

    fn detail(&self) -> String {
        match self.failures.len() {
            0 => format!("{} comparisons", self.count),
            k => {
                let shown: Vec<&str> = self.failures.iter().take(3).map(String::as_str).collect();
                format!("{k} of {} failed: {}", self.count, shown.join("; "))
            }
        }
    }
}

fn sh(p: u64, n: usize) -> Shape {
    Shape::new(p, n).expect("valid shape")
}

fn primes(opts: &Options, list: &[u64]) -> Vec<u64> {
    list.iter().copied().filter(|&p| p <= opts.pmax).collect()
}

fn graded(shape: Shape, items: &[(i64, MackeyFunctor)]) -> GradedMackey {
    let mut g = GradedMackey::new(shape, 0, 0);
    for (d, m) in items {
        let m = match g.get(*d) {
            Some(old) => direct_sum_m(old, m),
            None => m.clone(),
        };
        g.insert(*d, m);
    }
    g
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn sphere(shape: Shape, text: &str) -> Result<GradedMackey, String> {
    let v = RepLabel::parse(shape, text).map_err(err)?;
    bredon_homology(&v).map_err(err)
}

fn c1_ext_cp(opts: &Options, c: &mut Checker) {
    for p in primes(opts, &[2, 3, 5]) {
        let s = sh(p, 1);
        let b1 = b_form(s, &[1]).expect("n = 1");
        let z1 = form_z(s, &[1]).expect("n = 1");
        let table = [
            (constant_z(s), vec![(3, b1.clone())]),
            (b1.clone(), vec![(0, b1.clone()), (3, b1.clone())]),
            (z1, vec![(1, b1.clone())]),
        ];
        for (n, want) in table {
            let t = Instant::now();
            c.graded(ext_z(&b1, &n).map_err(err), &graded(s, &want), || format!("Ext(B1, ·) p = {p}"));
            c.check(t.elapsed() < Duration::from_secs(1), || format!("Ext(B1, ·) p = {p} took over 1 s"));
        }
    }
}

fn c2_ext_torsion(opts: &Options, c: &mut Checker) {
    for p in primes(opts, &[2, 3]) {
        for n in 1..=2 {
            let s = sh(p, n);
            for (name, m) in torsion_catalog(s) {
                let want = graded(s, &[(3, dual_levelwise(&m, DualMode::E))]);
                c.graded(ext_z(&m, &constant_z(s)).map_err(err), &want, || format!("Ext({name}, Z) p = {p} n = {n}"));
            }
        }
    }
}

fn c3_ext_forms(opts: &Options, c: &mut Checker) {
    for p in primes(opts, &[2, 3]) {
        let s = sh(p, 2);
        for (name, m) in forms(s) {
            let t: Vec<u8> = name[1..].bytes().map(|b| b - b'0').collect();
            let be = dual_levelwise(&b_form(s, &t).expect("n = 2"), DualMode::E);
            let want = graded(s, &[(0, constant_z(s)), (2, be)]);
            c.graded(ext_z(&m, &constant_z(s)).map_err(err), &want, || format!("Ext({name}, Z) p = {p}"));
        }
    }
}

fn c4_tor(opts: &Options, c: &mut Checker) {
    for p in primes(opts, &[2, 3, 5]) {
        for n in 1..=2 {
            let s = sh(p, n);
            let want = graded(s, &[(0, z_star(s)), (1, b_form(s, &vec![1; n]).expect("length n"))]);
            c.graded(tor_z(&z_star(s), &z_star(s)).map_err(err), &want, || format!("Tor(Z*, Z*) p = {p} n = {n}"));
        }
        let s = sh(p, 2);
        let z10 = form_z(s, &[1, 0]).expect("n = 2");
        let sum = direct_sum_m(&form_z(s, &[1, 1]).expect("n = 2"), &b_form(s, &[0, 1]).expect("n = 2"));
        let want = graded(s, &[(0, sum.clone()), (1, b_form(s, &[1, 0]).expect("n = 2"))]);
        c.graded(tor_z(&z10, &z10).map_err(err), &want, || format!("Tor(Z10, Z10) p = {p}"));
        match box_product(&z10, &z10) {
            Ok(b) => c.same(&b, &sum, || format!("Z10 □ Z10 p = {p}")),
            Err(e) => c.check(false, || format!("Z10 □ Z10 p = {p}: {e}")),
        }
    }
}

fn c5_gldim(opts: &Options, c: &mut Checker) {
    for p in primes(opts, &[2, 3]) {
        for n in 1..=2 {
            let cat = full_catalog(sh(p, n));
            for (a, m) in &cat {
                for (b, k) in &cat {
                    for (what, r) in [
                        ("Ext", ext_unchecked(m, k, RESOLUTION_LENGTH)),
                        ("Tor", tor_unchecked(m, k, RESOLUTION_LENGTH)),
                    ] {
                        match r {
                            Ok(g) => c.check(g.degree(4).is_zero() && g.degree(5).is_zero(), || {
                                format!("{what}({a}, {b}) p = {p} n = {n} is nonzero above 3")
                            }),
                            Err(e) => c.check(false, || format!("{what}({a}, {b}): {e}")),
                        }
                    }
                }
            }
        }
    }
}

fn c6_sphere_cp(opts: &Options, c: &mut Checker) {
    for p in primes(opts, &[3, 5]) {
        let s = sh(p, 1);
        for a in -4..=4 {
            for b in -8..=8 {
                let got = sphere(s, &format!("{a}L0{b:+}"));
                c.graded(got, &closed::cp_sphere(s, a, b), || format!("S^({a}λ{b:+}) p = {p}"));
            }
        }
    }
}

fn c7_sphere_c2(_: &Options, c: &mut Checker) {
    let s = sh(2, 1);
    for k in -6..=6 {
        for b in -6..=6 {
            let got = sphere(s, &format!("{k}s{b:+}"));
            c.graded(got, &closed::c2_sphere(s, k, b), || format!("S^({k}σ{b:+})"));
        }
    }
}

fn c8_cp2(opts: &Options, c: &mut Checker) {
    for p in primes(opts, &[2, 3, 5]) {
        let s = sh(p, 2);
        for n in -3..=3 {
            for m in -3..=3 {
                let got = bredon_homology(&RepLabel::lambda(s, 1, n).add(&RepLabel::lambda(s, 0, m))).map_err(err);
                c.graded(got, &closed::cp2_sphere(s, n, m), || format!("S^({n}λ1{m:+}λ0) p = {p}"));
            }
        }
    }
}

/// `Z/2` at the middle level of `C_4` and zero elsewhere.
fn bullet_bar(s: Shape) -> MackeyFunctor {
    let z = IntMatrix::zeros;
    let levels = vec![FgAbGroup::zero(), FgAbGroup::cyclic(2), FgAbGroup::zero()];
    let id = || IntMatrix::identity(1);
    MackeyFunctor::new(s, levels, vec![z(0, 1), z(1, 0)], vec![z(1, 0), z(0, 1)], vec![z(0, 0), id(), z(0, 0)])
        .expect("valid functor")
}

fn c9_c4(_: &Options, c: &mut Checker) {
    let s = sh(2, 2);
    let b = |t: [u8; 2]| b_form(s, &t).expect("n = 2");
    let z11 = form_z(s, &[1, 1]).expect("n = 2");
    // The four listed values.
    let want = graded(s, &[(-2, z11.clone()), (-1, b([1, 1])), (0, b([0, 1])), (1, b([1, 0]))]);
    c.graded(sphere(s, "4s-3L0"), &want, || "S^(4σ-3λ0)".into());

    // One more σ: kernel of the transfer from the C_2-induced Z_{1,1} is the
    // free part of M_1, which sits on top of • in a nonsplit extension.
    let fold = EquivMatrix::word(s, SpanWord { source: 1, target: 2, t: 0 });
    let four_bar = match lift_covariant(&z11, &fold) {
        Ok(tr) => kernel_m(&tr),
        Err(e) => return c.check(false, || format!("transfer: {e}")),
    };
    let h = match sphere(s, "5s-3L0") {
        Ok(h) => h,
        Err(e) => return c.check(false, || format!("S^(5σ-3λ0): {e}")),
    };
    let m1 = h.degree(-1);
    c.same(&torsion_part(&m1), &b([0, 1]), || "torsion of M1".into());
    c.same(&free_quotient(&m1), &four_bar, || "free quotient of M1".into());
    c.check(fingerprint(&m1) != fingerprint(&direct_sum_m(&b([0, 1]), &four_bar)), || "M1 splits".into());
    c.same(&h.degree(0), &direct_sum_m(&b([0, 1]), &bullet_bar(s)), || "M2".into());
    c.same(&h.degree(1), &b([0, 1]), || "degree 1".into());
    c.same(&h.degree(2), &b([1, 0]), || "degree 2".into());
    c.check(h.support() == vec![-1, 0, 1, 2], || format!("support {:?}", h.support()));

    // The label as printed, 3σ - 3λ0, is two degrees lower with a smaller M_2.
    match sphere(s, "3s-3L0") {
        Ok(h3) => {
            c.same(&h3.degree(-3), &m1, || "S^(3σ-3λ0) in degree -3".into());
            c.same(&h3.degree(-2), &bullet_bar(s), || "S^(3σ-3λ0) in degree -2".into());
            c.same(&h3.degree(-1), &b([0, 1]), || "S^(3σ-3λ0) in degree -1".into());
            c.same(&h3.degree(0), &b([1, 0]), || "S^(3σ-3λ0) in degree 0".into());
            c.check(h3.support() == vec![-3, -2, -1, 0], || format!("support {:?}", h3.support()));
        }
        Err(e) => c.check(false, || format!("S^(3σ-3λ0): {e}")),
    }
}

fn c10_twist(_: &Options, c: &mut Checker) {
    for (p, n) in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2)] {
        let s = sh(p, n);
        for k in 0..n {
            let base = bredon_homology(&RepLabel::lambda(s, k, 1)).map_err(err);
            let Ok(base) = base else {
                return c.check(false, || format!("λ_{k} p = {p}"));
            };
            for r in (2..=7).filter(|r| r % p != 0) {
                let mut v = RepLabel::lambda(s, k, 1);
                v.twist[k] = r;
                c.graded(bredon_homology(&v).map_err(err), &base, || format!("λ({r}·p^{k}) p = {p} n = {n}"));
            }
        }
    }
    for (p, n) in [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (2, 3)] {
        let s = sh(p, n);
        let want = graded(s, &[(-2, z_star(s))]);
        c.graded(sphere(s, "-L0"), &want, || format!("S^(-λ) p = {p} n = {n}"));
    }
}

fn c11_formz(opts: &Options, c: &mut Checker) {
    for p in primes(opts, &[2, 3]) {
        for n in 1..=3 {
            let s = sh(p, n);
            for (name, m) in forms(s) {
                match form_to_rep(&m) {
                    Ok(v) => {
                        let want = graded(s, &[(0, m.clone())]);
                        c.graded(bredon_homology(&v).map_err(err), &want, || format!("{name} from {v}"));
                    }
                    Err(e) => c.check(false, || format!("{name}: {e}")),
                }
            }
        }
    }
    let s = sh(2, 3);
    let v = form_to_rep(&form_z(s, &[1, 0, 1]).expect("n = 3")).map_err(err);
    let want = RepLabel::parse(s, "-L0+L1-L2+2").expect("valid label");
    c.check(v.as_ref() == Ok(&want), || format!("Z101 over C_8 gave {v:?}"));
}

fn c12_crosscheck(opts: &Options, c: &mut Checker) {
    for p in primes(opts, &[2, 3]) {
        let fs = forms(sh(p, 2));
        for (a, m) in &fs {
            for (b, n) in &fs {
                match ext_sphere_crosscheck(m, n) {
                    Ok(r) => c.check(r.is_ok(), || format!("({a}, {b}) p = {p}: {:?}", r.mismatches)),
                    Err(e) => c.check(false, || format!("({a}, {b}) p = {p}: {e}")),
                }
            }
        }
    }
}

fn c13_anderson(opts: &Options, c: &mut Checker) {
    for p in primes(opts, &[2, 3, 5]) {
        let s = sh(p, 2);
        for n in -3..=3 {
            for m in -3..=3 {
                let v = RepLabel::lambda(s, 1, n).add(&RepLabel::lambda(s, 0, m));
                match anderson_check(&v) {
                    Ok(r) => c.check(r.is_ok(), || format!("{v} p = {p}: {:?}", r.mismatches)),
                    Err(e) => c.check(false, || format!("{v} p = {p}: {e}")),
                }
            }
        }
    }
}

fn c14_pullback(opts: &Options, c: &mut Checker) {
    for p in primes(opts, &[2, 3]) {
        let cat = full_catalog(sh(p, 1));
        for (a, m) in &cat {
            for (b, n) in &cat {
                match pullback_compat_check(m, n, 1) {
                    Ok(r) => c.check(r.is_ok(), || format!("({a}, {b}) p = {p}: {:?}", r.mismatches)),
                    Err(e) => c.check(false, || format!("({a}, {b}) p = {p}: {e}")),
                }
            }
        }
    }
}

/// Random inputs for the property check from a seeded generator.
fn c15_props(opts: &Options, c: &mut Checker) {
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let shapes: Vec<Shape> =
        [(2, 1), (3, 1), (2, 2), (3, 2)].iter().filter(|s| s.0 <= opts.pmax).map(|&(p, n)| sh(p, n)).collect();
    if shapes.is_empty() {
        return;
    }
    for i in 0..200 {
        let shape = shapes[rng.gen_range(0..shapes.len())];
        let mut pick = |k: usize| (0..k).map(|_| rng.gen_range(0..64)).collect::<Vec<usize>>();
        let (left, right) = (pick(1 + i % 3), pick(1 + (i / 3) % 2));
        let coeffs = (0..12).map(|_| rng.gen_range(-3..=3)).collect();
        let r = props::Recipe { shape, left, right, coeffs };
        let out = props::recipe_check(&r);
        c.check(out.is_ok(), || format!("{r:?}: {}", out.unwrap_err()));
    }
    for _ in 0..500 {
        let (rows, cols) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let data: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-50..=50)).collect();
        let a = IntMatrix::from_i64(rows, cols, &data);
        let out = props::snf_check(&a);
        c.check(out.is_ok(), || format!("{data:?}: {}", out.unwrap_err()));
    }
    for &s in &shapes {
        let bad = props::box_laws(s);
        c.check(bad.is_empty(), || format!("{s}: {}", bad.join(", ")));
    }
}

/// Runs criterion `id`.
pub fn run(id: usize, opts: &Options) -> Outcome {
    let &(_, key, title, budget) = CRITERIA.iter().find(|c| c.0 == id).expect("criterion id in 1..=15");
    let f: fn(&Options, &mut Checker) = match id {
        1 => c1_ext_cp,
        2 => c2_ext_torsion,
        3 => c3_ext_forms,
        4 => c4_tor,
        5 => c5_gldim,
        6 => c6_sphere_cp,
        7 => c7_sphere_c2,
        8 => c8_cp2,
        9 => c9_c4,
        10 => c10_twist,
        11 => c11_formz,
        12 => c12_crosscheck,
        13 => c13_anderson,
        14 => c14_pullback,
        _ => c15_props,
    };
    let mut c = Checker::new();
    let start = Instant::now();
    f(opts, &mut c);
    let elapsed = start.elapsed();
    let budget = budget.map(Duration::from_secs);
    let in_time = budget.map_or(true, |b| elapsed <= b);
    let mut detail = c.detail();
    if !in_time {
        detail.push_str(&format!(" (over the {}s budget)", budget.unwrap_or_default().as_secs()));
    }
    Outcome { id, key, title, passed: c.failures.is_empty() && in_time, detail, elapsed, budget }
}

/// Runs every criterion in order.
pub fn run_all(opts: &Options) -> Vec<Outcome> {
    CRITERIA.iter().map(|c| run(c.0, opts)).collect()
}
