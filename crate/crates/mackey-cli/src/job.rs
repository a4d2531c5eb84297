use std::fmt;
use std::path::PathBuf;

use mackey::boxhom::{box_product, internal_hom};
use mackey::homalg::{ext_z, tor_z, HomalgError};
use mackey::mackey::{
    forms, from_json, parse_catalog, pullback_psi, GradedMackey, MackeyError, MackeyFunctor, Shape,
};
use mackey::spheres::{anderson_check, bredon_homology, ext_sphere_crosscheck, form_index, form_to_rep, RepLabel, SphereError};
use rayon::prelude::*;

use crate::output;
use crate::{Cli, Command, Format};

/// Largest total multiplicity of nontrivial summands accepted in a sphere label.
const MAX_SUMMANDS: i64 = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad operand or flag; exit code 2.
    Invalid(String),
    /// Input beyond what the engine will attempt; exit code 3.
    Resource(String),
    /// A check ran and failed, or an internal error; exit code 1.
    Failed(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(s) | CliError::Resource(s) | CliError::Failed(s) => write!(f, "{s}"),
        }
    }
}

impl From<MackeyError> for CliError {
    fn from(e: MackeyError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<HomalgError> for CliError {
    fn from(e: HomalgError) -> Self {
        match e {
            HomalgError::Mackey(e) => e.into(),
            HomalgError::AboveTopDegree { .. } => CliError::Resource(e.to_string()),
            HomalgError::TooShort(_) => CliError::Failed(e.to_string()),
        }
    }
}

impl From<SphereError> for CliError {
    fn from(e: SphereError) -> Self {
        match e {
            SphereError::Parse { .. }
            | SphereError::Twist(_)
            | SphereError::Level(_)
            | SphereError::NoSign(_)
            | SphereError::NotActual(_)
            | SphereError::NotAForm(_) => CliError::Invalid(e.to_string()),
            SphereError::Mackey(e) => e.into(),
            SphereError::Homalg(e) => e.into(),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operand {
    Catalog(String),
    Json(PathBuf),
    Label(String),
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Catalog(s) | Operand::Label(s) => write!(f, "{s}"),
            Operand::Json(p) => write!(f, "{}", p.display()),
        }
    }
}

fn functor_operand(text: &str) -> Operand {
    if text.ends_with(".json") || text.contains('/') {
        Operand::Json(PathBuf::from(text))
    } else {
        Operand::Catalog(text.to_string())
    }
}

/// One command with its operands resolved and checked.
#[derive(Debug, Clone)]
pub struct Job {
    pub command: &'static str,
    pub shape: Shape,
    pub operands: Vec<Operand>,
    pub format: Format,
    pub jobs: usize,
}

pub enum Outcome {
    Functor { title: String, m: MackeyFunctor },
    Graded { title: String, columns: Vec<Column> },
    Forms(Vec<FormRow>),
    Check { title: String, mismatches: Vec<(String, i64)> },
}

pub struct Column {
    pub label: String,
    pub values: GradedMackey,
    /// The sphere's representation, for the π-graded index.
    pub rep: Option<RepLabel>,
}

pub struct FormRow {
    pub name: String,
    pub index: Vec<u8>,
    pub rep: RepLabel,
    pub m: MackeyFunctor,
}

impl Job {
    pub fn from_cli(cli: &Cli) -> Result<Job, CliError> {
        let shape = Shape::new(cli.p, cli.n)?;
        let (command, operands) = match &cli.command {
            Command::Box { left, right } => ("box", vec![functor_operand(left), functor_operand(right)]),
            Command::Hom { left, right } => ("hom", vec![functor_operand(left), functor_operand(right)]),
            Command::Ext { left, right } => ("ext", vec![functor_operand(left), functor_operand(right)]),
            Command::Tor { left, right } => ("tor", vec![functor_operand(left), functor_operand(right)]),
            Command::Crosscheck { left, right } => ("crosscheck", vec![functor_operand(left), functor_operand(right)]),
            Command::Pullback { left, .. } => ("pullback", vec![functor_operand(left)]),
            Command::Sphere { label, more, .. } => {
                ("sphere", std::iter::once(label).chain(more).map(|l| Operand::Label(l.clone())).collect())
            }
            Command::Duality { label } => ("duality", vec![Operand::Label(label.clone())]),
            Command::Forms => ("forms", vec![]),
            Command::Selftest { .. } => return Err(CliError::Failed("selftest is not a job".into())),
        };
        if cli.jobs == 0 {
            return Err(CliError::Invalid("--jobs must be at least 1".into()));
        }
        Ok(Job { command, shape, operands, format: cli.format, jobs: cli.jobs })
    }

    fn functor(&self, op: &Operand) -> Result<MackeyFunctor, CliError> {
        let m = match op {
            Operand::Catalog(name) => parse_catalog(self.shape, name).map_err(|e| CliError::Invalid(e.to_string()))?,
            Operand::Json(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
                let v = serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
                let m = from_json(&v).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
                if m.shape != self.shape {
                    return Err(CliError::Invalid(format!("{} is over {}, not {}", path.display(), m.shape, self.shape)));
                }
                m
            }
            Operand::Label(l) => return Err(CliError::Invalid(format!("'{l}' is a label, not a functor"))),
        };
        let bad = m.validate();
        if !bad.is_empty() {
            return Err(CliError::Invalid(format!("{op}: {}", bad[0])));
        }
        if !m.is_cohomological() {
            return Err(CliError::Invalid(format!("{op}: not cohomological")));
        }
        Ok(m)
    }

    fn label(&self, op: &Operand) -> Result<RepLabel, CliError> {
        let v = RepLabel::parse(self.shape, &op.to_string())?;
        let weight: i64 = v.a.iter().map(|c| c.abs()).sum::<i64>() + v.s.abs();
        if weight > MAX_SUMMANDS {
            return Err(CliError::Resource(format!(
                "{v} has {weight} nontrivial summands; the limit is {MAX_SUMMANDS}"
            )));
        }
        Ok(v)
    }

    fn pair(&self) -> Result<(MackeyFunctor, MackeyFunctor), CliError> {
        Ok((self.functor(&self.operands[0])?, self.functor(&self.operands[1])?))
    }

    pub fn compute(&self, cli: &Cli) -> Result<Outcome, CliError> {
        let ops: Vec<String> = self.operands.iter().map(|o| o.to_string()).collect();
        Ok(match &cli.command {
            Command::Box { .. } => {
                let (m, n) = self.pair()?;
                Outcome::Functor { title: format!("{} □ {} over {}", ops[0], ops[1], self.shape), m: box_product(&m, &n)? }
            }
            Command::Hom { .. } => {
                let (m, n) = self.pair()?;
                Outcome::Functor { title: format!("Hom({}, {}) over {}", ops[0], ops[1], self.shape), m: internal_hom(&m, &n)? }
            }
            Command::Ext { .. } => {
                let (m, n) = self.pair()?;
                let values = ext_z(&m, &n)?;
                let label = format!("Ext^*({}, {}) over {}", ops[0], ops[1], self.shape);
                Outcome::Graded { title: label.clone(), columns: vec![Column { label, values, rep: None }] }
            }
            Command::Tor { .. } => {
                let (m, n) = self.pair()?;
                let values = tor_z(&m, &n)?;
                let label = format!("Tor_*({}, {}) over {}", ops[0], ops[1], self.shape);
                Outcome::Graded { title: label.clone(), columns: vec![Column { label, values, rep: None }] }
            }
            Command::Pullback { k, .. } => {
                let m = self.functor(&self.operands[0])?;
                Outcome::Functor { title: format!("Ψ*({}) over C_{}^{}", ops[0], self.shape.p, self.shape.n + k), m: pullback_psi(&m, *k)? }
            }
            Command::Sphere { range, .. } => {
                let labels = self.operands.iter().map(|o| self.label(o)).collect::<Result<Vec<_>, _>>()?;
                let window = range.as_deref().map(parse_range).transpose()?;
                let compute = |v: &RepLabel| bredon_homology(v).map(|h| clip(h, window));
                let results: Vec<Result<GradedMackey, SphereError>> = if self.format == Format::Grid && self.jobs > 1 {
                    let pool = rayon::ThreadPoolBuilder::new()
                        .num_threads(self.jobs)
                        .build()
                        .map_err(|e| CliError::Failed(e.to_string()))?;
                    pool.install(|| labels.par_iter().map(compute).collect())
                } else {
                    labels.iter().map(compute).collect()
                };
                let mut columns = vec![];
                for (v, h) in labels.into_iter().zip(results) {
                    columns.push(Column { label: v.to_string(), values: h?, rep: Some(v) });
                }
                Outcome::Graded { title: format!("H_*(S^V) over {}", self.shape), columns }
            }
            Command::Forms => {
                let mut rows = vec![];
                for (name, m) in forms(self.shape) {
                    let index = form_index(&m).ok_or_else(|| CliError::Failed(format!("{name} is not recognized as a form")))?;
                    rows.push(FormRow { name, index, rep: form_to_rep(&m)?, m });
                }
                Outcome::Forms(rows)
            }
            Command::Duality { .. } => {
                let v = self.label(&self.operands[0])?;
                let report = anderson_check(&v)?;
                Outcome::Check { title: format!("Anderson duality for S^{v}"), mismatches: report.mismatches }
            }
            Command::Crosscheck { .. } => {
                let (m, n) = self.pair()?;
                let report = ext_sphere_crosscheck(&m, &n)?;
                Outcome::Check { title: format!("Ext/Tor of ({}, {}) against spheres", ops[0], ops[1]), mismatches: report.mismatches }
            }
            Command::Selftest { .. } => unreachable!("selftest is handled separately"),
        })
    }
}

fn parse_range(text: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Invalid(format!("range '{text}': expected LO:HI"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let (lo, hi): (i64, i64) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn clip(h: GradedMackey, window: Option<(i64, i64)>) -> GradedMackey {
    let Some((lo, hi)) = window else { return h };
    let mut out = GradedMackey::new(h.shape, lo, hi);
    for (d, m) in h.iter().filter(|(d, _)| (lo..=hi).contains(d)) {
        out.insert(d, m.clone());
    }
    out
}

/// Runs a non-selftest command and returns its rendered output.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let job = Job::from_cli(cli)?;
    let outcome = job.compute(cli)?;
    let text = output::render(&job, &outcome);
    if let Outcome::Check { mismatches, .. } = &outcome {
        if !mismatches.is_empty() {
            print!("{text}");
            return Err(CliError::Failed(format!("{} mismatches", mismatches.len())));
        }
    }
    Ok(text)
}
