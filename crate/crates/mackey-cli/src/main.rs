use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod golden;
mod job;
mod output;

use job::CliError;

#[derive(Parser, Debug, Clone)]
#[command(name = "mackey", version, about = "Mackey functors for cyclic p-groups over Z")]
pub struct Cli {
    /// The prime p.
    #[arg(long, global = true, default_value_t = 2)]
    p: u64,
    /// The exponent n of G = C_{p^n}.
    #[arg(long, global = true, default_value_t = 1)]
    n: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Lewis)]
    format: Format,
    /// Worker threads for grid output.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Lewis,
    Json,
    Grid,
}

/// Operands are catalog names (`Z`, `B01`, `Z10^E`, `Z11+B01`, ...) or paths to JSON files.
#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Box product M □ N.
    Box {
        #[arg(value_name = "M")]
        left: String,
        #[arg(value_name = "N")]
        right: String,
    },
    /// Internal Hom(M, N).
    Hom {
        #[arg(value_name = "M")]
        left: String,
        #[arg(value_name = "N")]
        right: String,
    },
    /// Ext^*(M, N).
    Ext {
        #[arg(value_name = "M")]
        left: String,
        #[arg(value_name = "N")]
        right: String,
    },
    /// Tor_*(M, N).
    Tor {
        #[arg(value_name = "M")]
        left: String,
        #[arg(value_name = "N")]
        right: String,
    },
    /// Bredon homology of representation spheres, e.g. "2L1-3L0+4" or "4s-3L0".
    Sphere {
        #[arg(allow_hyphen_values = true)]
        label: String,
        /// Further labels, shown as extra grid columns.
        #[arg(long = "and", value_name = "LABEL", allow_hyphen_values = true)]
        more: Vec<String>,
        /// Degree window LO:HI.
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
    },
    /// Every form of Z with a sphere realizing it.
    Forms,
    /// Inflation of M along C_{p^(n+k)} -> C_{p^n}.
    Pullback {
        #[arg(value_name = "M")]
        left: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Anderson duality check for S^V.
    Duality {
        #[arg(allow_hyphen_values = true)]
        label: String,
    },
    /// Ext and Tor between forms of Z against sphere computations.
    Crosscheck {
        #[arg(value_name = "M")]
        left: String,
        #[arg(value_name = "N")]
        right: String,
    },
    /// Runs the acceptance checks and compares the golden files.
    Selftest {
        /// Criterion key or number, or "golden" for the golden files only.
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, default_value_t = 5)]
        pmax: u64,
        /// Rewrites the golden files from the current engine.
        #[arg(long)]
        bless: bool,
        /// On a fingerprint match, also compare the stored matrices.
        #[arg(long)]
        diff: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Selftest { suite, pmax, bless, diff } => golden::selftest(suite.as_deref(), *pmax, *bless, *diff),
        _ => job::run(&cli).map(|text| print!("{text}")),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Failed(_) => 1,
        }
    }
}
