//! `cuspweyl`: every experiment of the library as a subcommand.

mod commands;
mod config;
mod output;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{load_config, Merge};
use output::{Format, Sink};

#[derive(Debug, Parser)]
#[command(name = "cuspweyl", version, about = "Spectral counting experiments on manifolds with cusps")]
struct Cli {
    /// JSON file with parameters for the subcommand; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (default: standard output).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for random families.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance; its meaning depends on the subcommand.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Run the invariant suite of the subcommand's module instead.
    #[arg(long, global = true)]
    self_test: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Contour identities against brute-force zeros.
    CountZeros(commands::CountZerosArgs),
    /// Cusp contribution to the trace formula against its asymptotics.
    CuspTerm(commands::CuspTermArgs),
    /// The constant 𝒞₁(Λ) of a cusp lattice.
    LatticeConst(commands::LatticeConstArgs),
    /// Transport coefficients u_k on a radial model metric.
    Parametrix(commands::ParametrixArgs),
    /// Scattering phase and the counting function Ñ.
    Phase(commands::PhaseArgs),
    /// Three-term fit of counting data.
    WeylFit(commands::WeylFitArgs),
    /// End-to-end run on the modular surface.
    ModelSurface(commands::ModelSurfaceArgs),
    /// Both sides of the global resonance counting identity.
    GeneralCount(commands::GeneralCountArgs),
}

/// Settings shared by all subcommands after merging flags and config.
#[derive(Debug, Clone)]
pub struct Global {
    pub seed: u64,
    pub tol: Option<f64>,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Output(String),
    Numeric(cuspweyl::Error),
    SelfTest(usize),
}

impl From<cuspweyl::Error> for CliError {
    fn from(e: cuspweyl::Error) -> Self {
        use cuspweyl::Error as E;
        match e {
            E::Precondition(_)
            | E::Domain(_)
            | E::Parse(_)
            | E::Io(_)
            | E::UnsupportedDimension(_)
            | E::ClassMembership(_)
            | E::BelowAbscissa { .. }
            | E::Mode { .. } => CliError::Config(e.to_string()),
            other => CliError::Numeric(other),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => Some(load_config(p)?),
        None => None,
    };
    let (file_global, file_args) = match file {
        Some(f) => (f.global, Some(f.args)),
        None => (Default::default(), None),
    };
    let format = cli.format.or(file_global.format).unwrap_or_default();
    let out = cli.out.clone().or(file_global.out);
    let global = Global { seed: cli.seed.or(file_global.seed).unwrap_or(0), tol: cli.tol.or(file_global.tol) };
    let mut sink = Sink::new(format, out.as_deref())?;
    let args = file_args.unwrap_or_default();
    macro_rules! dispatch {
        ($a:expr, $run:path, $test:path) => {{
            let merged = $a.merge(config::parse_args(&args)?);
            if cli.self_test {
                $test(&merged, &global, &mut sink)
            } else {
                $run(merged, &global, &mut sink)
            }
        }};
    }
    match cli.command {
        Command::CountZeros(a) => dispatch!(a, commands::count_zeros, selftest::count_zeros),
        Command::CuspTerm(a) => dispatch!(a, commands::cusp_term, selftest::cusp_term),
        Command::LatticeConst(a) => dispatch!(a, commands::lattice_const, selftest::lattice_const),
        Command::Parametrix(a) => dispatch!(a, commands::parametrix, selftest::parametrix),
        Command::Phase(a) => dispatch!(a, commands::phase, selftest::phase),
        Command::WeylFit(a) => dispatch!(a, commands::weyl_fit, selftest::weyl_fit),
        Command::ModelSurface(a) => dispatch!(a, commands::model_surface, selftest::model_surface),
        Command::GeneralCount(a) => dispatch!(a, commands::general_count, selftest::general_count),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // clap reports help and version as errors with exit code 0.
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(m)) | Err(CliError::Output(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(e)) => {
            let diag = serde_json::json!({ "error": "numerical", "detail": format!("{e:?}"), "message": e.to_string() });
            eprintln!("{diag}");
            ExitCode::from(3)
        }
        Err(CliError::SelfTest(n)) => {
            eprintln!("{}", serde_json::json!({ "error": "self-test", "failures": n }));
            ExitCode::from(3)
        }
    }
}
