//! Command-line reproduction surface for the quantum-probe metrology engine.
//!
//! One subcommand per artifact: the oscillator comparison table, the
//! finite-well figure sweeps, the oscillator time curves, the SI system
//! comparison, the dimensional-ratio surface, and the full validation
//! suite. Outputs are deterministic CSV or JSON.
//!
//! Exit codes: 0 success, 1 validation failure, 2 configuration error,
//! 3 numerical non-convergence.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{OutputFormat, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    ValidationFailed(usize),
    Numerics(gravprobe::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::ValidationFailed(n) => write!(f, "{n} validation check(s) failed"),
            CliError::Numerics(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<gravprobe::Error> for CliError {
    fn from(e: gravprobe::Error) -> Self {
        CliError::Numerics(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::ValidationFailed(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numerics(e) => match e {
                gravprobe::Error::GridResolution(_)
                | gravprobe::Error::Truncation(_)
                | gravprobe::Error::FidelityStepTooLarge(_)
                | gravprobe::Error::FidelityInconsistent(_) => 3,
                _ => 2,
            },
        }
    }
}

#[derive(Parser)]
#[command(
    name = "gravprobe",
    version,
    about = "Quantum Fisher information of simple probes under the universal p^4 gravity correction"
)]
struct Cli {
    /// Flat key = value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Unit system.
    #[arg(long, global = true, value_parser = ["natural", "si"])]
    units: Option<String>,
    /// Output directory (GRAVPROBE_OUT is the lowest-precedence fallback).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for the randomized cross-checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Toggle the oracle cross-checks emitted alongside figures.
    #[arg(long, global = true, value_parser = ["on", "off"])]
    validate: Option<String>,
    /// Replace every check tolerance (diagnostics).
    #[arg(long, global = true)]
    tolerance_override: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Oscillator 1D/2D comparison table with weighted ratios.
    Table1,
    /// Finite-well ground-state QFI sweeps (depth, width, energy).
    FswFigure,
    /// Oscillator perturbed-superposition QFI against time.
    HoFigure,
    /// Free packet vs wells vs oscillator in SI units.
    Comparison,
    /// Dimensional enhancement ratio over quantum numbers.
    RatioSurface,
    /// Run the full cross-validation suite.
    Validate,
}

fn build_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut config = RunConfig::default();
    config.apply_env();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        config.apply_text(&text).map_err(CliError::Config)?;
    }
    if let Some(units) = &cli.units {
        config.set("units", units).map_err(CliError::Config)?;
    }
    if let Some(out) = &cli.out {
        config.out_dir = out.clone();
    }
    if let Some(format) = &cli.format {
        config.format = OutputFormat::parse(format).map_err(CliError::Config)?;
    }
    if let Some(workers) = cli.workers {
        config.workers = workers;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(v) = &cli.validate {
        config.set("validate", v).map_err(CliError::Config)?;
    }
    if let Some(t) = cli.tolerance_override {
        config.tolerance_override = Some(t);
    }
    config.validate_invariants().map_err(CliError::Config)?;
    Ok(config)
}

fn run(cli: &Cli, config: &RunConfig) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| CliError::Config(format!("worker pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Table1 => commands::cmd_table1(config),
        Command::FswFigure => commands::cmd_fsw_figure(config),
        Command::HoFigure => commands::cmd_ho_figure(config),
        Command::Comparison => commands::cmd_comparison(config),
        Command::RatioSurface => commands::cmd_ratio_surface(config),
        Command::Validate => commands::cmd_validate(config),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(e.exit_code());
        }
    };
    match run(&cli, &config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
