mod commands;
mod config;
mod manifest;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use foucault::Exec;

use crate::commands::{Ctx, Status};
use crate::manifest::{write_manifest, ManifestInput, Outputs};

/// Environment variable capping the worker thread count.
const THREADS_ENV: &str = "FOUCAULT_THREADS";

/// Caller-side mistake; maps to exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Parser)]
#[command(name = "foucault", version, about = "Asymmetric Foucault pendulum in Stokes parameters")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML file with one section per command plus [pendulum].
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory; created if missing.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,

    /// Master seed for every random component.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Override one configuration key, e.g. --set pendulum.omega_rot=0.02.
    #[arg(long = "set", global = true, value_name = "SECTION.KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Integrate the reduced Stokes flow.
    Simulate,
    /// Stationary points, stability and separatrix at one radius.
    Stationary,
    /// Critical radius over a (delta_omega, omega_rot) grid.
    Critical,
    /// Quantum eigenvalues over a delta_omega grid.
    Spectrum,
    /// Quantum and classical densities of states at one parameter point.
    Dos,
    /// Zeno filtering for 0..=max_filters filters.
    Zeno,
    /// Twisting of a Gaussian ensemble.
    Squeeze,
    /// Reduced model against the full pendulum over a parameter grid.
    Validate,
    /// Spectra and densities over a delta_omega grid.
    Sweep,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Stationary => "stationary",
            Command::Critical => "critical",
            Command::Spectrum => "spectrum",
            Command::Dos => "dos",
            Command::Zeno => "zeno",
            Command::Squeeze => "squeeze",
            Command::Validate => "validate",
            Command::Sweep => "sweep",
        }
    }
}

fn configure_threads() -> Result<usize> {
    let requested = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| InputError(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?,
        ),
        Err(_) => None,
    };
    #[cfg(feature = "parallel")]
    {
        if let Some(n) = requested {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .context("configuring the worker pool")?;
        }
        Ok(rayon::current_num_threads())
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = requested;
        Ok(1)
    }
}

fn run(cli: Cli) -> Result<Status> {
    let started = Instant::now();
    let threads = configure_threads()?;
    let cfg = config::load(cli.config.as_deref(), &cli.set)?;
    let mut out = Outputs::new(&cli.out)?;
    let mut ctx = Ctx {
        out: &mut out,
        format: cli.format,
        seed: cli.seed,
        exec: Exec::default(),
        derived_seeds: Vec::new(),
    };
    let report = match cli.command {
        Command::Simulate => commands::simulate(&cfg, &mut ctx),
        Command::Stationary => commands::stationary(&cfg, &mut ctx),
        Command::Critical => commands::critical(&cfg, &mut ctx),
        Command::Spectrum => commands::spectrum(&cfg, &mut ctx),
        Command::Dos => commands::dos(&cfg, &mut ctx),
        Command::Zeno => commands::zeno(&cfg, &mut ctx),
        Command::Squeeze => commands::squeeze(&cfg, &mut ctx),
        Command::Validate => commands::validate(&cfg, &mut ctx),
        Command::Sweep => commands::sweep(&cfg, &mut ctx),
    }?;
    let derived = std::mem::take(&mut ctx.derived_seeds);
    let path = write_manifest(
        &out,
        ManifestInput {
            command: cli.command.name(),
            format: cli.format.as_str(),
            seed: cli.seed,
            derived_seeds: &derived,
            params: &report.params,
            threads,
            elapsed: started.elapsed(),
        },
    )?;
    eprintln!("wrote {} file(s) and {}", out.files().len(), path.display());
    Ok(report.status)
}

/// 2 for bad inputs, 1 for everything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<InputError>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<foucault::Error>() {
            return if e.is_input_error() { 2 } else { 1 };
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::AcceptanceFailed) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
