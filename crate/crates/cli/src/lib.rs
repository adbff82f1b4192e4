//! Command-line surface for the trimmer simulator: `spectrum` sweeps the
//! coupling and writes the phase/spectral data as CSV, `evolve` writes
//! single-photon trajectories as CSV, and `verify` runs the invariant suite
//! and reports JSON diagnostics.
//!
//! Configuration precedence is command-line flags over JSON config file over
//! built-in defaults; the defaults are the standard figure parameters
//! (`omega = 5`, `gamma = 1`).

pub mod commands;
pub mod config;
pub mod output;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "pt-trimmer", version, about = "Gain/loss-balanced three-cavity chain simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sweep the coupling and write spectrum, phase, localization, and
    /// symmetry-residual columns as CSV
    Spectrum(SpectrumArgs),
    /// Evolve a single photon and write amplitudes and occupations as CSV
    Evolve(EvolveArgs),
    /// Run the invariant suite and write a JSON diagnostics report;
    /// exits nonzero if any invariant fails
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Default)]
pub struct SharedArgs {
    /// Cavity resonance frequency, in units of gamma
    #[arg(long)]
    pub omega: Option<f64>,
    /// Gain/loss rate (0 is the Hermitian limit)
    #[arg(long)]
    pub gamma: Option<f64>,
    /// JSON config file mirroring these flags in snake_case
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output path; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub shared: SharedArgs,
    /// Single coupling value: write one row instead of a sweep
    #[arg(long)]
    pub j: Option<f64>,
    /// Sweep start
    #[arg(long)]
    pub j_min: Option<f64>,
    /// Sweep end
    #[arg(long)]
    pub j_max: Option<f64>,
    /// Number of sweep rows
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Args, Debug, Default)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub shared: SharedArgs,
    /// Inter-cavity coupling
    #[arg(long)]
    pub j: Option<f64>,
    /// End of the time grid
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of grid points
    #[arg(long)]
    pub points: Option<usize>,
    /// Where the photon starts: passive | active
    #[arg(long)]
    pub initial: Option<String>,
    /// Propagation method: closed | rk4 | expm
    #[arg(long)]
    pub method: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub shared: SharedArgs,
    /// Scale factor on every tolerance; 0 is the fault-injection self-test
    #[arg(long)]
    pub tol_scale: Option<f64>,
}

/// Run a parsed invocation; returns the process exit code.
pub fn execute(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Spectrum(args) => {
            let config = config::resolve_spectrum(&args)?;
            let mut writer = output::open_output(config.out.as_deref())?;
            commands::run_spectrum(&config, &mut writer)?;
            Ok(0)
        }
        Command::Evolve(args) => {
            let config = config::resolve_evolve(&args)?;
            let mut writer = output::open_output(config.out.as_deref())?;
            commands::run_evolve(&config, &mut writer)?;
            Ok(0)
        }
        Command::Verify(args) => {
            let config = config::resolve_verify(&args)?;
            let mut writer = output::open_output(config.out.as_deref())?;
            let ok = commands::run_verify(&config, &mut writer)?;
            Ok(if ok { 0 } else { 1 })
        }
    }
}
