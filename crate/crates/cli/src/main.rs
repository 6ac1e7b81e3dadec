//! `fracbeam`: reproducible data tables for the fractional Kelvin-Voigt
//! cantilever.
//!
//! Exit codes: 0 on success, 1 on numerical failure, 2 on usage errors.

mod commands;
mod config;
mod error;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::Resolver;
use error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "fracbeam",
    version,
    about = "Fractional Kelvin-Voigt cantilever toolkit"
)]
struct Cli {
    /// Config file: `key = value` lines or a flat JSON object. Flags win over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output format [default: csv]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalues and sampled mode shapes.
    Modes(commands::ModesArgs),
    /// Galerkin coefficients of the first mode.
    Coeffs(commands::CoeffsArgs),
    /// Constitutive response: ramp-hold stress or complex modulus spectrum.
    Constitutive(commands::ConstitutiveArgs),
    /// Time integration of the linear or nonlinear modal oscillator.
    Simulate(commands::SimulateArgs),
    /// Free-vibration envelope (multiple scales) or decay-law fits.
    Envelope(commands::EnvelopeArgs),
    /// Critical fractional order of the decay rate.
    CriticalAlpha(commands::CriticalArgs),
    /// Steady-state primary-resonance sweep.
    Sweep(commands::SweepArgs),
}

/// Beam configuration shared by several commands.
#[derive(Args, Debug, Clone, Default)]
pub struct CaseArgs {
    /// Tip configuration [default: no-tip]
    #[arg(long, value_enum)]
    pub case: Option<CaseName>,
    /// Tip mass for `--case custom` [default: 0]
    #[arg(long = "M")]
    pub m_tip: Option<f64>,
    /// Tip rotatory inertia for `--case custom` [default: 0]
    #[arg(long = "J")]
    pub j_tip: Option<f64>,
    /// Tip boundary relation [default: tabulated]
    #[arg(long, value_enum)]
    pub boundary: Option<Boundary>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseName {
    NoTip,
    /// `M = J = 1`.
    TipMass,
    Custom,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Boundary {
    Tabulated,
    Exact,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(p) => Resolver::from_file(p)?,
        None => Resolver::empty(),
    };
    let mut table = match cli.command {
        Command::Modes(a) => commands::modes(&a, &cfg)?,
        Command::Coeffs(a) => commands::coeffs(&a, &cfg)?,
        Command::Constitutive(a) => commands::constitutive(&a, &cfg)?,
        Command::Simulate(a) => commands::simulate(&a, &cfg)?,
        Command::Envelope(a) => commands::envelope(&a, &cfg)?,
        Command::CriticalAlpha(a) => commands::critical_alpha(&a, &cfg)?,
        Command::Sweep(a) => commands::sweep(&a, &cfg)?,
    };
    let format = cfg.get_enum(cli.format, "format", Format::Csv)?;
    let mut prov = vec![(
        "fracbeam".to_string(),
        env!("CARGO_PKG_VERSION").to_string(),
    )];
    // command name first, then table notes, then the resolved parameters
    let (cmd, notes): (Vec<_>, Vec<_>) = table
        .provenance
        .drain(..)
        .partition(|(k, _)| k == "command");
    prov.extend(cmd);
    prov.extend(notes);
    prov.extend(cfg.echo().into_iter().filter(|(k, _)| k != "format"));
    table.provenance = prov;
    let text = match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    match cfg.get_opt(cli.output.map(|p| p.display().to_string()), "output")? {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fracbeam: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
