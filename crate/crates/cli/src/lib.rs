//! Command-line front end for the giant-atom scattering library.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod validation;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::{Parser, Subcommand};

use crate::config::{Format, RunArgs, RunConfig};
use crate::error::CliError;
use crate::output::Table;

#[derive(Debug, Parser)]
#[command(
    name = "giantqed",
    version,
    about = "Photon scattering off two giant atoms in a waveguide"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single-photon amplitudes over a k grid
    Single(RunArgs),
    /// Incoherent power spectra S_R, S_L, S_total
    Spectrum(RunArgs),
    /// Total inelastic flux over a k grid, closed form and quadrature
    Flux(RunArgs),
    /// Differential correlation χ over a phase grid
    ChiMap(RunArgs),
    /// Normalised second-order correlation against separation
    G2(RunArgs),
    /// Compare analytic results with the master-equation oracle (JSON report)
    Validate(RunArgs),
}

fn sink(cfg: &RunConfig) -> Result<Box<dyn Write>, CliError> {
    Ok(match &cfg.output {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(cfg: &RunConfig, table: &Table) -> Result<(), CliError> {
    let mut w = sink(cfg)?;
    table.write(cfg.format, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let args = match &cli.command {
        Command::Single(a)
        | Command::Spectrum(a)
        | Command::Flux(a)
        | Command::ChiMap(a)
        | Command::G2(a)
        | Command::Validate(a) => a,
    };
    let cfg = RunConfig::resolve(args)?;
    match cli.command {
        Command::Single(_) => emit(&cfg, &commands::cmd_single(&cfg)?),
        Command::Spectrum(_) => emit(&cfg, &commands::cmd_spectrum(&cfg)?),
        Command::Flux(_) => emit(&cfg, &commands::cmd_flux(&cfg)?),
        Command::G2(_) => emit(&cfg, &commands::cmd_g2(&cfg)?),
        Command::ChiMap(_) => {
            let (table, singular) = commands::cmd_chi_map(&cfg)?;
            if singular > 0 {
                eprintln!("warning: {singular} phase cells are singular and written as NaN");
            }
            emit(&cfg, &table)
        }
        Command::Validate(_) => {
            let report = validation::run_validation(&cfg)?;
            if cfg.format == Format::Csv && cfg.output.is_some() {
                eprintln!("note: validation reports are always JSON");
            }
            let mut w = sink(&cfg)?;
            serde_json::to_writer_pretty(&mut w, &report).map_err(io::Error::from)?;
            writeln!(w)?;
            w.flush()?;
            if report.passed {
                return Ok(());
            }
            let summary = validation::failure_summary(&report);
            if cfg.strict {
                return Err(CliError::Validation(summary));
            }
            eprintln!("warning: thresholds not met: {summary}");
            Ok(())
        }
    }
}
