// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

//! Batch runner writing the data behind each figure as CSV.
//!
//! Exit status is 0 on success, 1 for configuration errors and 2 when an
//! experiment fails.

mod config;
mod experiments;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Experiment, ExperimentConfig, Overrides, PRESETS};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Runtime(#[from] spinmemory::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 1,
            Self::Runtime(spinmemory::Error::InvalidSpec(_) | spinmemory::Error::InvalidGrid(_)) => 1,
            Self::Runtime(_) | Self::Io(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "spinmemory", version, about = "Qubit-in-a-spin-chain memory experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Return amplitudes Π₀, Δ₀ of the qubit site.
    Coeffs(Common),
    /// Trace-distance measure over a grid of fields and couplings.
    MeasureSweep(Common),
    /// Distance, flux and growth windows of the equatorial pair.
    Flux(Common),
    /// Positivity of the intermediate map on a (t, t1) grid.
    Divisibility(Common),
    /// Process matrices, Kraus operators and the reference-channel fit.
    Qpt(Common),
    /// Localized-level counts on a (h, J0) grid.
    Spectrum(Common),
    /// Initial-state occupations of the one-body modes.
    Excitations(Common),
    /// Reference-channel fit alone.
    GadFit(Common),
    /// Random pure inputs pushed through the map.
    FixedPoint(Common),
    /// Runs a figure preset, or lists them without a name.
    Preset {
        name: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// TOML or JSON experiment file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; all cores by default.
    #[arg(long)]
    threads: Option<usize>,
    /// Environment spins.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    j: Option<f64>,
    #[arg(long)]
    j0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    h: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    h0: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    horizon: Option<f64>,
    /// Number of random input states.
    #[arg(long)]
    count: Option<usize>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            n: self.n,
            j: self.j,
            j0: self.j0,
            h: self.h,
            h0: self.h0,
            dt: self.dt,
            horizon: self.horizon,
            count: self.count,
            seed: self.seed,
            out: self.out.clone(),
        }
    }
}

fn resolve(command: Command) -> Result<Option<(Experiment, ExperimentConfig, Common)>, CliError> {
    let (experiment, common, mut config) = match command {
        Command::Preset { name: None, .. } => {
            for p in &PRESETS {
                println!("{:<6} {:<14} {}", p.name, p.experiment.name(), p.about);
            }
            return Ok(None);
        }
        Command::Preset { name: Some(name), common } => {
            let p = config::preset(&name).ok_or_else(|| CliError::Config(format!("unknown preset {name:?}")))?;
            if common.config.is_some() {
                return Err(CliError::Config("a preset cannot be combined with --config".into()));
            }
            (p.experiment, common, (p.build)())
        }
        other => {
            let (experiment, common) = match other {
                Command::Coeffs(c) => (Experiment::Coeffs, c),
                Command::MeasureSweep(c) => (Experiment::MeasureSweep, c),
                Command::Flux(c) => (Experiment::Flux, c),
                Command::Divisibility(c) => (Experiment::Divisibility, c),
                Command::Qpt(c) => (Experiment::Qpt, c),
                Command::Spectrum(c) => (Experiment::Spectrum, c),
                Command::Excitations(c) => (Experiment::Excitations, c),
                Command::GadFit(c) => (Experiment::GadFit, c),
                Command::FixedPoint(c) => (Experiment::FixedPoint, c),
                Command::Preset { .. } => unreachable!("handled above"),
            };
            let config = match &common.config {
                Some(path) => ExperimentConfig::load(path)?,
                None => ExperimentConfig::default(),
            };
            if let Some(named) = config.experiment {
                if named != experiment {
                    return Err(CliError::Config(format!(
                        "config is for {} but {} was requested",
                        named.name(),
                        experiment.name()
                    )));
                }
            }
            (experiment, common, config)
        }
    };
    common.overrides().apply(&mut config)?;
    Ok(Some((experiment, config, common)))
}

fn execute(command: Command) -> Result<(), CliError> {
    let Some((experiment, config, common)) = resolve(command)? else {
        return Ok(());
    };
    if let Some(threads) = common.threads {
        if threads == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot start the thread pool: {e}")))?;
    }
    let mut run = experiments::Run::new(&config)?;
    experiments::run(experiment, &mut run)?;
    for path in &run.written {
        println!("wrote {}", experiments::display(path));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spinmemory: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
