//! Configuration-driven runner for the `wwlab` experiments.
//!
//! Each subcommand reads one [`ExperimentConfig`], writes its results into an
//! output directory together with `manifest.json`, and maps its verdict to an
//! [`Status`].

pub mod config;
mod output;
mod run;

use std::path::{Path, PathBuf};

pub use config::ExperimentConfig;
pub use output::Written;
pub use run::{run_egorov, run_maximal, run_simulate, run_spectral, run_vdc};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Simulate,
    Spectral,
    Egorov,
    Vdc,
    Maximal,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Spectral => "spectral",
            Command::Egorov => "egorov",
            Command::Vdc => "vdc",
            Command::Maximal => "maximal",
        }
    }
}

/// Outcome of a completed run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Pass or Hold.
    Pass,
    Fail,
    /// An inequality that must hold did not: an internal consistency alarm.
    Violation,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Violation => 3,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(wwlab::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl From<wwlab::Error> for CliError {
    fn from(e: wwlab::Error) -> Self {
        match e {
            wwlab::Error::MalformedSpec(_) => CliError::Config(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(_) | CliError::Io { .. } => 1,
        }
    }
}

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

/// Loads `path`, applies the overrides and runs `command`.
pub fn execute(command: Command, path: &Path, overrides: &Overrides) -> Result<(Status, Written), CliError> {
    let mut cfg = ExperimentConfig::load(path).map_err(CliError::Config)?;
    if let Some(seed) = overrides.seed {
        cfg.run.seed = seed;
    }
    if let Some(threads) = overrides.threads {
        cfg.run.threads = threads;
    }
    let out = overrides.out.clone().unwrap_or_else(|| cfg.output.directory.clone());
    run_command(command, &cfg, &out)
}

pub fn run_command(command: Command, cfg: &ExperimentConfig, out: &Path) -> Result<(Status, Written), CliError> {
    if cfg.run.threads == 0 {
        return Err(CliError::Config("run.threads must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.run.threads)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    pool.install(|| match command {
        Command::Simulate => run_simulate(cfg, out),
        Command::Spectral => run_spectral(cfg, out),
        Command::Egorov => run_egorov(cfg, out),
        Command::Vdc => run_vdc(cfg, out),
        Command::Maximal => run_maximal(cfg, out),
    })
}
