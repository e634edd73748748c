use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use wwlab_cli::{execute, Command, Overrides};

/// Weighted ergodic average experiments.
#[derive(Debug, Parser)]
#[command(name = "wwlab", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to `output.directory` from the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `run.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `run.threads`.
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let overrides = Overrides {
        out: args.out,
        seed: args.seed,
        threads: args.threads,
    };
    match execute(args.command, &args.config, &overrides) {
        Ok((status, written)) => {
            for f in &written.files {
                println!("wrote {}", f.display());
            }
            println!("{}: {:?}", args.command.name(), status);
            ExitCode::from(status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
