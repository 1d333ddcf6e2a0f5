use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use starkdyn::{execute, Command, Invocation};

/// Damped two-level atom in a circularly polarized field.
#[derive(Parser, Debug)]
#[command(name = "starkdyn", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Run configuration (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Seed for the random draws of `verify`.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads for sweeps and verification.
    #[arg(long, env = "STARKDYN_JOBS", value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let inv = Invocation {
        command: args.command,
        config: args.config,
        out: args.out,
        seed: args.seed,
        jobs: args.jobs.map(|n| n as usize),
    };
    match execute(&inv) {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            println!("{}", outcome.summary);
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
