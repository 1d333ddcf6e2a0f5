//! Front end for `starkdyn-core`: configuration parsing, subcommands and
//! CSV/SVG output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde_json::json;

pub use commands::Outcome;
pub use config::{parse_config, ConfigError, ConfigIssue, IssueKind, RunConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// The four AC-Stark-split levels.
    Levels,
    /// Occupation probabilities over time.
    Probs,
    /// Momentum transfer and force over time.
    Momentum,
    /// Dressed-state basis, energies and lifetimes.
    Dressed,
    /// Scalar observables across a parameter range.
    Sweep,
    /// Analytic solution against the numerical oracle.
    Verify,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Model(#[from] starkdyn_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn config_message(message: impl Into<String>) -> Self {
        CliError::Config(ConfigError(vec![ConfigIssue {
            kind: IssueKind::Validation,
            line: None,
            message: message.into(),
        }]))
    }

    /// 2 for configuration and model errors, 3 for IO errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Pool(_) => 3,
            CliError::Config(_) | CliError::Model(_) => 2,
        }
    }

    /// Machine-readable form written to stderr.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CliError::Config(e) => json!({
                "error": "config",
                "exit_code": self.exit_code(),
                "issues": e.0.iter().map(|i| json!({
                    "kind": match i.kind {
                        IssueKind::Parse => "parse",
                        IssueKind::Validation => "validation",
                    },
                    "line": i.line,
                    "message": i.message,
                })).collect::<Vec<_>>(),
            }),
            CliError::Model(e) => json!({
                "error": "model",
                "exit_code": self.exit_code(),
                "message": e.to_string(),
            }),
            CliError::Io { path, source } => json!({
                "error": "io",
                "exit_code": self.exit_code(),
                "path": path.display().to_string(),
                "message": source.to_string(),
            }),
            CliError::Pool(message) => json!({
                "error": "io",
                "exit_code": self.exit_code(),
                "message": message,
            }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Invocation {
    pub command: Command,
    pub config: PathBuf,
    pub out: PathBuf,
    pub seed: u64,
    /// Worker threads; rayon's default when `None`.
    pub jobs: Option<usize>,
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(parse_config(&text)?)
}

/// Reads the configuration and runs the subcommand on a dedicated pool.
pub fn execute(inv: &Invocation) -> Result<Outcome, CliError> {
    let cfg = load_config(&inv.config)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = inv.jobs {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Pool(e.to_string()))?;
    pool.install(|| commands::run(inv.command, &cfg, &inv.out, inv.seed))
}
