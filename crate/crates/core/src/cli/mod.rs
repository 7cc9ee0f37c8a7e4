//! Command-line front end.
//!
//! Exit codes: 0 success, 1 self-check or numerical failure, 2 configuration
//! or input error, 3 no root in the search interval, 4 more than one root.

pub mod commands;
pub mod config;
pub mod render;
pub mod selfcheck;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

pub use commands::{
    cmd_curve, cmd_forward, cmd_invert, parse_points, CurveRow, ForwardRow, InvertOutcome, RowKind,
};
pub use config::{OutputFormat, Overrides, Prepared, RunConfig};
pub use selfcheck::{cmd_selfcheck, CheckResult};

use crate::inverse::InverseError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NO_ROOT: u8 = 3;
pub const EXIT_MULTIPLE_ROOTS: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("point {index}: {message}")]
    Point { index: usize, message: String },
    #[error(transparent)]
    Inverse(#[from] InverseError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io { .. } | CliError::Point { .. } => EXIT_CONFIG,
            CliError::Inverse(InverseError::NoRoot { .. }) => EXIT_NO_ROOT,
            CliError::Inverse(InverseError::Config { .. } | InverseError::Forward(_)) => {
                EXIT_CONFIG
            }
            CliError::Inverse(_) => EXIT_FAILURE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fracorder",
    version,
    about = "Time-fractional diffusion: forward solutions and order identification"
)]
pub struct Cli {
    /// Write results here instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Relative accuracy of series evaluations
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Fractional order for forward runs
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate u(x, t) at a list of points
    Forward {
        #[arg(long)]
        config: PathBuf,
        /// A file of `x,t` lines, or inline `x,t;x,t`
        #[arg(long)]
        points: String,
    },
    /// Recover the order from the configured measurement
    Invert {
        #[arg(long)]
        config: PathBuf,
    },
    /// Tabulate F(alpha) - d over the search interval
    Curve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        scan_points: Option<usize>,
    },
    /// Run the built-in numerical checks
    Selfcheck {
        /// Multiplies every tolerance; 0 forces failures
        #[arg(long, default_value_t = 1.0, hide = true)]
        tolerance_scale: f64,
    },
}

/// Rendered output and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub exit_code: u8,
    /// From `--output` or the config's `output.path`.
    pub path: Option<PathBuf>,
}

fn prepare(
    cli: &Cli,
    path: &std::path::Path,
    scan_points: Option<usize>,
) -> Result<Prepared, CliError> {
    let mut cfg = RunConfig::load(path)?;
    cfg.apply(&Overrides {
        rel_tol: cli.rel_tol,
        alpha: cli.alpha,
        scan_points,
    });
    cfg.prepare()
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let (text, exit_code, prepared) = match &cli.command {
        Command::Forward { config, points } => {
            let cfg = prepare(cli, config, None)?;
            let source = std::path::Path::new(points);
            let points = if source.is_file() {
                let text = std::fs::read_to_string(source).map_err(|e| CliError::Io {
                    path: source.to_owned(),
                    source: e,
                })?;
                parse_points(&text)?
            } else {
                parse_points(points)?
            };
            let rows = cmd_forward(&cfg, &points)?;
            (
                render::forward(&rows, cfg.output.format),
                EXIT_OK,
                Some(cfg),
            )
        }
        Command::Invert { config } => {
            let cfg = prepare(cli, config, None)?;
            let outcome = cmd_invert(&cfg)?;
            (
                render::invert(&outcome, cfg.output.format),
                outcome.exit_code(),
                Some(cfg),
            )
        }
        Command::Curve {
            config,
            scan_points,
        } => {
            let cfg = prepare(cli, config, *scan_points)?;
            let rows = cmd_curve(&cfg)?;
            (render::curve(&rows, cfg.output.format), EXIT_OK, Some(cfg))
        }
        Command::Selfcheck { tolerance_scale } => {
            let results = cmd_selfcheck(*tolerance_scale);
            let code = if results.iter().all(CheckResult::passed) {
                EXIT_OK
            } else {
                EXIT_FAILURE
            };
            (selfcheck::render(&results), code, None)
        }
    };
    let path = cli
        .output
        .clone()
        .or_else(|| prepared.and_then(|c| c.output.path));
    Ok(Outcome {
        text,
        exit_code,
        path,
    })
}

/// Runs the command, writes its output and returns the exit code.
pub fn execute(cli: &Cli) -> u8 {
    let outcome = match run(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let written = match &outcome.path {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(outcome.text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    if outcome.exit_code == EXIT_MULTIPLE_ROOTS {
        eprintln!("warning: more than one root in the search interval");
    }
    outcome.exit_code
}
