//! `steinkit` command-line interface.
//!
//! Exit codes: 0 on success, 2 on input errors (unreadable or invalid
//! configuration, malformed samples), 3 on numerical failures.

mod commands;
mod config;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use steinkit::discrepancy::Estimator;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("output error: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<steinkit::Error> for CliError {
    fn from(e: steinkit::Error) -> Self {
        use steinkit::Error as E;
        match e {
            E::NonFinite(_) | E::Inconsistent(_) | E::Diverged { .. } | E::NonPositiveTilt { .. } => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "steinkit", version, about = "Kernel Stein discrepancies, MMD, goodness-of-fit tests and SVGD")]
struct Cli {
    /// JSON configuration for the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every random draw; overrides the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for parallel sums (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Kernel Stein discrepancy of a sample.
    Ksd {
        /// Headerless CSV of points; overrides `samples` in the configuration.
        #[arg(long)]
        samples: Option<PathBuf>,
        #[arg(long, value_parser = parse_estimator)]
        estimator: Option<Estimator>,
    },
    /// Maximum mean discrepancy between two samples.
    Mmd {
        #[arg(long)]
        samples: Option<PathBuf>,
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Wild-bootstrap KSD goodness-of-fit test.
    Gof {
        #[arg(long)]
        samples: Option<PathBuf>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        bootstrap: Option<usize>,
    },
    /// Stein variational gradient descent.
    Svgd {
        #[arg(long)]
        initial: Option<PathBuf>,
        /// CSV of per-iteration summaries.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Embeddability, dissipativity and score-growth diagnostics.
    Diagnose,
    /// Tabulated convergence and failure experiments.
    Experiment,
}

fn parse_estimator(s: &str) -> Result<Estimator, String> {
    match s {
        "v_stat" => Ok(Estimator::VStat),
        "u_stat" => Ok(Estimator::UStat),
        _ => Err(format!("unknown estimator {s:?}; expected v_stat or u_stat")),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Input("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Input(e.to_string()))?;
    }
    let g = commands::Global { config: cli.config.as_deref(), seed: cli.seed, output: cli.output.as_deref() };
    match cli.command {
        Command::Ksd { samples, estimator } => commands::ksd(&g, samples, estimator),
        Command::Mmd { samples, reference } => commands::mmd(&g, samples, reference),
        Command::Gof { samples, alpha, bootstrap } => commands::gof(&g, samples, alpha, bootstrap),
        Command::Svgd { initial, trace } => commands::svgd(&g, initial, trace),
        Command::Diagnose => commands::diagnose(&g),
        Command::Experiment => commands::experiment(&g),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("steinkit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
