//! `vsa` command-line front end.
//!
//! Data reports go to `--out` (written atomically); progress and
//! diagnostics go to standard error. Exit status 2 marks configuration
//! errors, 1 runtime failures.

pub mod commands;
pub mod config;
pub mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

pub use config::ExperimentConfig;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "vsa", version, about = "Vector-symbolic pipelines and in-memory-computing cost estimates")]
pub struct Cli {
    /// Experiment configuration (JSON).
    #[arg(long, global = true, env = "VSA_CONFIG")]
    pub config: Option<PathBuf>,
    /// Master seed; overrides the config.
    #[arg(long, global = true, env = "VSA_SEED")]
    pub seed: Option<u64>,
    /// Worker threads for sweeps.
    #[arg(long, global = true, env = "VSA_JOBS")]
    pub jobs: Option<usize>,
    /// Report directory.
    #[arg(long, global = true, env = "VSA_OUT", default_value = "out")]
    pub out: PathBuf,
    #[arg(long, global = true, env = "VSA_FORMAT", value_enum, default_value = "json")]
    pub format: Format,
    /// Dimension override for every section.
    #[arg(long, global = true, env = "VSA_DIM")]
    pub dim: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode a dataset with a random projection into a hypervector container.
    Encode {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Train a classifier (single pass, then iterative retraining).
    Train {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        epochs: Option<usize>,
    },
    /// Classify a dataset with a saved model.
    Infer {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Model stem (the `.json`/`.hvc` pair without extension).
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Cluster a dataset's encodings.
    Cluster {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Factorize seeded random composites with a resonator network.
    Factorize {
        #[arg(long)]
        trials: Option<usize>,
        /// `parallel` or `sequential`.
        #[arg(long)]
        schedule: Option<String>,
    },
    /// Train and recall the grid navigation program.
    Navigate,
    /// Encode a graph and score edge queries.
    Graph {
        #[arg(long)]
        edges: Option<PathBuf>,
    },
    /// Out-of-distribution scoring on synthetic layer features.
    Ood,
    /// Single cost estimate.
    Cost {
        #[arg(long)]
        workload: Option<String>,
        /// `SRAM` or `static/dynamic`, e.g. `MRAM/SRAM`.
        #[arg(long)]
        memory: Option<String>,
        #[arg(long)]
        node: Option<String>,
    },
    /// Memory-technology and node sweeps.
    Sweep,
    /// Footprint bounds per application category.
    Bounds,
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::UnsupportedNode(_) => 2,
        _ => 1,
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(files) => {
            for f in files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
