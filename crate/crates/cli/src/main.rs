//! `tailcen` — estimate heavy-tail indices from censored data and reproduce
//! the simulation campaigns.
//!
//! Exit codes: 0 success, 1 I/O or parse failure, 2 violated tuning
//! constraint or unknown case id.

mod commands;
mod datafile;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "tailcen",
    version,
    about = "Heavy-tail index estimation under random right censoring"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the data tail index from a censored-data CSV file.
    Estimate {
        /// CSV file with header `z,delta` (delta: 1 = uncensored, 0 = censored)
        #[arg(long)]
        input: PathBuf,
        /// Threshold exponent β
        #[arg(long)]
        beta: f64,
        /// Known lower bound γ₀ on the tail indices; enables t = n^β
        /// (omit it to use the slow threshold t = (log n)^β)
        #[arg(long)]
        gamma0: Option<f64>,
        /// Survival-floor exponent c in s = n^(−c); defaulted per regime
        #[arg(long)]
        c: Option<f64>,
    },
    /// Run a built-in case (1-6) or a JSON-configured campaign.
    Simulate {
        /// Built-in case id, 1 through 6
        #[arg(long, conflicts_with = "config")]
        case: Option<u32>,
        /// JSON campaign configuration file
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (default: $TAILCEN_OUT_DIR, then ./results)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Master seed override
        #[arg(long)]
        seed: Option<u64>,
        /// Replication count override
        #[arg(long)]
        reps: Option<usize>,
        /// Cap on worker threads (default: all cores; output is identical
        /// at any value)
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Cross sample sizes with a β grid for one built-in case.
    Sweep {
        /// Built-in case id, 1 through 6
        #[arg(long)]
        case: u32,
        /// Sample sizes, comma separated (default: the case's n)
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// β grid, comma separated (default: the case's grid)
        #[arg(long, value_delimiter = ',')]
        beta: Vec<f64>,
        /// Replication count override
        #[arg(long)]
        reps: Option<usize>,
        /// Output directory (default: $TAILCEN_OUT_DIR, then ./results)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Master seed override
        #[arg(long)]
        seed: Option<u64>,
        /// Cap on worker threads
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn main() -> ExitCode {
    match commands::run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
