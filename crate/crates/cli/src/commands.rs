//! Subcommand implementations and the error-to-exit-code mapping.

use std::fs;
use std::path::PathBuf;

use thiserror::Error;

use tailcen_core::estimators::{derive_tuning, estimate_gamma_x};
use tailcen_core::montecarlo::{builtin_cases, run_case, BetaSummary, ExperimentConfig};

use crate::output::{self, SummaryDoc, SweepDoc, SweepRunDoc};
use crate::{datafile, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    Config(String),

    #[error("unknown case id {0}; built-in cases are 1 through 6")]
    UnknownCase(u32),

    #[error("one of --case or --config is required")]
    MissingSource,

    #[error(transparent)]
    Core(#[from] tailcen_core::Error),
}

impl CliError {
    /// 1 for I/O and parse failures, 2 for violated constraints and bad
    /// case selectors.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Parse { .. } | CliError::Config(_) => 1,
            CliError::UnknownCase(_) | CliError::MissingSource => 2,
            CliError::Core(tailcen_core::Error::Constraint { .. }) => 2,
            CliError::Core(_) => 1,
        }
    }
}

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Estimate {
            input,
            beta,
            gamma0,
            c,
        } => estimate(input, beta, gamma0, c),
        Command::Simulate {
            case,
            config,
            out,
            seed,
            reps,
            threads,
        } => simulate(case, config, out, seed, reps, threads),
        Command::Sweep {
            case,
            n,
            beta,
            reps,
            out,
            seed,
            threads,
        } => sweep(case, n, beta, reps, out, seed, threads),
    }
}

fn estimate(
    input: PathBuf,
    beta: f64,
    gamma0: Option<f64>,
    c: Option<f64>,
) -> Result<(), CliError> {
    let sample = datafile::read_censored_csv(&input)?;
    let tuning = derive_tuning(sample.len(), beta, gamma0, c)?;
    let report = estimate_gamma_x(&sample, &tuning);
    let mut text = serde_json::to_string_pretty(&report).expect("report is serializable");
    text.push('\n');
    print!("{text}");
    Ok(())
}

fn simulate(
    case: Option<u32>,
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    reps: Option<usize>,
    threads: Option<usize>,
) -> Result<(), CliError> {
    let mut cfg = match (case, config) {
        (Some(id), None) => load_case(id)?,
        (None, Some(path)) => load_config_file(&path)?,
        _ => return Err(CliError::MissingSource),
    };
    if let Some(s) = seed {
        cfg.master_seed = s;
    }
    if let Some(r) = reps {
        cfg.replications = r;
    }

    let summary = with_pool(threads, || run_case(&cfg))??;

    let dir = resolve_out_dir(out);
    fs::create_dir_all(&dir)?;
    let rows_path = dir.join(format!("{}_rows.csv", cfg.case_id));
    let summary_path = dir.join(format!("{}_summary.json", cfg.case_id));
    output::write_rows_csv(&rows_path, &output::rows_from_summary(&summary))?;
    output::write_json(&summary_path, &SummaryDoc::from_summary(&summary))?;

    print_table_header();
    for row in &summary.per_beta {
        print_table_row(cfg.n, row);
    }
    println!("mean censor rate: {:.4}", summary.mean_censor_rate);
    println!("wrote {} and {}", rows_path.display(), summary_path.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    case: u32,
    n_values: Vec<usize>,
    beta_grid: Vec<f64>,
    reps: Option<usize>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    threads: Option<usize>,
) -> Result<(), CliError> {
    let mut cfg = load_case(case)?;
    if !beta_grid.is_empty() {
        cfg.beta_grid = beta_grid;
    }
    if let Some(s) = seed {
        cfg.master_seed = s;
    }
    if let Some(r) = reps {
        cfg.replications = r;
    }
    let n_values = if n_values.is_empty() {
        vec![cfg.n]
    } else {
        n_values
    };

    let summaries = with_pool(threads, || -> Result<Vec<_>, CliError> {
        n_values
            .iter()
            .map(|&n| {
                let mut c = cfg.clone();
                c.n = n;
                Ok(run_case(&c)?)
            })
            .collect()
    })??;

    let mut rows = Vec::new();
    let mut runs = Vec::new();
    print_table_header();
    for summary in &summaries {
        rows.extend(output::rows_from_summary(summary));
        for row in &summary.per_beta {
            print_table_row(summary.config.n, row);
        }
        runs.push(SweepRunDoc {
            n: summary.config.n,
            per_beta: summary.per_beta.clone(),
            mean_censor_rate: summary.mean_censor_rate,
        });
    }

    let dir = resolve_out_dir(out);
    fs::create_dir_all(&dir)?;
    let rows_path = dir.join(format!("{}_sweep_rows.csv", cfg.case_id));
    let summary_path = dir.join(format!("{}_sweep_summary.json", cfg.case_id));
    output::write_rows_csv(&rows_path, &rows)?;
    output::write_json(
        &summary_path,
        &SweepDoc {
            case_id: cfg.case_id.clone(),
            master_seed: cfg.master_seed,
            replications: cfg.replications,
            beta_grid: cfg.beta_grid.clone(),
            n_values,
            runs,
        },
    )?;
    println!("wrote {} and {}", rows_path.display(), summary_path.display());
    Ok(())
}

fn load_case(case: u32) -> Result<ExperimentConfig, CliError> {
    let mut cases = builtin_cases();
    let index = case
        .checked_sub(1)
        .map(|i| i as usize)
        .filter(|i| *i < cases.len())
        .ok_or(CliError::UnknownCase(case))?;
    Ok(cases.swap_remove(index))
}

fn load_config_file(path: &PathBuf) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn resolve_out_dir(out: Option<PathBuf>) -> PathBuf {
    out.or_else(|| std::env::var_os("TAILCEN_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("results"))
}

/// Run `f` on a dedicated rayon pool when a thread cap is requested.
/// The harness output does not depend on the pool size.
fn with_pool<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, CliError> {
    match threads {
        None => Ok(f()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| CliError::Config(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn print_table_header() {
    println!(
        "{:>8} {:>10} {:>10} {:>10} {:>10} {:>10} {:>6}",
        "n", "beta", "min", "mean", "median", "max", "trunc"
    );
}

fn print_table_row(n: usize, row: &BetaSummary) {
    println!(
        "{:>8} {:>10.6} {:>10.4} {:>10.4} {:>10.4} {:>10.4} {:>6}",
        n,
        row.beta,
        row.min_relative_error,
        row.mean_relative_error,
        row.median_relative_error,
        row.max_relative_error,
        row.truncated_count
    );
}
