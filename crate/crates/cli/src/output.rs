//! Result files: a flat CSV of per-replication rows plus a JSON summary
//! sidecar. Floats are printed with 17 significant digits so every file
//! round-trips losslessly; line endings are LF and key order is fixed, so
//! equal campaigns produce byte-identical files.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tailcen_core::montecarlo::{BetaSummary, ExperimentConfig, SweepSummary};

use crate::commands::CliError;

pub const CSV_HEADER: &str =
    "case_id,n,beta,replication,gamma_x_hat,relative_error,truncated_by_s,truncated_by_h,censor_fraction";

/// One CSV row of campaign results.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub case_id: String,
    pub n: usize,
    pub beta: f64,
    pub replication: usize,
    pub gamma_x_hat: f64,
    pub relative_error: f64,
    pub truncated_by_s: bool,
    pub truncated_by_h: bool,
    pub censor_fraction: f64,
}

/// JSON sidecar for one campaign: config echo (including the seed) plus
/// per-β summaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryDoc {
    pub config: ExperimentConfig,
    pub per_beta: Vec<BetaSummary>,
    pub mean_censor_rate: f64,
}

impl SummaryDoc {
    pub fn from_summary(summary: &SweepSummary) -> Self {
        SummaryDoc {
            config: summary.config.clone(),
            per_beta: summary.per_beta.clone(),
            mean_censor_rate: summary.mean_censor_rate,
        }
    }
}

/// JSON sidecar for a sweep across sample sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDoc {
    pub case_id: String,
    pub master_seed: u64,
    pub replications: usize,
    pub beta_grid: Vec<f64>,
    pub n_values: Vec<usize>,
    pub runs: Vec<SweepRunDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRunDoc {
    pub n: usize,
    pub per_beta: Vec<BetaSummary>,
    pub mean_censor_rate: f64,
}

/// 17 significant digits: enough to reconstruct any f64 exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn rows_from_summary(summary: &SweepSummary) -> Vec<ResultRow> {
    summary
        .records
        .iter()
        .map(|r| ResultRow {
            case_id: summary.config.case_id.clone(),
            n: summary.config.n,
            beta: r.beta,
            replication: r.replication,
            gamma_x_hat: r.gamma_x_hat,
            relative_error: r.relative_error,
            truncated_by_s: r.truncated_by_s,
            truncated_by_h: r.truncated_by_h,
            censor_fraction: r.censor_fraction,
        })
        .collect()
}

pub fn write_rows_csv(path: &Path, rows: &[ResultRow]) -> Result<(), CliError> {
    let mut out = String::with_capacity(rows.len() * 96 + CSV_HEADER.len() + 1);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.case_id,
            r.n,
            fmt_f64(r.beta),
            r.replication,
            fmt_f64(r.gamma_x_hat),
            fmt_f64(r.relative_error),
            r.truncated_by_s,
            r.truncated_by_h,
            fmt_f64(r.censor_fraction),
        ));
    }
    fs::File::create(path)?.write_all(out.as_bytes())?;
    Ok(())
}

pub fn read_rows_csv(path: &Path) -> Result<Vec<ResultRow>, CliError> {
    let content = fs::read_to_string(path)?;
    let display = path.display().to_string();
    let parse_err = |line: usize, message: String| CliError::Parse {
        path: display.clone(),
        line,
        message,
    };
    let mut lines = content.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        other => {
            return Err(parse_err(
                1,
                format!("expected result header, got {other:?}"),
            ))
        }
    }
    let mut rows = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != 9 {
            return Err(parse_err(line_no, format!("expected 9 fields, got {}", fields.len())));
        }
        let f = |i: usize| -> Result<f64, CliError> {
            fields[i]
                .parse()
                .map_err(|_| parse_err(line_no, format!("invalid float \"{}\"", fields[i])))
        };
        let b = |i: usize| -> Result<bool, CliError> {
            fields[i]
                .parse()
                .map_err(|_| parse_err(line_no, format!("invalid bool \"{}\"", fields[i])))
        };
        rows.push(ResultRow {
            case_id: fields[0].to_string(),
            n: fields[1]
                .parse()
                .map_err(|_| parse_err(line_no, format!("invalid count \"{}\"", fields[1])))?,
            beta: f(2)?,
            replication: fields[3]
                .parse()
                .map_err(|_| parse_err(line_no, format!("invalid count \"{}\"", fields[3])))?,
            gamma_x_hat: f(4)?,
            relative_error: f(5)?,
            truncated_by_s: b(6)?,
            truncated_by_h: b(7)?,
            censor_fraction: f(8)?,
        });
    }
    Ok(rows)
}

pub fn write_json<T: Serialize>(path: &Path, doc: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(doc).expect("documents are serializable");
    text.push('\n');
    fs::File::create(path)?.write_all(text.as_bytes())?;
    Ok(())
}
