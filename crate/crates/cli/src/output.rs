//! CSV and JSON writers for sweep and ensemble results.
//!
//! CSV carries 12 significant digits for readability; JSON numbers are
//! serialized in shortest round-trip form, so parsing the file
//! reconstructs the in-memory values bit for bit.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use spinstar::{CapacityPoint, EnsembleResult};

use crate::config::OutputFormat;
use crate::CliError;

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ThetaValue {
    pub theta: f64,
    pub value: f64,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub ratio_abs: f64,
    pub q: f64,
    pub c_e: f64,
    pub q_e: f64,
    pub c: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub c_e_lim: Vec<ThetaValue>,
}

impl From<&CapacityPoint> for SweepRow {
    fn from(p: &CapacityPoint) -> Self {
        SweepRow {
            t: p.t,
            ratio_abs: p.ratio_abs,
            q: p.q,
            c_e: p.c_e,
            q_e: p.q_e,
            c: p.c_classical,
            c_e_lim: p
                .c_e_lim
                .iter()
                .map(|&(theta, value)| ThetaValue { theta, value })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct SweepDocument {
    pub mode: String,
    pub alpha: f64,
    pub beta: f64,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct EnsembleRow {
    pub t: f64,
    pub mean_q: f64,
    pub mean_c_e: f64,
    pub mean_q_e: f64,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct EnsembleDocument {
    pub mode: String,
    pub alpha: f64,
    pub beta: f64,
    pub n_bath: usize,
    pub samples: usize,
    pub seed: u64,
    pub rows: Vec<EnsembleRow>,
}

/// 12 significant digits, locale-independent.
fn fmt(value: f64) -> String {
    format!("{value:.11e}")
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| CliError::run(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    fs::write(path, contents)
        .map_err(|e| CliError::run(format!("cannot write {}: {e}", path.display())))
}

pub fn write_sweep(
    path: &Path,
    format: OutputFormat,
    alpha: f64,
    beta: f64,
    mode: &str,
    points: &[CapacityPoint],
    theta_grid: &[f64],
) -> Result<(), CliError> {
    match format {
        OutputFormat::Csv => {
            let mut out = String::new();
            out.push_str("t,ratio_abs,Q,C_E,Q_E,C");
            for theta in theta_grid {
                out.push_str(&format!(",C_E_lim@{theta}"));
            }
            out.push('\n');
            for p in points {
                let mut line = format!(
                    "{},{},{},{},{},{}",
                    fmt(p.t),
                    fmt(p.ratio_abs),
                    fmt(p.q),
                    fmt(p.c_e),
                    fmt(p.q_e),
                    fmt(p.c_classical),
                );
                for &(_, value) in &p.c_e_lim {
                    line.push(',');
                    line.push_str(&fmt(value));
                }
                out.push_str(&line);
                out.push('\n');
            }
            write_file(path, out.as_bytes())
        }
        OutputFormat::Json => {
            let doc = SweepDocument {
                mode: mode.to_string(),
                alpha,
                beta,
                rows: points.iter().map(SweepRow::from).collect(),
            };
            let mut bytes = serde_json::to_vec_pretty(&doc)
                .map_err(|e| CliError::run(format!("serialization failed: {e}")))?;
            bytes.push(b'\n');
            write_file(path, &bytes)
        }
    }
}

pub fn write_ensemble(
    path: &Path,
    format: OutputFormat,
    alpha: f64,
    beta: f64,
    n_bath: usize,
    samples: usize,
    result: &EnsembleResult,
) -> Result<(), CliError> {
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("t,mean_Q,mean_C_E,mean_Q_E\n");
            for (k, &t) in result.time_grid.iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt(t),
                    fmt(result.mean_q[k]),
                    fmt(result.mean_ce[k]),
                    fmt(result.mean_qe[k]),
                ));
            }
            write_file(path, out.as_bytes())
        }
        OutputFormat::Json => {
            let doc = EnsembleDocument {
                mode: "ensemble".to_string(),
                alpha,
                beta,
                n_bath,
                samples,
                seed: result.seed_used,
                rows: result
                    .time_grid
                    .iter()
                    .enumerate()
                    .map(|(k, &t)| EnsembleRow {
                        t,
                        mean_q: result.mean_q[k],
                        mean_c_e: result.mean_ce[k],
                        mean_q_e: result.mean_qe[k],
                    })
                    .collect(),
            };
            let mut bytes = serde_json::to_vec_pretty(&doc)
                .map_err(|e| CliError::run(format!("serialization failed: {e}")))?;
            bytes.push(b'\n');
            write_file(path, &bytes)
        }
    }
}

/// Diagnostics block the `limits` subcommand prints to stdout.
#[derive(Debug, Serialize)]
pub struct LimitsDiagnostics {
    /// Recurrence period `pi / (2 alpha g)`; absent for non-equal baths.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recurrence_period: Option<f64>,
    /// Max |Q(t) - Q(t + T_p)| over the grid, when a period exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub periodicity_residual: Option<f64>,
    /// Max disagreement between the closed-form and product coherence
    /// ratios over the grid, when the bath is equal-coupling.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_residual: Option<f64>,
    /// Min and max quantum capacity over the swept grid.
    pub min_q: f64,
    pub max_q: f64,
    /// Short-time deficits `(alpha*eps, 1 - Q(eps))`.
    pub short_time_deficits: Vec<(f64, f64)>,
}

pub fn print_diagnostics(diag: &LimitsDiagnostics) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(diag)
        .map_err(|e| CliError::run(format!("serialization failed: {e}")))?;
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "{text}").map_err(|e| CliError::run(format!("stdout: {e}")))
}
