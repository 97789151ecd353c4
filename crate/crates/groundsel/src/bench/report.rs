//! Structured experiment reports and their deterministic CSV/JSON emission.
//!
//! Emission is byte-stable for identical report content: struct field order
//! is fixed, maps are sorted, and every float is formatted at 12 significant
//! digits.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::greedy::{Algorithm, SelectionTrace};
use crate::oracle::OracleKind;

use super::config::{ExperimentConfig, ReportFormat, Topology};
use super::fit::ScalingFit;
use super::BenchError;

/// One experiment cell: a single optimizer run at one parameter point.
#[derive(Debug, Clone, Serialize)]
pub struct CellResult {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub topology: Option<Topology>,
    pub n: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub oracle: OracleKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_out_factor: Option<f64>,
    pub outcome: CellOutcome,
}

impl CellResult {
    pub fn trace(&self) -> Option<&SelectionTrace> {
        match &self.outcome {
            CellOutcome::Ok { trace } => Some(trace),
            CellOutcome::Failed { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CellOutcome {
    Ok { trace: SelectionTrace },
    Failed { error: String },
}

/// One aggregate table row: named labels plus named metric values.
#[derive(Debug, Clone, Serialize)]
pub struct AggregateRow {
    pub table: String,
    pub labels: BTreeMap<String, String>,
    pub metrics: BTreeMap<String, f64>,
}

/// A fitted power law for one (table, labels) group, with optional
/// extrapolated predictions.
#[derive(Debug, Clone, Serialize)]
pub struct FitRow {
    pub table: String,
    pub labels: BTreeMap<String, String>,
    pub fit: ScalingFit,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub predictions: Vec<Prediction>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Prediction {
    pub n: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub cells: Vec<CellResult>,
    pub aggregates: Vec<AggregateRow>,
    pub fits: Vec<FitRow>,
    pub failed_cells: usize,
}

impl ExperimentReport {
    pub fn has_failures(&self) -> bool {
        self.failed_cells > 0
    }
}

/// Formats a float with 12 significant digits, positional where readable
/// (`%.12g`-style), trailing zeros trimmed.
pub fn fmt_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    let neg = mantissa.starts_with('-');
    let digits: Vec<u8> = mantissa
        .bytes()
        .filter(|b| b.is_ascii_digit())
        .collect();
    let digits = String::from_utf8(digits).expect("digits");
    let trimmed = digits.trim_end_matches('0');
    let digits = if trimmed.is_empty() { "0" } else { trimmed };

    let body = if (-4..12).contains(&exp) {
        if exp >= 0 {
            let int_len = (exp + 1) as usize;
            if digits.len() > int_len {
                format!("{}.{}", &digits[..int_len], &digits[int_len..])
            } else {
                let mut s = digits.to_string();
                s.push_str(&"0".repeat(int_len - digits.len()));
                s
            }
        } else {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        }
    } else if digits.len() > 1 {
        format!("{}.{}e{}", &digits[..1], &digits[1..], exp)
    } else {
        format!("{digits}e{exp}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Rounds a float to 12 significant digits (the JSON counterpart of
/// [`fmt_sig12`]).
pub fn round_sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    fmt_sig12(x).parse().expect("round-trip")
}

fn round_json_floats(value: serde_json::Value) -> serde_json::Value {
    use serde_json::Value;
    match value {
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.is_f64() {
                    return serde_json::Number::from_f64(round_sig12(f))
                        .map(Value::Number)
                        .unwrap_or(Value::Null);
                }
            }
            Value::Number(n)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_json_floats).collect()),
        Value::Object(map) => Value::Object(
            map.into_iter()
                .map(|(k, v)| (k, round_json_floats(v)))
                .collect(),
        ),
        other => other,
    }
}

fn opt_num<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn opt_f64(v: &Option<f64>) -> String {
    v.map(fmt_sig12).unwrap_or_default()
}

fn cells_csv(report: &ExperimentReport) -> String {
    let mut out = String::new();
    out.push_str(
        "cell,topology,n,k,epsilon,seed,algorithm,oracle,p_out_factor,status,error,\
         iteration,node,objective,gain,cumulative_calls,cumulative_seconds,recomputations,sample_size\n",
    );
    for cell in &report.cells {
        let prefix = format!(
            "{},{},{},{},{},{},{},{},{}",
            cell.id,
            opt_num(&cell.topology),
            cell.n,
            cell.k,
            opt_f64(&cell.epsilon),
            cell.seed,
            cell.algorithm,
            cell.oracle,
            opt_f64(&cell.p_out_factor),
        );
        match &cell.outcome {
            CellOutcome::Failed { error } => {
                let sanitized = error.replace([',', '\n'], ";");
                out.push_str(&format!("{prefix},failed,{sanitized},,,,,,,,\n"));
            }
            CellOutcome::Ok { trace } => {
                for r in &trace.records {
                    out.push_str(&format!(
                        "{prefix},ok,,{},{},{},{},{},{},{},{}\n",
                        r.iteration,
                        r.node,
                        fmt_sig12(r.objective),
                        opt_f64(&r.gain),
                        r.cumulative_calls,
                        fmt_sig12(r.cumulative_seconds),
                        opt_num(&r.recomputations),
                        opt_num(&r.sample_size),
                    ));
                }
            }
        }
    }
    out
}

fn aggregates_csv(report: &ExperimentReport) -> String {
    let mut rows: Vec<String> = Vec::new();
    for agg in &report.aggregates {
        let labels = agg
            .labels
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";");
        for (metric, value) in &agg.metrics {
            rows.push(format!(
                "{},{},{},{}",
                agg.table,
                labels,
                metric,
                fmt_sig12(*value)
            ));
        }
    }
    rows.sort();
    let mut out = String::from("table,labels,metric,value\n");
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

fn fits_csv(report: &ExperimentReport) -> String {
    let mut out = String::from(
        "table,labels,coefficient,exponent,r_squared,exponent_stderr,ci95_low,ci95_high,points\n",
    );
    for fit in &report.fits {
        let labels = fit
            .labels
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            fit.table,
            labels,
            fmt_sig12(fit.fit.coefficient),
            fmt_sig12(fit.fit.exponent),
            fmt_sig12(fit.fit.r_squared),
            fmt_sig12(fit.fit.exponent_stderr),
            fmt_sig12(fit.fit.exponent_ci95.0),
            fmt_sig12(fit.fit.exponent_ci95.1),
            fit.fit.points,
        ));
    }
    out
}

/// Writes the report under `dir` and returns the written paths.
///
/// JSON produces a single `report.json`; CSV produces `cells.csv`,
/// `aggregates.csv`, and `fits.csv`. Identical report content produces
/// identical bytes.
pub fn emit_report(
    report: &ExperimentReport,
    format: ReportFormat,
    dir: &Path,
) -> Result<Vec<PathBuf>, BenchError> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    match format {
        ReportFormat::Json => {
            let value = round_json_floats(serde_json::to_value(report)?);
            let path = dir.join("report.json");
            let mut file = fs::File::create(&path)?;
            serde_json::to_writer_pretty(&mut file, &value)?;
            file.write_all(b"\n")?;
            written.push(path);
        }
        ReportFormat::Csv => {
            for (name, content) in [
                ("cells.csv", cells_csv(report)),
                ("aggregates.csv", aggregates_csv(report)),
                ("fits.csv", fits_csv(report)),
            ] {
                let path = dir.join(name);
                fs::write(&path, content)?;
                written.push(path);
            }
        }
    }
    Ok(written)
}
