//! `dlens score`: per-file metric values.

use super::{load_model_if_needed, parse_file, score_file};
use crate::config::{resolve_ccd_config, Metric};
use crate::report::{print_row, ScoreValue};
use crate::{data, CmdResult};
use clap::Args;
use dlens_core::ccd::{cognitive_complexity_d_with, RuleId};
use dlens_core::cognitive::cognitive_complexity;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Args)]
pub struct ScoreArgs {
    /// Metric to compute: cc, ccd, or ppl.
    #[arg(long, value_enum)]
    metric: Metric,

    /// Trained language model (required for ppl).
    #[arg(long)]
    model: Option<PathBuf>,

    /// Long-line limit for ccd (default 120, env DLENS_LINE_LIMIT).
    #[arg(long)]
    line_limit: Option<usize>,

    /// Also write rows to this CSV file.
    #[arg(long)]
    csv: Option<PathBuf>,

    /// Java files to score.
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

#[derive(Serialize)]
struct ScoreRow {
    path: String,
    metric: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<ScoreValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    methods: Option<Vec<MethodRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rules: Option<BTreeMap<String, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct MethodRow {
    name: String,
    total: u64,
}

pub fn run(args: ScoreArgs) -> CmdResult {
    let ccd_config = resolve_ccd_config(args.line_limit)?;
    let model = load_model_if_needed(&[args.metric], args.model.as_deref())?;
    let metric = args.metric;

    let rows: Vec<ScoreRow> = args
        .files
        .par_iter()
        .map(|path| {
            let display = path.display().to_string();
            match metric {
                Metric::Cc => match parse_file(path) {
                    Ok(unit) => {
                        let breakdown = cognitive_complexity(&unit);
                        ScoreRow {
                            path: display,
                            metric: metric.name(),
                            value: Some(ScoreValue::Int(breakdown.file_total)),
                            methods: Some(
                                breakdown
                                    .methods
                                    .iter()
                                    .map(|m| MethodRow {
                                        name: m.name.clone(),
                                        total: m.total,
                                    })
                                    .collect(),
                            ),
                            rules: None,
                            error: None,
                        }
                    }
                    Err(e) => error_row(display, metric, e),
                },
                Metric::Ccd => match parse_file(path) {
                    Ok(unit) => {
                        let breakdown = cognitive_complexity_d_with(&unit, &ccd_config);
                        let rules = [
                            RuleId::R1,
                            RuleId::R2,
                            RuleId::R3,
                            RuleId::R4,
                            RuleId::R5,
                            RuleId::R6,
                        ]
                        .into_iter()
                        .map(|r| (r.to_string(), breakdown.rule_total(r)))
                        .collect();
                        ScoreRow {
                            path: display,
                            metric: metric.name(),
                            value: Some(ScoreValue::Int(breakdown.file_total)),
                            methods: None,
                            rules: Some(rules),
                            error: None,
                        }
                    }
                    Err(e) => error_row(display, metric, e),
                },
                Metric::Ppl => match score_file(path, metric, &ccd_config, model.as_ref()) {
                    Ok(value) => ScoreRow {
                        path: display,
                        metric: metric.name(),
                        value: Some(value),
                        methods: None,
                        rules: None,
                        error: None,
                    },
                    Err(e) => error_row(display, metric, e),
                },
            }
        })
        .collect();

    let mut failures = 0usize;
    for row in &rows {
        print_row(row);
        if row.error.is_some() {
            failures += 1;
        }
    }
    if let Some(csv_path) = &args.csv {
        write_csv(csv_path, &rows)?;
    }
    eprintln!(
        "scored {} file(s) with {}, {} failure(s)",
        rows.len(),
        metric.name(),
        failures
    );
    Ok(if failures > 0 { 2 } else { 0 })
}

fn error_row(path: String, metric: Metric, error: String) -> ScoreRow {
    ScoreRow {
        path,
        metric: metric.name(),
        value: None,
        methods: None,
        rules: None,
        error: Some(error),
    }
}

fn write_csv(path: &PathBuf, rows: &[ScoreRow]) -> Result<(), crate::Failure> {
    let mut writer =
        csv::Writer::from_path(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
    writer
        .write_record(["path", "metric", "value", "error"])
        .map_err(|e| data(e.to_string()))?;
    for row in rows {
        let value = row
            .value
            .map(|v| match v {
                ScoreValue::Int(i) => i.to_string(),
                ScoreValue::Float(f) => f.to_string(),
            })
            .unwrap_or_default();
        writer
            .write_record([
                row.path.as_str(),
                row.metric,
                value.as_str(),
                row.error.as_deref().unwrap_or(""),
            ])
            .map_err(|e| data(e.to_string()))?;
    }
    writer.flush().map_err(|e| data(e.to_string()))?;
    Ok(())
}
