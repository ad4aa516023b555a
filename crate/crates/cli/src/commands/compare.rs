//! `dlens compare`: classify decompiled files against their originals.

use super::{lex_file, load_model_if_needed, parse_file};
use crate::config::{parse_metrics, resolve_ccd_config, resolve_threshold, Metric};
use crate::manifest::{read_manifest, PairRecord};
use crate::report::{eval_json, eval_table, print_row, ScoreValue};
use crate::{data, CmdResult, Failure};
use clap::Args;
use dlens_core::ccd::{cognitive_complexity_d_with, detect_patterns_with, CcdConfig};
use dlens_core::classify::{evaluate, Label, ThresholdConfig, ThresholdMode};
use dlens_core::cognitive::cognitive_complexity;
use dlens_core::ngram::NgramModel;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Args)]
pub struct CompareArgs {
    /// Pair manifest (CSV).
    #[arg(long)]
    manifest: PathBuf,

    /// Comma-separated metrics to compare: cc, ccd, ppl.
    #[arg(long, default_value = "cc")]
    metric: String,

    /// Threshold mode override (absolute/ratio); per-metric default otherwise.
    #[arg(long)]
    mode: Option<ThresholdMode>,

    /// Threshold value override (absolute: t >= 0, ratio: 0 <= t < 1).
    #[arg(long)]
    threshold: Option<f64>,

    /// Trained language model (required when ppl is requested).
    #[arg(long)]
    model: Option<PathBuf>,

    /// Long-line limit for ccd (default 120, env DLENS_LINE_LIMIT).
    #[arg(long)]
    line_limit: Option<usize>,

    /// Also write per-pair rows to this CSV file.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct MetricOutcome {
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<ScoreValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decompiled: Option<ScoreValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    predicted: Option<Label>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct CompareRow {
    pair_id: String,
    source_path: String,
    decompiled_path: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<Label>,
    #[serde(skip_serializing_if = "Option::is_none")]
    project: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decompiler: Option<String>,
    metrics: BTreeMap<&'static str, MetricOutcome>,
    /// Patterns present in the decompiled file.
    #[serde(skip_serializing_if = "Option::is_none")]
    patterns: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// Metric values for one file of a pair.
struct FileScores {
    cc: Result<u64, String>,
    ccd: Result<u64, String>,
    ppl: Result<f64, String>,
}

fn analyze_file(
    path: &std::path::Path,
    metrics: &[Metric],
    ccd_config: &CcdConfig,
    model: Option<&NgramModel>,
    want_patterns: bool,
) -> (FileScores, Option<Vec<String>>) {
    let needs_parse =
        want_patterns || metrics.contains(&Metric::Cc) || metrics.contains(&Metric::Ccd);
    let parsed = if needs_parse {
        Some(parse_file(path))
    } else {
        None
    };
    let mut scores = FileScores {
        cc: Err("not requested".to_string()),
        ccd: Err("not requested".to_string()),
        ppl: Err("not requested".to_string()),
    };
    let mut patterns = None;
    match &parsed {
        Some(Ok(unit)) => {
            if metrics.contains(&Metric::Cc) {
                scores.cc = Ok(cognitive_complexity(unit).file_total);
            }
            if metrics.contains(&Metric::Ccd) {
                scores.ccd = Ok(cognitive_complexity_d_with(unit, ccd_config).file_total);
            }
            if want_patterns {
                patterns = Some(
                    detect_patterns_with(unit, ccd_config)
                        .present()
                        .iter()
                        .map(|p| p.to_string())
                        .collect(),
                );
            }
        }
        Some(Err(e)) => {
            if metrics.contains(&Metric::Cc) {
                scores.cc = Err(e.clone());
            }
            if metrics.contains(&Metric::Ccd) {
                scores.ccd = Err(e.clone());
            }
        }
        None => {}
    }
    if metrics.contains(&Metric::Ppl) {
        scores.ppl = match model {
            Some(model) => lex_file(path).and_then(|tokens| {
                model
                    .perplexity(&tokens)
                    .map(|s| s.value)
                    .map_err(|e| format!("{}: {e}", path.display()))
            }),
            None => Err("no language model loaded".to_string()),
        };
    }
    (scores, patterns)
}

pub fn run(args: CompareArgs) -> CmdResult {
    let metrics = parse_metrics(&args.metric).map_err(crate::usage)?;
    let ccd_config = resolve_ccd_config(args.line_limit)?;
    let model = load_model_if_needed(&metrics, args.model.as_deref())?;
    let mut configs: BTreeMap<Metric, ThresholdConfig> = BTreeMap::new();
    for &metric in &metrics {
        configs.insert(metric, resolve_threshold(metric, args.mode, args.threshold)?);
    }

    let pairs = read_manifest(&args.manifest)?;
    let rows: Vec<CompareRow> = pairs
        .par_iter()
        .map(|pair| build_row(pair, &metrics, &configs, &ccd_config, model.as_ref()))
        .collect();

    let mut failures = 0usize;
    for row in &rows {
        print_row(row);
        let row_failed = row.error.is_some()
            || row
                .metrics
                .values()
                .any(|outcome| outcome.error.is_some());
        if row_failed {
            failures += 1;
        }
    }

    // Evaluation against ground truth, per metric, over labeled pairs with
    // successful predictions.
    for &metric in &metrics {
        let config = &configs[&metric];
        let mut predictions = Vec::new();
        let mut truths = Vec::new();
        for row in &rows {
            let (Some(label), Some(outcome)) = (row.label, row.metrics.get(metric.name())) else {
                continue;
            };
            if let Some(predicted) = outcome.predicted {
                predictions.push(predicted);
                truths.push(label);
            }
        }
        if predictions.is_empty() {
            continue;
        }
        let report = evaluate(&predictions, &truths).map_err(|e| data(e.to_string()))?;
        print_row(&serde_json::json!({ "eval": eval_json(metric.name(), config, &report) }));
        eprint!(
            "{}",
            eval_table(
                &format!(
                    "evaluation: metric={} mode={} t={}",
                    metric.name(),
                    config.mode,
                    config.t
                ),
                &report
            )
        );
    }

    if let Some(csv_path) = &args.csv {
        write_csv(csv_path, &metrics, &rows)?;
    }
    eprintln!("compared {} pair(s), {} failure(s)", rows.len(), failures);
    Ok(if failures > 0 { 2 } else { 0 })
}

fn build_row(
    pair: &PairRecord,
    metrics: &[Metric],
    configs: &BTreeMap<Metric, ThresholdConfig>,
    ccd_config: &CcdConfig,
    model: Option<&NgramModel>,
) -> CompareRow {
    let (source_scores, _) = analyze_file(&pair.source_path, metrics, ccd_config, model, false);
    let (decompiled_scores, patterns) =
        analyze_file(&pair.decompiled_path, metrics, ccd_config, model, true);

    let mut outcomes = BTreeMap::new();
    for &metric in metrics {
        let cell = |scores: &FileScores| -> Result<ScoreValue, String> {
            match metric {
                Metric::Cc => scores.cc.clone().map(ScoreValue::Int),
                Metric::Ccd => scores.ccd.clone().map(ScoreValue::Int),
                Metric::Ppl => scores.ppl.clone().map(ScoreValue::Float),
            }
        };
        let outcome = match (cell(&source_scores), cell(&decompiled_scores)) {
            (Ok(source), Ok(decompiled)) => {
                match configs[&metric].classify(decompiled.as_f64(), source.as_f64()) {
                    Ok(predicted) => MetricOutcome {
                        source: Some(source),
                        decompiled: Some(decompiled),
                        predicted: Some(predicted),
                        error: None,
                    },
                    Err(e) => MetricOutcome {
                        source: Some(source),
                        decompiled: Some(decompiled),
                        predicted: None,
                        error: Some(e.to_string()),
                    },
                }
            }
            (source, decompiled) => MetricOutcome {
                source: source.as_ref().ok().copied(),
                decompiled: decompiled.as_ref().ok().copied(),
                predicted: None,
                error: source.err().or(decompiled.err()),
            },
        };
        outcomes.insert(metric.name(), outcome);
    }
    CompareRow {
        pair_id: pair.pair_id.clone(),
        source_path: pair.source_path.display().to_string(),
        decompiled_path: pair.decompiled_path.display().to_string(),
        label: pair.label,
        project: pair.project.clone(),
        decompiler: pair.decompiler.clone(),
        metrics: outcomes,
        patterns,
        error: None,
    }
}

fn write_csv(
    path: &PathBuf,
    metrics: &[Metric],
    rows: &[CompareRow],
) -> Result<(), Failure> {
    let mut writer =
        csv::Writer::from_path(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
    writer
        .write_record([
            "pair_id",
            "source_path",
            "decompiled_path",
            "label",
            "project",
            "decompiler",
            "metric",
            "source_score",
            "decompiled_score",
            "predicted",
            "patterns",
            "error",
        ])
        .map_err(|e| data(e.to_string()))?;
    for row in rows {
        for metric in metrics {
            let outcome = &row.metrics[metric.name()];
            let fmt = |v: Option<ScoreValue>| {
                v.map(|v| match v {
                    ScoreValue::Int(i) => i.to_string(),
                    ScoreValue::Float(f) => f.to_string(),
                })
                .unwrap_or_default()
            };
            writer
                .write_record([
                    row.pair_id.as_str(),
                    row.source_path.as_str(),
                    row.decompiled_path.as_str(),
                    &row.label.map(|l| l.to_string()).unwrap_or_default(),
                    row.project.as_deref().unwrap_or(""),
                    row.decompiler.as_deref().unwrap_or(""),
                    metric.name(),
                    &fmt(outcome.source),
                    &fmt(outcome.decompiled),
                    &outcome
                        .predicted
                        .map(|l| l.to_string())
                        .unwrap_or_default(),
                    &row.patterns
                        .as_ref()
                        .map(|p| p.join("|"))
                        .unwrap_or_default(),
                    outcome.error.as_deref().unwrap_or(""),
                ])
                .map_err(|e| data(e.to_string()))?;
        }
    }
    writer.flush().map_err(|e| data(e.to_string()))?;
    Ok(())
}
