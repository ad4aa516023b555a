//! `dlens tune`: grid-search a classification threshold on labeled pairs.

use super::{load_model_if_needed, score_file};
use crate::config::{resolve_ccd_config, Metric};
use crate::manifest::read_manifest;
use crate::report::{fmt2, print_row};
use crate::{data, usage, CmdResult};
use clap::Args;
use dlens_core::classify::{
    default_absolute_grid, default_ratio_grid, tune_threshold, Label, ThresholdMode,
};
use rayon::prelude::*;
use std::path::PathBuf;

#[derive(Args)]
pub struct TuneArgs {
    /// Pair manifest (CSV) with a label for every row.
    #[arg(long)]
    manifest: PathBuf,

    /// Metric to tune: cc, ccd, or ppl.
    #[arg(long, value_enum)]
    metric: Metric,

    /// Threshold mode (absolute/ratio); per-metric default otherwise.
    #[arg(long)]
    mode: Option<ThresholdMode>,

    /// Comma-separated grid of thresholds. Defaults: integers 0-10 for
    /// absolute mode, 0.01-0.50 in 0.01 steps for ratio mode.
    #[arg(long)]
    grid: Option<String>,

    /// Trained language model (required for ppl).
    #[arg(long)]
    model: Option<PathBuf>,

    /// Long-line limit for ccd (default 120, env DLENS_LINE_LIMIT).
    #[arg(long)]
    line_limit: Option<usize>,
}

pub fn run(args: TuneArgs) -> CmdResult {
    let mode = args.mode.unwrap_or(args.metric.default_mode());
    let grid = match &args.grid {
        Some(raw) => parse_grid(raw)?,
        None => match mode {
            ThresholdMode::Absolute => default_absolute_grid(),
            ThresholdMode::Ratio => default_ratio_grid(),
        },
    };
    let ccd_config = resolve_ccd_config(args.line_limit)?;
    let model = load_model_if_needed(&[args.metric], args.model.as_deref())?;

    let pairs = read_manifest(&args.manifest)?;
    let mut truths = Vec::with_capacity(pairs.len());
    for pair in &pairs {
        match pair.label {
            Some(label) => truths.push(label),
            None => {
                return Err(data(format!(
                    "pair '{}' has no label; tuning needs ground truth for every row",
                    pair.pair_id
                )))
            }
        }
    }

    let scored: Vec<Result<(f64, f64), String>> = pairs
        .par_iter()
        .map(|pair| {
            let decompiled =
                score_file(&pair.decompiled_path, args.metric, &ccd_config, model.as_ref())?;
            let original =
                score_file(&pair.source_path, args.metric, &ccd_config, model.as_ref())?;
            Ok((decompiled.as_f64(), original.as_f64()))
        })
        .collect();
    let mut score_pairs = Vec::with_capacity(scored.len());
    for (result, pair) in scored.into_iter().zip(&pairs) {
        match result {
            Ok(values) => score_pairs.push(values),
            Err(e) => {
                return Err(data(format!("pair '{}': {e}", pair.pair_id)));
            }
        }
    }

    let result = tune_threshold(&score_pairs, &truths, mode, &grid)
        .map_err(|e| match e {
            dlens_core::classify::ClassifyError::InvalidThreshold(..) => usage(e.to_string()),
            other => data(other.to_string()),
        })?;

    print_row(&serde_json::json!({
        "metric": args.metric.name(),
        "mode": mode.to_string(),
        "pairs": score_pairs.len(),
        "grid": result
            .grid
            .iter()
            .map(|(t, f1)| serde_json::json!({ "t": t, "macro_f1": f1 }))
            .collect::<Vec<_>>(),
        "best_t": result.best_t,
        "best_macro_f1": result.best_macro_f1,
    }));
    eprintln!("grid search over {} threshold(s):", result.grid.len());
    for (t, f1) in &result.grid {
        eprintln!("  t={t:<6} macro F1 {}", fmt2(*f1));
    }
    eprintln!(
        "best threshold {} with macro F1 {}",
        result.best_t,
        fmt2(result.best_macro_f1)
    );
    let _ = truths_summary(&truths);
    Ok(0)
}

fn truths_summary(truths: &[Label]) -> [usize; 3] {
    let mut counts = [0usize; 3];
    for t in truths {
        counts[t.index()] += 1;
    }
    counts
}

fn parse_grid(raw: &str) -> Result<Vec<f64>, crate::Failure> {
    let mut grid = Vec::new();
    for part in raw.split(',') {
        let t: f64 = part
            .trim()
            .parse()
            .map_err(|e| usage(format!("invalid grid value '{part}': {e}")))?;
        grid.push(t);
    }
    if grid.is_empty() {
        return Err(usage("empty threshold grid"));
    }
    Ok(grid)
}
