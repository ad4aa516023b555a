//! Option resolution: command-line flags win over `DLENS_*` environment
//! variables, which win over the built-in defaults (absolute threshold 3,
//! ratio threshold 0.27, model order 5, long-line limit 120).

use crate::{usage, Failure};
use clap::ValueEnum;
use dlens_core::ccd::CcdConfig;
use dlens_core::classify::{ThresholdConfig, ThresholdMode};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Metric {
    Cc,
    Ccd,
    Ppl,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Cc => "cc",
            Metric::Ccd => "ccd",
            Metric::Ppl => "ppl",
        }
    }

    /// Scale-free metrics default to the ratio rule; score-like metrics to
    /// the absolute rule.
    pub fn default_mode(self) -> ThresholdMode {
        match self {
            Metric::Cc | Metric::Ccd => ThresholdMode::Absolute,
            Metric::Ppl => ThresholdMode::Ratio,
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cc" => Ok(Metric::Cc),
            "ccd" => Ok(Metric::Ccd),
            "ppl" | "perplexity" => Ok(Metric::Ppl),
            other => Err(format!("unknown metric '{other}' (expected cc/ccd/ppl)")),
        }
    }
}

/// Parse a comma-separated metric list, preserving order and dropping
/// duplicates.
pub fn parse_metrics(s: &str) -> Result<Vec<Metric>, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let metric: Metric = part.parse()?;
        if !out.contains(&metric) {
            out.push(metric);
        }
    }
    if out.is_empty() {
        return Err("no metric given".to_string());
    }
    Ok(out)
}

fn env_parsed<T: FromStr>(name: &str) -> Result<Option<T>, Failure>
where
    T::Err: std::fmt::Display,
{
    match std::env::var(name) {
        Ok(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|e| usage(format!("invalid {name}={raw}: {e}"))),
        Err(_) => Ok(None),
    }
}

pub fn default_threshold(mode: ThresholdMode) -> f64 {
    match mode {
        ThresholdMode::Absolute => 3.0,
        ThresholdMode::Ratio => 0.27,
    }
}

/// Resolve the classification rule for a metric.
pub fn resolve_threshold(
    metric: Metric,
    mode_flag: Option<ThresholdMode>,
    t_flag: Option<f64>,
) -> Result<ThresholdConfig, Failure> {
    let mode = match mode_flag {
        Some(m) => m,
        None => env_parsed::<ThresholdMode>("DLENS_MODE")?.unwrap_or(metric.default_mode()),
    };
    let t = match t_flag {
        Some(t) => t,
        None => env_parsed::<f64>("DLENS_THRESHOLD")?.unwrap_or(default_threshold(mode)),
    };
    ThresholdConfig::new(mode, t).map_err(|e| usage(e.to_string()))
}

/// Resolve the model order for training.
pub fn resolve_order(flag: Option<usize>) -> Result<usize, Failure> {
    let order = match flag {
        Some(o) => o,
        None => env_parsed::<usize>("DLENS_ORDER")?.unwrap_or(5),
    };
    if order < 1 {
        return Err(usage("model order must be at least 1".to_string()));
    }
    Ok(order)
}

/// Resolve the long-line limit for the extended metric.
pub fn resolve_ccd_config(flag: Option<usize>) -> Result<CcdConfig, Failure> {
    let limit = match flag {
        Some(l) => l,
        None => env_parsed::<usize>("DLENS_LINE_LIMIT")?.unwrap_or(120),
    };
    if limit == 0 {
        return Err(usage("line limit must be positive".to_string()));
    }
    Ok(CcdConfig {
        long_line_threshold: limit,
    })
}
