//! Report shapes shared by the subcommands. Rows go to stdout as JSON
//! Lines; human-readable summaries go to stderr. JSON carries full
//! precision, the summaries round to two decimals half-away-from-zero.

use dlens_core::classify::{EvalReport, ThresholdConfig};
use serde::Serialize;

/// Round to two decimals, halves away from zero.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Format with exactly two decimals after [`round2`].
pub fn fmt2(x: f64) -> String {
    format!("{:.2}", round2(x))
}

/// A score that is integral for rule-based metrics and real for perplexity.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
#[serde(untagged)]
pub enum ScoreValue {
    Int(u64),
    Float(f64),
}

impl ScoreValue {
    pub fn as_f64(self) -> f64 {
        match self {
            ScoreValue::Int(v) => v as f64,
            ScoreValue::Float(v) => v,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct EvalJson<'a> {
    pub metric: &'a str,
    pub mode: String,
    pub threshold: f64,
    pub pairs: usize,
    pub matrix: [[u64; 3]; 3],
    pub per_class: Vec<ClassJson>,
    pub macro_f1: f64,
}

#[derive(Debug, Serialize)]
pub struct ClassJson {
    pub label: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

pub fn eval_json<'a>(
    metric: &'a str,
    config: &ThresholdConfig,
    report: &EvalReport,
) -> EvalJson<'a> {
    EvalJson {
        metric,
        mode: config.mode.to_string(),
        threshold: config.t,
        pairs: report.matrix.total() as usize,
        matrix: report.matrix.0,
        per_class: report
            .per_class
            .iter()
            .map(|c| ClassJson {
                label: c.label.to_string(),
                precision: c.precision,
                recall: c.recall,
                f1: c.f1,
            })
            .collect(),
        macro_f1: report.macro_f1,
    }
}

/// Human-readable evaluation summary.
pub fn eval_table(title: &str, report: &EvalReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("{title}\n"));
    out.push_str("  predicted\\actual   Less   Equi   More\n");
    let names = ["Less", "Equi", "More"];
    for (i, name) in names.iter().enumerate() {
        out.push_str(&format!(
            "  {name:<16} {:>6} {:>6} {:>6}\n",
            report.matrix.0[i][0], report.matrix.0[i][1], report.matrix.0[i][2]
        ));
    }
    out.push_str("  class  precision  recall      f1\n");
    for c in &report.per_class {
        out.push_str(&format!(
            "  {:<5}  {:>9}  {:>6}  {:>6}\n",
            c.label.to_string(),
            fmt2(c.precision),
            fmt2(c.recall),
            fmt2(c.f1)
        ));
    }
    out.push_str(&format!("  macro F1: {}\n", fmt2(report.macro_f1)));
    out
}

pub fn print_row<T: Serialize>(row: &T) {
    match serde_json::to_string(row) {
        Ok(line) => println!("{line}"),
        Err(e) => eprintln!("error: could not serialize row: {e}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_half_away_from_zero() {
        assert_eq!(round2(0.125), 0.13);
        assert_eq!(round2(-0.125), -0.13);
        assert_eq!(round2(0.464999), 0.46);
        assert_eq!(fmt2(0.295), "0.30");
        assert_eq!(fmt2(2.0), "2.00");
    }

    #[test]
    fn score_value_serialization() {
        assert_eq!(serde_json::to_string(&ScoreValue::Int(5)).unwrap(), "5");
        assert_eq!(
            serde_json::to_string(&ScoreValue::Float(4.25)).unwrap(),
            "4.25"
        );
    }
}
