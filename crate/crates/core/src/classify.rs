//! Relative-understandability classification and evaluation.
//!
//! A (decompiled, original) score pair maps to one of three labels:
//! `Less` when the decompiled file is significantly less understandable than
//! its original, `Equi` when comparable, `More` when more understandable.
//! Two threshold shapes are supported: an absolute allowance `t` around the
//! original score, and a ratio band `(1 - t) * ori ..= (1 + t) * ori` for
//! metrics whose scale varies per file.
//!
//! Evaluation derives per-class precision, recall and F1 from a 3x3
//! confusion matrix (predicted x actual) and reports the macro F1, the mean
//! of the three class F1 values. Threshold tuning grid-searches a list of
//! candidate thresholds for the best macro F1, breaking ties toward the
//! smaller threshold.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative understandability of a decompiled file versus its original.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    Less,
    Equi,
    More,
}

pub const ALL_LABELS: [Label; 3] = [Label::Less, Label::Equi, Label::More];

impl Label {
    pub fn index(self) -> usize {
        match self {
            Label::Less => 0,
            Label::Equi => 1,
            Label::More => 2,
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "less" => Ok(Label::Less),
            "equi" => Ok(Label::Equi),
            "more" => Ok(Label::More),
            other => Err(format!("unknown label '{other}' (expected Less/Equi/More)")),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ClassifyError {
    #[error("ratio classification requires a positive original score, got {0}")]
    NonPositiveOriginal(f64),
    #[error("prediction and truth lists differ in length ({predictions} vs {truths})")]
    LengthMismatch { predictions: usize, truths: usize },
    #[error("nothing to evaluate")]
    EmptyInput,
    #[error("threshold grid is empty")]
    EmptyGrid,
    #[error("invalid threshold {0} for {1} mode")]
    InvalidThreshold(f64, ThresholdMode),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdMode {
    Absolute,
    Ratio,
}

impl std::fmt::Display for ThresholdMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ThresholdMode::Absolute => write!(f, "absolute"),
            ThresholdMode::Ratio => write!(f, "ratio"),
        }
    }
}

impl std::str::FromStr for ThresholdMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "absolute" | "abs" => Ok(ThresholdMode::Absolute),
            "ratio" => Ok(ThresholdMode::Ratio),
            other => Err(format!("unknown mode '{other}' (expected absolute/ratio)")),
        }
    }
}

/// A validated threshold configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdConfig {
    pub mode: ThresholdMode,
    pub t: f64,
}

impl ThresholdConfig {
    /// Absolute mode needs `t >= 0`; ratio mode needs `0 <= t < 1`.
    pub fn new(mode: ThresholdMode, t: f64) -> Result<Self, ClassifyError> {
        let valid = match mode {
            ThresholdMode::Absolute => t >= 0.0 && t.is_finite(),
            ThresholdMode::Ratio => (0.0..1.0).contains(&t),
        };
        if !valid {
            return Err(ClassifyError::InvalidThreshold(t, mode));
        }
        Ok(ThresholdConfig { mode, t })
    }

    pub fn classify(&self, decompiled: f64, original: f64) -> Result<Label, ClassifyError> {
        match self.mode {
            ThresholdMode::Absolute => Ok(classify_absolute(decompiled, original, self.t)),
            ThresholdMode::Ratio => classify_ratio(decompiled, original, self.t),
        }
    }
}

/// Absolute-threshold classification: `Less` when `x > ori + t`, `More`
/// when `x < ori - t`, `Equi` for the inclusive band in between.
pub fn classify_absolute(x: f64, ori: f64, t: f64) -> Label {
    debug_assert!(t >= 0.0, "absolute threshold must be nonnegative");
    if x > ori + t {
        Label::Less
    } else if x < ori - t {
        Label::More
    } else {
        Label::Equi
    }
}

/// Ratio-threshold classification: `Less` when `x > (1 + t) * ori`, `More`
/// when `x < (1 - t) * ori`, `Equi` for the inclusive band in between.
/// The original score must be positive for the band to make sense.
pub fn classify_ratio(x: f64, ori: f64, t: f64) -> Result<Label, ClassifyError> {
    debug_assert!((0.0..1.0).contains(&t), "ratio threshold must be in [0, 1)");
    if ori <= 0.0 {
        return Err(ClassifyError::NonPositiveOriginal(ori));
    }
    if x > (1.0 + t) * ori {
        Ok(Label::Less)
    } else if x < (1.0 - t) * ori {
        Ok(Label::More)
    } else {
        Ok(Label::Equi)
    }
}

/// 3x3 confusion matrix, rows predicted, columns actual, both ordered
/// (Less, Equi, More).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix(pub [[u64; 3]; 3]);

impl ConfusionMatrix {
    pub fn from_pairs(predictions: &[Label], truths: &[Label]) -> Result<Self, ClassifyError> {
        if predictions.len() != truths.len() {
            return Err(ClassifyError::LengthMismatch {
                predictions: predictions.len(),
                truths: truths.len(),
            });
        }
        if predictions.is_empty() {
            return Err(ClassifyError::EmptyInput);
        }
        let mut cells = [[0u64; 3]; 3];
        for (p, a) in predictions.iter().zip(truths) {
            cells[p.index()][a.index()] += 1;
        }
        Ok(ConfusionMatrix(cells))
    }

    pub fn total(&self) -> u64 {
        self.0.iter().flatten().sum()
    }

    fn row_sum(&self, i: usize) -> u64 {
        self.0[i].iter().sum()
    }

    fn col_sum(&self, j: usize) -> u64 {
        self.0.iter().map(|row| row[j]).sum()
    }
}

/// Precision, recall and F1 for one class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassMetrics {
    pub label: Label,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Full evaluation: matrix, per-class metrics, macro F1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub matrix: ConfusionMatrix,
    pub per_class: [ClassMetrics; 3],
    pub macro_f1: f64,
}

impl EvalReport {
    /// Derive metrics from a confusion matrix. Classes with a zero
    /// denominator report 0 rather than NaN.
    pub fn from_matrix(matrix: ConfusionMatrix) -> EvalReport {
        let per_class = ALL_LABELS.map(|label| {
            let i = label.index();
            let tp = matrix.0[i][i] as f64;
            let predicted = matrix.row_sum(i) as f64;
            let actual = matrix.col_sum(i) as f64;
            let precision = if predicted > 0.0 { tp / predicted } else { 0.0 };
            let recall = if actual > 0.0 { tp / actual } else { 0.0 };
            let f1 = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            };
            ClassMetrics {
                label,
                precision,
                recall,
                f1,
            }
        });
        let macro_f1 = per_class.iter().map(|c| c.f1).sum::<f64>() / 3.0;
        EvalReport {
            matrix,
            per_class,
            macro_f1,
        }
    }

    pub fn class(&self, label: Label) -> &ClassMetrics {
        &self.per_class[label.index()]
    }
}

/// Evaluate predictions against ground truth.
pub fn evaluate(predictions: &[Label], truths: &[Label]) -> Result<EvalReport, ClassifyError> {
    Ok(EvalReport::from_matrix(ConfusionMatrix::from_pairs(
        predictions,
        truths,
    )?))
}

/// Result of a threshold grid search.
#[derive(Debug, Clone, Serialize)]
pub struct TuneResult {
    pub best_t: f64,
    pub best_macro_f1: f64,
    /// Macro F1 for every grid point, in grid order.
    pub grid: Vec<(f64, f64)>,
}

/// Grid-search a threshold maximizing macro F1 on labeled score pairs.
/// `pairs` holds (decompiled, original) scores. Ties break toward the
/// smaller threshold.
pub fn tune_threshold(
    pairs: &[(f64, f64)],
    truths: &[Label],
    mode: ThresholdMode,
    grid: &[f64],
) -> Result<TuneResult, ClassifyError> {
    if grid.is_empty() {
        return Err(ClassifyError::EmptyGrid);
    }
    if pairs.len() != truths.len() {
        return Err(ClassifyError::LengthMismatch {
            predictions: pairs.len(),
            truths: truths.len(),
        });
    }
    if pairs.is_empty() {
        return Err(ClassifyError::EmptyInput);
    }
    let mut results = Vec::with_capacity(grid.len());
    for &t in grid {
        let config = ThresholdConfig::new(mode, t)?;
        let predictions: Result<Vec<Label>, ClassifyError> = pairs
            .iter()
            .map(|(x, ori)| config.classify(*x, *ori))
            .collect();
        let report = evaluate(&predictions?, truths)?;
        results.push((t, report.macro_f1));
    }
    let (best_t, best_macro_f1) = results
        .iter()
        .copied()
        .reduce(|best, cand| {
            if cand.1 > best.1 || (cand.1 == best.1 && cand.0 < best.0) {
                cand
            } else {
                best
            }
        })
        .expect("grid is nonempty");
    Ok(TuneResult {
        best_t,
        best_macro_f1,
        grid: results,
    })
}

/// The default absolute-threshold grid: integers 0 through 10.
pub fn default_absolute_grid() -> Vec<f64> {
    (0..=10).map(f64::from).collect()
}

/// The default ratio grid: 0.01 through 0.50 in steps of 0.01.
pub fn default_ratio_grid() -> Vec<f64> {
    (1..=50).map(|i| f64::from(i) / 100.0).collect()
}
