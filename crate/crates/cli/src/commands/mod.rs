pub mod compare;
pub mod evaluate;
pub mod patterns;
pub mod score;
pub mod train_lm;
pub mod tune;

use crate::config::Metric;
use crate::report::ScoreValue;
use crate::{data, usage, Failure};
use dlens_core::ccd::CcdConfig;
use dlens_core::ngram::NgramModel;
use dlens_core::syntax::lex;
use dlens_core::SyntaxUnit;
use std::path::Path;

/// Load and parse one Java file.
pub(crate) fn parse_file(path: &Path) -> Result<SyntaxUnit, String> {
    let source =
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    SyntaxUnit::parse(path.display().to_string(), &source)
        .map_err(|e| format!("{}: {e}", path.display()))
}

/// Lex one Java file into language-model tokens.
pub(crate) fn lex_file(path: &Path) -> Result<Vec<String>, String> {
    let source =
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let tokens = lex(&source).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(tokens.into_iter().map(|t| t.text).collect())
}

/// Score one file with one metric.
pub(crate) fn score_file(
    path: &Path,
    metric: Metric,
    ccd_config: &CcdConfig,
    model: Option<&NgramModel>,
) -> Result<ScoreValue, String> {
    match metric {
        Metric::Cc => {
            let unit = parse_file(path)?;
            Ok(ScoreValue::Int(
                dlens_core::cognitive::cognitive_complexity(&unit).file_total,
            ))
        }
        Metric::Ccd => {
            let unit = parse_file(path)?;
            Ok(ScoreValue::Int(
                dlens_core::ccd::cognitive_complexity_d_with(&unit, ccd_config).file_total,
            ))
        }
        Metric::Ppl => {
            let model = model.ok_or_else(|| "no language model loaded".to_string())?;
            let tokens = lex_file(path)?;
            let score = model
                .perplexity(&tokens)
                .map_err(|e| format!("{}: {e}", path.display()))?;
            Ok(ScoreValue::Float(score.value))
        }
    }
}

/// Load a language model if the metric set requires one.
pub(crate) fn load_model_if_needed(
    metrics: &[Metric],
    model_path: Option<&Path>,
) -> Result<Option<NgramModel>, Failure> {
    if !metrics.contains(&Metric::Ppl) {
        return Ok(None);
    }
    let path = model_path.ok_or_else(|| {
        usage("metric 'ppl' requires --model pointing at a trained language model")
    })?;
    let bytes = std::fs::read(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
    NgramModel::from_bytes(&bytes)
        .map(Some)
        .map_err(|e| data(format!("{}: {e}", path.display())))
}
