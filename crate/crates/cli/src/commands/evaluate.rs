//! `dlens evaluate`: metrics from an explicit confusion matrix.

use crate::report::{eval_table, print_row};
use crate::CmdResult;
use clap::Args;
use dlens_core::classify::{ConfusionMatrix, EvalReport};

#[derive(Args)]
pub struct EvaluateArgs {
    /// Nine cell counts, row-major, rows = predicted, columns = actual,
    /// both ordered Less, Equi, More.
    #[arg(num_args = 9, required = true)]
    cells: Vec<u64>,
}

pub fn run(args: EvaluateArgs) -> CmdResult {
    let c = &args.cells;
    let matrix = ConfusionMatrix([
        [c[0], c[1], c[2]],
        [c[3], c[4], c[5]],
        [c[6], c[7], c[8]],
    ]);
    let report = EvalReport::from_matrix(matrix);
    print_row(&serde_json::json!({
        "matrix": report.matrix.0,
        "per_class": report
            .per_class
            .iter()
            .map(|m| serde_json::json!({
                "label": m.label.to_string(),
                "precision": m.precision,
                "recall": m.recall,
                "f1": m.f1,
            }))
            .collect::<Vec<_>>(),
        "macro_f1": report.macro_f1,
    }));
    eprint!("{}", eval_table("confusion matrix evaluation", &report));
    Ok(0)
}
