//! `dlens`: batch analysis of Java understandability.
//!
//! Subcommands score files (`score`), compare decompiled/original pairs
//! against a manifest (`compare`), train token language models
//! (`train-lm`), grid-search classification thresholds (`tune`), count code
//! patterns (`patterns`), and derive metrics from a confusion matrix
//! (`evaluate`). Rows are emitted as JSON Lines on stdout; summaries go to
//! stderr.
//!
//! Exit codes: 0 on success, 1 for usage errors, 2 when any input row
//! failed.

mod commands;
mod config;
mod manifest;
mod report;

use clap::{Parser, Subcommand};

/// A classified failure; decides the process exit code.
#[derive(Debug)]
pub(crate) enum Failure {
    Usage(String),
    Data(String),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(msg) | Failure::Data(msg) => f.write_str(msg),
        }
    }
}

pub(crate) fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

pub(crate) fn data(msg: impl Into<String>) -> Failure {
    Failure::Data(msg.into())
}

pub(crate) type CmdResult = Result<i32, Failure>;

#[derive(Parser)]
#[command(
    name = "dlens",
    version,
    about = "Understandability metrics for Java source and decompiled code"
)]
struct Cli {
    /// Worker threads for per-file analysis (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score Java files with one metric.
    Score(commands::score::ScoreArgs),
    /// Compare decompiled files against their originals from a manifest.
    Compare(commands::compare::CompareArgs),
    /// Train an n-gram language model on a directory of Java files.
    TrainLm(commands::train_lm::TrainLmArgs),
    /// Grid-search the classification threshold on a labeled manifest.
    Tune(commands::tune::TuneArgs),
    /// Detect code patterns P1-P6 in files or a manifest's decompiled files.
    Patterns(commands::patterns::PatternsArgs),
    /// Compute per-class precision/recall/F1 and macro F1 from a 3x3
    /// confusion matrix given row-major (predicted x actual).
    Evaluate(commands::evaluate::EvaluateArgs),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global();
    }
    let result = match cli.command {
        Command::Score(args) => commands::score::run(args),
        Command::Compare(args) => commands::compare::run(args),
        Command::TrainLm(args) => commands::train_lm::run(args),
        Command::Tune(args) => commands::tune::run(args),
        Command::Patterns(args) => commands::patterns::run(args),
        Command::Evaluate(args) => commands::evaluate::run(args),
    };
    match result {
        Ok(code) => std::process::exit(code),
        Err(failure) => {
            eprintln!("error: {failure}");
            let code = match failure {
                Failure::Usage(_) => 1,
                Failure::Data(_) => 2,
            };
            std::process::exit(code);
        }
    }
}
