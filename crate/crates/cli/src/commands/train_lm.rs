//! `dlens train-lm`: build a language model from a corpus directory.

use super::lex_file;
use crate::config::resolve_order;
use crate::report::print_row;
use crate::{data, CmdResult};
use clap::Args;
use dlens_core::ngram::{NgramModel, Smoothing};
use rayon::prelude::*;
use std::path::PathBuf;
use walkdir::WalkDir;

#[derive(Args)]
pub struct TrainLmArgs {
    /// Directory scanned recursively for .java files.
    #[arg(long)]
    corpus: PathBuf,

    /// Model order n (default 5, env DLENS_ORDER).
    #[arg(long)]
    order: Option<usize>,

    /// Output model file.
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: TrainLmArgs) -> CmdResult {
    let order = resolve_order(args.order)?;
    // Sorted walk so retraining the same corpus is byte-identical.
    let mut files: Vec<PathBuf> = WalkDir::new(&args.corpus)
        .sort_by_file_name()
        .into_iter()
        .filter_map(Result::ok)
        .filter(|e| e.file_type().is_file())
        .map(|e| e.into_path())
        .filter(|p| p.extension().is_some_and(|ext| ext == "java"))
        .collect();
    files.sort();

    let lexed: Vec<(PathBuf, Result<Vec<String>, String>)> = files
        .par_iter()
        .map(|path| (path.clone(), lex_file(path)))
        .collect();
    let mut streams = Vec::new();
    let mut skipped = 0usize;
    for (path, result) in lexed {
        match result {
            Ok(tokens) if !tokens.is_empty() => streams.push(tokens),
            Ok(_) => {
                eprintln!("warning: {}: empty after lexing, skipped", path.display());
                skipped += 1;
            }
            Err(e) => {
                eprintln!("warning: {e}, skipped");
                skipped += 1;
            }
        }
    }
    if streams.is_empty() {
        return Err(data(format!(
            "{}: no usable .java files found (empty corpus)",
            args.corpus.display()
        )));
    }

    let model = NgramModel::train(&streams, order, Smoothing::default())
        .map_err(|e| data(e.to_string()))?;
    let bytes = model.to_bytes();
    std::fs::write(&args.out, &bytes)
        .map_err(|e| data(format!("{}: {e}", args.out.display())))?;

    let token_count: usize = streams.iter().map(Vec::len).sum();
    print_row(&serde_json::json!({
        "model": args.out.display().to_string(),
        "order": order,
        "vocab_size": model.vocab_size(),
        "token_count": token_count,
        "files": streams.len(),
        "skipped": skipped,
    }));
    eprintln!(
        "trained order-{order} model on {} file(s): vocab size {}, {} tokens",
        streams.len(),
        model.vocab_size(),
        token_count
    );
    Ok(0)
}
