//! `dlens patterns`: pattern occurrences per file plus aggregate counts.

use super::parse_file;
use crate::config::resolve_ccd_config;
use crate::manifest::read_manifest;
use crate::report::print_row;
use crate::{usage, CmdResult};
use clap::Args;
use dlens_core::ccd::{detect_patterns_with, CcdConfig, PatternId, ALL_PATTERNS};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Args)]
pub struct PatternsArgs {
    /// Pair manifest (CSV); the decompiled file of every pair is analyzed.
    #[arg(long, conflicts_with = "files")]
    manifest: Option<PathBuf>,

    /// Long-line limit for P3 (default 120, env DLENS_LINE_LIMIT).
    #[arg(long)]
    line_limit: Option<usize>,

    /// Java files to analyze directly.
    files: Vec<PathBuf>,
}

#[derive(Serialize)]
struct PatternRow {
    path: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pair_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    project: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decompiler: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    patterns: Option<Vec<String>>,
    /// Number of sites per present pattern.
    #[serde(skip_serializing_if = "Option::is_none")]
    sites: Option<BTreeMap<String, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

struct FilePatterns {
    present: Option<Vec<PatternId>>,
    sites: Option<BTreeMap<String, usize>>,
    error: Option<String>,
}

fn analyze(path: &Path, config: &CcdConfig) -> FilePatterns {
    match parse_file(path) {
        Ok(unit) => {
            let report = detect_patterns_with(&unit, config);
            let present: Vec<PatternId> = report.present().into_iter().collect();
            let sites = present
                .iter()
                .map(|p| (p.to_string(), report.sites(*p).len()))
                .collect();
            FilePatterns {
                present: Some(present),
                sites: Some(sites),
                error: None,
            }
        }
        Err(e) => FilePatterns {
            present: None,
            sites: None,
            error: Some(e),
        },
    }
}

pub fn run(args: PatternsArgs) -> CmdResult {
    let config = resolve_ccd_config(args.line_limit)?;

    struct Target {
        path: PathBuf,
        pair_id: Option<String>,
        project: Option<String>,
        decompiler: Option<String>,
    }
    let targets: Vec<Target> = if let Some(manifest) = &args.manifest {
        read_manifest(manifest)?
            .into_iter()
            .map(|pair| Target {
                path: pair.decompiled_path,
                pair_id: Some(pair.pair_id),
                project: pair.project,
                decompiler: pair.decompiler,
            })
            .collect()
    } else if args.files.is_empty() {
        return Err(usage("give --manifest or at least one file"));
    } else {
        args.files
            .into_iter()
            .map(|path| Target {
                path,
                pair_id: None,
                project: None,
                decompiler: None,
            })
            .collect()
    };

    let rows: Vec<(PatternRow, Option<Vec<PatternId>>)> = targets
        .par_iter()
        .map(|target| {
            let analyzed = analyze(&target.path, &config);
            let row = PatternRow {
                path: target.path.display().to_string(),
                pair_id: target.pair_id.clone(),
                project: target.project.clone(),
                decompiler: target.decompiler.clone(),
                patterns: analyzed
                    .present
                    .as_ref()
                    .map(|p| p.iter().map(|p| p.to_string()).collect()),
                sites: analyzed.sites,
                error: analyzed.error,
            };
            (row, analyzed.present)
        })
        .collect();

    let mut failures = 0usize;
    // File counts per pattern, overall and grouped.
    let mut per_pattern: BTreeMap<String, u64> = ALL_PATTERNS
        .iter()
        .map(|p| (p.to_string(), 0))
        .collect();
    let mut per_project: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
    let mut per_decompiler: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
    for (row, present) in &rows {
        print_row(row);
        match present {
            Some(present) => {
                for p in present {
                    *per_pattern.get_mut(&p.to_string()).expect("known id") += 1;
                    if let Some(project) = &row.project {
                        *per_project
                            .entry(project.clone())
                            .or_default()
                            .entry(p.to_string())
                            .or_insert(0) += 1;
                    }
                    if let Some(decompiler) = &row.decompiler {
                        *per_decompiler
                            .entry(decompiler.clone())
                            .or_default()
                            .entry(p.to_string())
                            .or_insert(0) += 1;
                    }
                }
            }
            None => failures += 1,
        }
    }
    let files_with_any = rows
        .iter()
        .filter(|(_, p)| p.as_ref().is_some_and(|p| !p.is_empty()))
        .count();

    let mut aggregate = serde_json::json!({
        "files": rows.len(),
        "files_with_any_pattern": files_with_any,
        "per_pattern": per_pattern,
    });
    if !per_project.is_empty() {
        aggregate["per_project"] = serde_json::to_value(&per_project).expect("serializable");
    }
    if !per_decompiler.is_empty() {
        aggregate["per_decompiler"] =
            serde_json::to_value(&per_decompiler).expect("serializable");
    }
    print_row(&serde_json::json!({ "aggregate": aggregate }));
    eprintln!(
        "analyzed {} file(s), {} with at least one pattern, {} failure(s)",
        rows.len(),
        files_with_any,
        failures
    );
    Ok(if failures > 0 { 2 } else { 0 })
}
