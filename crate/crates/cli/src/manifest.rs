//! Pair manifests: CSV files with header
//! `pair_id,source_path,decompiled_path,label,project,decompiler`, where
//! `label`, `project` and `decompiler` may be empty or absent entirely.
//! Relative paths resolve against the manifest's directory.

use crate::{data, Failure};
use dlens_core::classify::Label;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone)]
pub struct PairRecord {
    pub pair_id: String,
    pub source_path: PathBuf,
    pub decompiled_path: PathBuf,
    pub label: Option<Label>,
    pub project: Option<String>,
    pub decompiler: Option<String>,
}

pub fn read_manifest(path: &Path) -> Result<Vec<PairRecord>, Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| data(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| data(format!("{}: {e}", path.display())))?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let required = |name: &str| {
        column(name).ok_or_else(|| {
            data(format!(
                "{}: manifest is missing required column '{name}'",
                path.display()
            ))
        })
    };
    let pair_id_col = required("pair_id")?;
    let source_col = required("source_path")?;
    let decompiled_col = required("decompiled_path")?;
    let label_col = column("label");
    let project_col = column("project");
    let decompiler_col = column("decompiler");

    let base = path.parent().unwrap_or(Path::new("."));
    let resolve = |raw: &str| {
        let p = PathBuf::from(raw);
        if p.is_absolute() {
            p
        } else {
            base.join(p)
        }
    };
    let optional = |record: &csv::StringRecord, col: Option<usize>| {
        col.and_then(|i| record.get(i))
            .filter(|v| !v.is_empty())
            .map(str::to_string)
    };

    let mut pairs = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| data(format!("{}: row {}: {e}", path.display(), i + 2)))?;
        let field = |col: usize| record.get(col).unwrap_or("").to_string();
        let label = match optional(&record, label_col) {
            Some(raw) => Some(raw.parse::<Label>().map_err(|e| {
                data(format!("{}: row {}: {e}", path.display(), i + 2))
            })?),
            None => None,
        };
        pairs.push(PairRecord {
            pair_id: field(pair_id_col),
            source_path: resolve(&field(source_col)),
            decompiled_path: resolve(&field(decompiled_col)),
            label,
            project: optional(&record, project_col),
            decompiler: optional(&record, decompiler_col),
        });
    }
    if pairs.is_empty() {
        return Err(data(format!(
            "{}: manifest contains no pairs",
            path.display()
        )));
    }
    Ok(pairs)
}
