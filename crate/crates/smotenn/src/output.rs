//! Resampled data files, the provenance sidecar and the run manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use smotenn_core::{Label, MinMaxScaler, ResampleResult, ResampleSpec};

use crate::engine::BlockReport;
use crate::error::{Error, Result};
use crate::ingest::Ingested;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Keel,
}

/// Rows of the final table in original units. Surviving originals are copied
/// verbatim from the input; synthetic rows are mapped back through `scaler`.
pub struct OutputRow<'a> {
    pub id: u64,
    pub features: std::borrow::Cow<'a, [f64]>,
    pub label: Label,
    pub synthetic: bool,
}

pub fn output_rows<'a>(input: &'a Ingested, result: &'a ResampleResult, scaler: &MinMaxScaler) -> Vec<OutputRow<'a>> {
    let out = &result.output;
    (0..out.len())
        .map(|row| {
            let id = out.id(row);
            if result.is_synthetic(id) {
                let mut x = out.features(row).to_vec();
                scaler.inverse_row(&mut x);
                OutputRow { id: id.0, features: x.into(), label: out.label(row), synthetic: true }
            } else {
                let original = input.dataset.features(id.0 as usize);
                OutputRow { id: id.0, features: original.into(), label: out.label(row), synthetic: false }
            }
        })
        .collect()
}

pub fn render(format: OutputFormat, input: &Ingested, rows: &[OutputRow<'_>]) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Csv => render_csv(input, rows),
        OutputFormat::Keel => Ok(render_keel(input, rows).into_bytes()),
    }
}

fn render_csv(input: &Ingested, rows: &[OutputRow<'_>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id".to_string()];
    header.extend(input.columns.iter().map(|c| c.name.clone()));
    header.push(input.class_column.clone());
    header.push("synthetic".into());
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.id.to_string()];
        rec.extend(r.features.iter().map(f64::to_string));
        rec.push(input.class_value(r.label).to_string());
        rec.push(r.synthetic.to_string());
        w.write_record(&rec)?;
    }
    w.into_inner().map_err(|e| Error::Config(e.to_string()))
}

fn render_keel(input: &Ingested, rows: &[OutputRow<'_>]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "@relation {}", input.dataset.name());
    for (j, c) in input.columns.iter().enumerate() {
        let (lo, hi) = rows
            .iter()
            .map(|r| r.features[j])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        let _ = writeln!(s, "@attribute {} real [{lo}, {hi}]", c.name);
    }
    let _ = writeln!(s, "@attribute {} {{{}, {}}}", input.class_column, input.minority_value, input.majority_value);
    let names: Vec<&str> = input.columns.iter().map(|c| c.name.as_str()).collect();
    let _ = writeln!(s, "@inputs {}", names.join(", "));
    let _ = writeln!(s, "@outputs {}", input.class_column);
    s.push_str("@data\n");
    for r in rows {
        for v in r.features.iter() {
            let _ = write!(s, "{v}, ");
        }
        let _ = writeln!(s, "{}", input.class_value(r.label));
    }
    s
}

#[derive(Debug, Serialize)]
pub struct SyntheticRecord {
    pub id: u64,
    pub parent: u64,
    pub neighbor: u64,
    pub u: f64,
}

#[derive(Debug, Serialize)]
pub struct Sidecar {
    pub removed_ids: Vec<u64>,
    pub synthetic: Vec<SyntheticRecord>,
}

impl Sidecar {
    pub fn new(result: &ResampleResult) -> Self {
        Sidecar {
            removed_ids: result.removed_ids.iter().map(|i| i.0).collect(),
            synthetic: result
                .provenance
                .iter()
                .map(|(id, p)| SyntheticRecord { id: id.0, parent: p.parent.0, neighbor: p.neighbor.0, u: p.u })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FileDigest {
    pub path: PathBuf,
    pub sha256: String,
}

impl FileDigest {
    pub fn of_bytes(path: &Path, bytes: &[u8]) -> Self {
        FileDigest { path: path.to_path_buf(), sha256: sha256_hex(bytes) }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClassCounts {
    pub minority: usize,
    pub majority: usize,
    /// `majority / minority`; absent when there is no minority sample.
    pub ir: Option<f64>,
}

impl ClassCounts {
    pub fn of(dataset: &smotenn_core::Dataset) -> Self {
        let minority = dataset.count(Label::Minority);
        let majority = dataset.count(Label::Majority);
        ClassCounts { minority, majority, ir: (minority > 0).then(|| majority as f64 / minority as f64) }
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub spec: ResampleSpec,
    pub threads: usize,
    pub input: FileDigest,
    pub outputs: Vec<FileDigest>,
    pub counts_before: ClassCounts,
    pub counts_after: ClassCounts,
    pub timings_ms: BTreeMap<&'static str, f64>,
    pub blocks: Vec<BlockReport>,
}

/// `out.csv` -> `out.<tag>.json`.
pub fn companion_path(output: &Path, tag: &str) -> PathBuf {
    output.with_extension(format!("{tag}.json"))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(Error::io(path))
}
