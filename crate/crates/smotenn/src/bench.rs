//! Cross-validated benchmark over a directory of datasets.
//!
//! Every (dataset, K) pair becomes one matrix row and every method one
//! column; the cell is the mean g-mean over the folds. Failed cells are
//! reported and their rows left out of the rank statistics.

use std::fs;
use std::path::{Path, PathBuf};

use smotenn_core::eval::CvConfig;
use smotenn_core::{Method, MinMaxScaler, ResampleSpec, RngStream};

use crate::engine;
use crate::error::{Error, Result};
use crate::fixtures::ScoreMatrix;
use crate::ingest;

#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// `None` is the no-resampling baseline.
    pub methods: Vec<Option<Method>>,
    pub ks: Vec<usize>,
    /// Template for every run; `method` and `k` are overwritten.
    pub spec: ResampleSpec,
    pub cv: CvConfig,
    pub label_column: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Failure {
    pub dataset: String,
    pub k: usize,
    pub method: String,
    pub error: String,
}

#[derive(Debug, Clone)]
pub struct BenchOutcome {
    /// Rows where every method succeeded.
    pub matrix: ScoreMatrix,
    pub cells: usize,
    pub failures: Vec<Failure>,
}

pub fn method_name(m: Option<Method>) -> &'static str {
    m.map_or("none", Method::name)
}

pub fn dataset_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(Error::io(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("dat") || e.eq_ignore_ascii_case("csv"))
        })
        .collect();
    files.sort();
    Ok(files)
}

pub fn run(dir: &Path, cfg: &BenchConfig, pool: &rayon::ThreadPool) -> Result<BenchOutcome> {
    let files = dataset_files(dir)?;
    if files.is_empty() {
        return Err(Error::Config(format!("{}: no .dat or .csv datasets", dir.display())));
    }
    let mut matrix = ScoreMatrix::new(cfg.methods.iter().map(|m| method_name(*m).to_string()).collect());
    let mut failures = Vec::new();
    let mut cells = 0;
    let mut succeeded = 0;
    for file in &files {
        let name = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let data = match ingest::read_dataset(file, cfg.label_column.as_deref(), None) {
            Ok(d) => d,
            Err(e) => {
                for &k in &cfg.ks {
                    for m in &cfg.methods {
                        cells += 1;
                        failures.push(Failure {
                            dataset: name.clone(),
                            k,
                            method: method_name(*m).into(),
                            error: e.to_string(),
                        });
                    }
                }
                continue;
            }
        };
        let dataset = MinMaxScaler::from_columns(data.columns.clone()).transform(&data.dataset);
        for &k in &cfg.ks {
            let mut row = Vec::with_capacity(cfg.methods.len());
            for m in &cfg.methods {
                cells += 1;
                let spec = m.map(|method| ResampleSpec { method, k, ..cfg.spec.clone() });
                let rng = RngStream::new(cfg.spec.seed, 0);
                match engine::cross_validate(&dataset, spec.as_ref(), &cfg.cv, &rng, pool) {
                    Ok(r) => {
                        succeeded += 1;
                        log::info!("{name} K={k} {}: g-mean {:.4}", method_name(*m), r.mean_g_mean);
                        row.push(Some(r.mean_g_mean));
                    }
                    Err(e) => {
                        log::warn!("{name} K={k} {}: {e}", method_name(*m));
                        failures.push(Failure {
                            dataset: name.clone(),
                            k,
                            method: method_name(*m).into(),
                            error: e.to_string(),
                        });
                        row.push(None);
                    }
                }
            }
            if let Some(values) = row.into_iter().collect::<Option<Vec<f64>>>() {
                let label = if cfg.ks.len() > 1 { format!("{name}@K={k}") } else { name.clone() };
                matrix.push_row(label, values);
            }
        }
    }
    if succeeded == 0 {
        return Err(Error::AllRunsFailed);
    }
    Ok(BenchOutcome { matrix, cells, failures })
}
