//! Score matrices: one row per experiment, one column per method.
//!
//! The on-disk form is a CSV whose first column names the experiment and
//! whose remaining header cells name the methods. A directory of such files
//! is one group; their rows are concatenated in file-name order.

use std::fs;
use std::path::{Path, PathBuf};

use smotenn_core::eval::RankReport;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScoreMatrix {
    pub methods: Vec<String>,
    pub row_names: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl ScoreMatrix {
    pub fn new(methods: Vec<String>) -> Self {
        ScoreMatrix { methods, ..Default::default() }
    }

    pub fn push_row(&mut self, name: impl Into<String>, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.methods.len());
        self.row_names.push(name.into());
        self.values.push(values);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(Error::io(path))?;
        let prefix = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        Self::parse(&text, &path.display().to_string(), &prefix)
    }

    pub fn parse(text: &str, source_name: &str, row_prefix: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
        if header.len() < 3 {
            return Err(Error::Parse {
                source_name: source_name.into(),
                line: 1,
                message: "need a name column and at least two methods".into(),
            });
        }
        let mut m = ScoreMatrix::new(header[1..].to_vec());
        for record in reader.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            let values = record
                .iter()
                .skip(1)
                .map(|c| {
                    c.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::Parse {
                        source_name: source_name.into(),
                        line,
                        message: format!("`{c}` is not a finite number"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if values.len() != m.methods.len() {
                return Err(Error::Parse {
                    source_name: source_name.into(),
                    line,
                    message: format!("{} scores for {} methods", values.len(), m.methods.len()),
                });
            }
            let name =
                if row_prefix.is_empty() { record[0].to_string() } else { format!("{row_prefix}/{}", &record[0]) };
            m.push_row(name, values);
        }
        Ok(m)
    }

    /// All `*.csv` files directly inside `dir`, concatenated.
    pub fn read_dir(dir: &Path) -> Result<Self> {
        let files = csv_files(dir)?;
        if files.is_empty() {
            return Err(Error::Config(format!("{}: no .csv files", dir.display())));
        }
        let mut all: Option<ScoreMatrix> = None;
        for f in files {
            let m = Self::read(&f)?;
            match &mut all {
                None => all = Some(m),
                Some(acc) => {
                    if acc.methods != m.methods {
                        return Err(Error::Config(format!(
                            "{}: method columns differ from the rest of the group",
                            f.display()
                        )));
                    }
                    acc.row_names.extend(m.row_names);
                    acc.values.extend(m.values);
                }
            }
        }
        Ok(all.unwrap_or_default())
    }

    pub fn write_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["dataset".to_string()];
        header.extend(self.methods.iter().cloned());
        w.write_record(&header)?;
        for (name, row) in self.row_names.iter().zip(&self.values) {
            let mut rec = vec![name.clone()];
            rec.extend(row.iter().map(f64::to_string));
            w.write_record(&rec)?;
        }
        w.into_inner().map_err(|e| Error::Config(e.to_string()))
    }

    pub fn rank_report(&self, alpha: f64) -> Result<RankReport> {
        Ok(RankReport::from_matrix(self.methods.clone(), &self.values, alpha)?)
    }
}

fn csv_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(Error::io(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")))
        .collect();
    files.sort();
    Ok(files)
}

/// A directory holding CSV files is one group; otherwise every subdirectory
/// holding CSV files is a group, named after the subdirectory.
pub fn fixture_groups(dir: &Path) -> Result<Vec<(String, ScoreMatrix)>> {
    if !csv_files(dir)?.is_empty() {
        let name = dir.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "fixtures".into());
        return Ok(vec![(name, ScoreMatrix::read_dir(dir)?)]);
    }
    let mut subdirs: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(Error::io(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    subdirs.sort();
    let mut groups = Vec::new();
    for sub in subdirs {
        if !csv_files(&sub)?.is_empty() {
            let name = sub.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            groups.push((name, ScoreMatrix::read_dir(&sub)?));
        }
    }
    if groups.is_empty() {
        return Err(Error::Config(format!("{}: no fixture matrices found", dir.display())));
    }
    Ok(groups)
}
