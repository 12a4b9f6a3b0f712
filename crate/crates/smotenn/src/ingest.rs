//! Dataset ingestion from KEEL `.dat` and CSV files.
//!
//! Both readers produce an [`Ingested`] table: the dataset with sequential
//! ids (0-based row numbers), the feature column metadata and the original
//! class values. The less frequent class value becomes the minority.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use smotenn_core::scale::{ColumnKind, ColumnSpec};
use smotenn_core::{Dataset, Label};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub dataset: Dataset,
    /// Feature columns in order; observed ranges are taken from the data.
    pub columns: Vec<ColumnSpec>,
    pub class_column: String,
    pub minority_value: String,
    pub majority_value: String,
}

impl Ingested {
    pub fn class_value(&self, label: Label) -> &str {
        match label {
            Label::Minority => &self.minority_value,
            Label::Majority => &self.majority_value,
        }
    }
}

/// Reads a file, choosing the format from its extension (`.dat` is KEEL).
pub fn read_dataset(path: &Path, label_column: Option<&str>, minority_value: Option<&str>) -> Result<Ingested> {
    let is_keel = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("dat"));
    if is_keel {
        parse_keel(path)
    } else {
        parse_csv(path, label_column, minority_value)
    }
}

pub fn parse_keel(path: &Path) -> Result<Ingested> {
    let text = fs::read_to_string(path).map_err(Error::io(path))?;
    parse_keel_str(&text, &path.display().to_string())
}

#[derive(Debug)]
struct Attribute {
    name: String,
    kind: AttrKind,
}

#[derive(Debug)]
enum AttrKind {
    Real,
    Integer,
    Nominal(Vec<String>),
}

pub fn parse_keel_str(text: &str, source_name: &str) -> Result<Ingested> {
    let parse_err = |line: usize, message: String| Error::Parse { source_name: source_name.to_string(), line, message };

    let mut relation = None;
    let mut attributes: Vec<Attribute> = Vec::new();
    let mut inputs: Option<Vec<String>> = None;
    let mut output: Option<String> = None;
    let mut data_start = None;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if !line.starts_with('@') {
            return Err(parse_err(line_no, format!("expected a header keyword, found `{line}`")));
        }
        let (keyword, rest) = split_keyword(line);
        match keyword.to_ascii_lowercase().as_str() {
            "@relation" => relation = Some(rest.trim().trim_matches(|c| c == '\'' || c == '"').to_string()),
            "@attribute" => attributes.push(parse_attribute(rest).map_err(|m| parse_err(line_no, m))?),
            "@inputs" => inputs = Some(name_list(rest)),
            "@outputs" | "@output" => {
                let names = name_list(rest);
                if names.len() != 1 {
                    return Err(parse_err(
                        line_no,
                        format!("expected exactly one output attribute, found {}", names.len()),
                    ));
                }
                output = names.into_iter().next();
            }
            "@data" => {
                data_start = Some(i + 1);
                break;
            }
            other => return Err(parse_err(line_no, format!("unknown keyword `{other}`"))),
        }
    }

    let data_start = data_start.ok_or_else(|| parse_err(text.lines().count(), "missing @data section".into()))?;
    let relation = relation.ok_or_else(|| parse_err(1, "missing @relation".into()))?;
    if attributes.len() < 2 {
        return Err(parse_err(data_start, "need at least one input and one output attribute".into()));
    }
    let position = |name: &str| attributes.iter().position(|a| a.name.eq_ignore_ascii_case(name));
    let class_ix = match &output {
        Some(name) => {
            position(name).ok_or_else(|| parse_err(data_start, format!("output `{name}` is not declared")))?
        }
        None => attributes.len() - 1,
    };
    let feature_ix: Vec<usize> = match &inputs {
        Some(names) => names
            .iter()
            .map(|n| position(n).ok_or_else(|| parse_err(data_start, format!("input `{n}` is not declared"))))
            .collect::<Result<_>>()?,
        None => (0..attributes.len()).filter(|&j| j != class_ix).collect(),
    };
    for &j in &feature_ix {
        if let AttrKind::Nominal(_) = attributes[j].kind {
            return Err(Error::UnsupportedFeature {
                source_name: source_name.to_string(),
                attribute: attributes[j].name.clone(),
                kind: "nominal".into(),
            });
        }
    }
    let declared_classes = match &attributes[class_ix].kind {
        AttrKind::Nominal(values) => values.clone(),
        _ => Vec::new(),
    };

    let mut cells: Vec<Vec<String>> = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate().skip(data_start) {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let row: Vec<String> = line.split(',').map(|c| c.trim().to_string()).collect();
        if row.len() != attributes.len() {
            return Err(parse_err(
                i + 1,
                format!("data row {} has {} values, expected {}", cells.len(), row.len(), attributes.len()),
            ));
        }
        cells.push(row);
        lines.push(i + 1);
    }
    let names: Vec<String> = attributes.iter().map(|a| a.name.clone()).collect();
    let kinds: Vec<ColumnKind> = attributes
        .iter()
        .map(|a| match a.kind {
            AttrKind::Integer => ColumnKind::Integer,
            _ => ColumnKind::Real,
        })
        .collect();
    build(
        Table { source_name, relation, names, kinds, cells, lines, class_ix, feature_ix },
        Format::Keel,
        ClassOrder::Declared(declared_classes),
    )
}

fn split_keyword(line: &str) -> (&str, &str) {
    let end = line.find(|c: char| c.is_whitespace() || c == '{').unwrap_or(line.len());
    (&line[..end], &line[end..])
}

fn name_list(rest: &str) -> Vec<String> {
    rest.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn parse_attribute(rest: &str) -> Result<Attribute, String> {
    let rest = rest.trim();
    let name_end = rest.find(|c: char| c.is_whitespace() || c == '{').ok_or("attribute without a type")?;
    let name = rest[..name_end].trim_matches(|c| c == '\'' || c == '"').to_string();
    let spec = rest[name_end..].trim();
    let kind = if let Some(body) = spec.strip_prefix('{') {
        let body = body.strip_suffix('}').ok_or("unterminated value list")?;
        AttrKind::Nominal(name_list(body))
    } else {
        let ty = spec.split(|c: char| c.is_whitespace() || c == '[').next().unwrap_or("");
        match ty.to_ascii_lowercase().as_str() {
            "real" | "numeric" => AttrKind::Real,
            "integer" => AttrKind::Integer,
            other => return Err(format!("unknown attribute type `{other}`")),
        }
    };
    Ok(Attribute { name, kind })
}

/// Reads a CSV file with a header row. `label_column` defaults to the last
/// column.
pub fn parse_csv(path: &Path, label_column: Option<&str>, minority_value: Option<&str>) -> Result<Ingested> {
    let text = fs::read_to_string(path).map_err(Error::io(path))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_csv_str(&text, &path.display().to_string(), &name, label_column, minority_value)
}

pub fn parse_csv_str(
    text: &str,
    source_name: &str,
    relation: &str,
    label_column: Option<&str>,
    minority_value: Option<&str>,
) -> Result<Ingested> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let names: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if names.len() < 2 {
        return Err(Error::Parse {
            source_name: source_name.into(),
            line: 1,
            message: "need at least two columns".into(),
        });
    }
    let class_ix = match label_column {
        Some(col) => {
            names.iter().position(|n| n == col).ok_or_else(|| Error::Config(format!("no column named `{col}`")))?
        }
        None => names.len() - 1,
    };
    let mut cells = Vec::new();
    let mut lines = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        cells.push(record.iter().map(str::to_string).collect());
        lines.push(line);
    }
    let feature_ix: Vec<usize> = (0..names.len()).filter(|&j| j != class_ix).collect();
    let kinds = vec![ColumnKind::Real; names.len()];
    let order = match minority_value {
        Some(v) => ClassOrder::Minority(v.to_string()),
        None => ClassOrder::Frequency,
    };
    build(
        Table { source_name, relation: relation.to_string(), names, kinds, cells, lines, class_ix, feature_ix },
        Format::Csv,
        order,
    )
}

struct Table<'a> {
    source_name: &'a str,
    relation: String,
    names: Vec<String>,
    kinds: Vec<ColumnKind>,
    cells: Vec<Vec<String>>,
    lines: Vec<usize>,
    class_ix: usize,
    feature_ix: Vec<usize>,
}

enum Format {
    Keel,
    Csv,
}

enum ClassOrder {
    /// Less frequent value is the minority; equal counts are an error.
    Frequency,
    /// Less frequent value is the minority; equal counts go to the value
    /// declared (or, failing that, seen) first.
    Declared(Vec<String>),
    /// Explicit minority value.
    Minority(String),
}

fn build(t: Table<'_>, format: Format, order: ClassOrder) -> Result<Ingested> {
    let source_name = t.source_name.to_string();
    let is_missing = |c: &str| c.is_empty() || c == "?";

    let missing: Vec<usize> = (0..t.cells.len()).filter(|&r| t.cells[r].iter().any(|c| is_missing(c))).collect();
    if let Some(&first) = missing.first() {
        return Err(Error::MissingValues { source_name, rows: missing.len(), first_row: first });
    }

    let mut features = Vec::with_capacity(t.cells.len() * t.feature_ix.len());
    let mut non_finite = Vec::new();
    for (r, row) in t.cells.iter().enumerate() {
        for &j in &t.feature_ix {
            let v: f64 = row[j].parse().map_err(|_| match format {
                Format::Csv => Error::UnsupportedFeature {
                    source_name: source_name.clone(),
                    attribute: t.names[j].clone(),
                    kind: format!("value `{}` at line {}", row[j], t.lines[r]),
                },
                Format::Keel => Error::Parse {
                    source_name: source_name.clone(),
                    line: t.lines[r],
                    message: format!("`{}` is not a number (attribute `{}`)", row[j], t.names[j]),
                },
            })?;
            if !v.is_finite() && non_finite.last() != Some(&r) {
                non_finite.push(r);
            }
            features.push(v);
        }
    }
    if !non_finite.is_empty() {
        return Err(Error::NonFinite { source_name, rows: non_finite });
    }

    let class_values: Vec<&str> = t.cells.iter().map(|row| row[t.class_ix].as_str()).collect();
    let (minority_value, majority_value) = pick_minority(&class_values, order, &source_name)?;
    let labels: Vec<Label> =
        class_values.iter().map(|v| if *v == minority_value { Label::Minority } else { Label::Majority }).collect();

    let ids = (0..labels.len() as u64).map(smotenn_core::SampleId).collect();
    let dataset = Dataset::from_parts(t.relation, t.feature_ix.len(), features, labels, ids)?;

    let scaler = smotenn_core::MinMaxScaler::fit(&dataset);
    let columns = t
        .feature_ix
        .iter()
        .zip(scaler.columns)
        .map(|(&j, c)| ColumnSpec { name: t.names[j].clone(), kind: t.kinds[j], ..c })
        .collect();
    Ok(Ingested { dataset, columns, class_column: t.names[t.class_ix].clone(), minority_value, majority_value })
}

fn pick_minority(values: &[&str], order: ClassOrder, source_name: &str) -> Result<(String, String)> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut seen: Vec<&str> = Vec::new();
    for v in values {
        let c = counts.entry(v).or_insert(0);
        if *c == 0 {
            seen.push(v);
        }
        *c += 1;
    }
    if seen.len() != 2 {
        return Err(Error::Config(format!(
            "{source_name}: expected exactly two class values, found {} ({})",
            seen.len(),
            seen.join(", ")
        )));
    }
    let (a, b) = (seen[0], seen[1]);
    let (ca, cb) = (counts[a], counts[b]);
    let (minority, majority) = match order {
        ClassOrder::Minority(m) => {
            let other = if m == a {
                b
            } else if m == b {
                a
            } else {
                return Err(Error::Config(format!("{source_name}: class value `{m}` does not occur")));
            };
            if counts[m.as_str()] > counts[other] {
                return Err(Error::Config(format!(
                    "{source_name}: `{m}` has {} samples against {} for `{other}`; the minority class may not be \
                     the larger one (imbalance ratio {:.3} < 1)",
                    counts[m.as_str()],
                    counts[other],
                    counts[other] as f64 / counts[m.as_str()] as f64
                )));
            }
            return Ok((m.clone(), other.to_string()));
        }
        _ if ca < cb => (a, b),
        _ if cb < ca => (b, a),
        ClassOrder::Frequency => {
            return Err(Error::Config(format!(
                "{source_name}: classes `{a}` and `{b}` are equally frequent; pass the minority value explicitly"
            )))
        }
        ClassOrder::Declared(declared) => {
            let rank = |v: &str| declared.iter().position(|d| d == v).unwrap_or(usize::MAX);
            if rank(b) < rank(a) {
                (b, a)
            } else {
                (a, b)
            }
        }
    };
    Ok((minority.to_string(), majority.to_string()))
}
