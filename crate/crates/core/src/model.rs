//! Domain types shared by every other module.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{bail, Error, Result};

/// Stable identifier of a sample. Original samples keep theirs through
/// every resampling step; synthetic samples get fresh ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(transparent))]
pub struct SampleId(pub u64);

impl fmt::Display for SampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for SampleId {
    fn from(v: u64) -> Self {
        SampleId(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Label {
    Minority,
    Majority,
}

impl Label {
    pub fn is_minority(self) -> bool {
        self == Label::Minority
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Minority => Label::Majority,
            Label::Majority => Label::Minority,
        }
    }
}

/// An owned row: feature vector, label and id.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub id: SampleId,
    pub features: Vec<f64>,
    pub label: Label,
}

impl Sample {
    pub fn new(id: impl Into<SampleId>, features: Vec<f64>, label: Label) -> Self {
        Sample { id: id.into(), features, label }
    }
}

/// Immutable table of feature vectors with binary labels.
///
/// Rows are stored contiguously (row-major). Datasets built through
/// [`Dataset::new`] or [`Dataset::from_parts`] always hold both classes and at
/// least two rows; resampling outputs only guarantee consistent widths, since
/// an aggressive removal step may legitimately empty a class.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    n_features: usize,
    features: Vec<f64>,
    labels: Vec<Label>,
    ids: Vec<SampleId>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, samples: Vec<Sample>) -> Result<Self> {
        let n_features = match samples.first() {
            Some(s) => s.features.len(),
            None => bail!(DegenerateDataset, "dataset has no samples"),
        };
        let mut features = Vec::with_capacity(samples.len() * n_features);
        let mut labels = Vec::with_capacity(samples.len());
        let mut ids = Vec::with_capacity(samples.len());
        for (row, s) in samples.into_iter().enumerate() {
            if s.features.len() != n_features {
                bail!(InvalidDataset, "row {row} has {} features, expected {n_features}", s.features.len());
            }
            features.extend_from_slice(&s.features);
            labels.push(s.label);
            ids.push(s.id);
        }
        Self::from_parts(name, n_features, features, labels, ids)
    }

    /// Builds a dataset from row-major feature storage.
    pub fn from_parts(
        name: impl Into<String>,
        n_features: usize,
        features: Vec<f64>,
        labels: Vec<Label>,
        ids: Vec<SampleId>,
    ) -> Result<Self> {
        let data = Self::derived(name.into(), n_features, features, labels, ids)?;
        if data.len() < 2 {
            bail!(DegenerateDataset, "dataset needs at least 2 samples, got {}", data.len());
        }
        let minority = data.labels.iter().filter(|l| l.is_minority()).count();
        if minority == 0 || minority == data.len() {
            bail!(DegenerateDataset, "both classes must be present");
        }
        Ok(data)
    }

    /// Width, finiteness and id-uniqueness checks only.
    pub(crate) fn derived(
        name: String,
        n_features: usize,
        features: Vec<f64>,
        labels: Vec<Label>,
        ids: Vec<SampleId>,
    ) -> Result<Self> {
        if n_features == 0 {
            bail!(InvalidDataset, "at least one feature is required");
        }
        if labels.len() != ids.len() || features.len() != labels.len() * n_features {
            bail!(
                InvalidDataset,
                "inconsistent storage: {} values, {} labels, {} ids for width {n_features}",
                features.len(),
                labels.len(),
                ids.len()
            );
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            bail!(InvalidDataset, "non-finite feature value in row {}", pos / n_features);
        }
        let mut seen = BTreeSet::new();
        for id in &ids {
            if !seen.insert(*id) {
                bail!(InvalidDataset, "duplicate sample id {id}");
            }
        }
        Ok(Dataset { name, n_features, features, labels, ids })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Number of samples (`m`).
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of features (`n`).
    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn features(&self, row: usize) -> &[f64] {
        &self.features[row * self.n_features..(row + 1) * self.n_features]
    }

    pub fn label(&self, row: usize) -> Label {
        self.labels[row]
    }

    pub fn id(&self, row: usize) -> SampleId {
        self.ids[row]
    }

    pub fn ids(&self) -> &[SampleId] {
        &self.ids
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// Row-major feature storage.
    pub fn raw_features(&self) -> &[f64] {
        &self.features
    }

    pub fn sample(&self, row: usize) -> Sample {
        Sample { id: self.ids[row], features: self.features(row).to_vec(), label: self.labels[row] }
    }

    pub fn samples(&self) -> impl Iterator<Item = Sample> + '_ {
        (0..self.len()).map(move |row| self.sample(row))
    }

    pub fn rows_with_label(&self, label: Label) -> impl Iterator<Item = usize> + '_ {
        self.labels.iter().enumerate().filter(move |(_, l)| **l == label).map(|(i, _)| i)
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|l| **l == label).count()
    }

    pub fn max_id(&self) -> Option<SampleId> {
        self.ids.iter().copied().max()
    }

    /// Copies the given rows, in the given order.
    pub fn subset(&self, rows: &[usize], name: impl Into<String>) -> Dataset {
        let mut features = Vec::with_capacity(rows.len() * self.n_features);
        let mut labels = Vec::with_capacity(rows.len());
        let mut ids = Vec::with_capacity(rows.len());
        for &r in rows {
            features.extend_from_slice(self.features(r));
            labels.push(self.labels[r]);
            ids.push(self.ids[r]);
        }
        Dataset { name: name.into(), n_features: self.n_features, features, labels, ids }
    }

    /// Same rows and ids, features replaced row by row.
    pub(crate) fn with_features(&self, features: Vec<f64>) -> Dataset {
        debug_assert_eq!(features.len(), self.features.len());
        Dataset { features, ..self.clone() }
    }

    /// Appends rows without re-validating ids (callers guarantee freshness).
    pub(crate) fn extended(
        mut self,
        extra_features: &[f64],
        extra_labels: &[Label],
        extra_ids: &[SampleId],
    ) -> Dataset {
        self.features.extend_from_slice(extra_features);
        self.labels.extend_from_slice(extra_labels);
        self.ids.extend_from_slice(extra_ids);
        self
    }
}

/// Class counts and imbalance ratio (`majority / minority`).
///
/// Ingested datasets always have `ir >= 1`; resampled outputs may invert the
/// proportion (SMOTE after RUS typically does), in which case `ir < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ImbalanceStats {
    pub minority_count: usize,
    pub majority_count: usize,
    pub ir: f64,
}

impl ImbalanceStats {
    pub fn from_counts(minority_count: usize, majority_count: usize) -> Result<Self> {
        if minority_count == 0 || majority_count == 0 {
            return Err(Error::DegenerateDataset("degenerate dataset: one class is absent".to_string()));
        }
        Ok(ImbalanceStats { minority_count, majority_count, ir: majority_count as f64 / minority_count as f64 })
    }

    pub fn total(&self) -> usize {
        self.minority_count + self.majority_count
    }
}

pub fn compute_imbalance(dataset: &Dataset) -> Result<ImbalanceStats> {
    let minority = dataset.count(Label::Minority);
    ImbalanceStats::from_counts(minority, dataset.len() - minority)
}

/// Splits into (minority, majority), each in dataset order.
pub fn split_by_class(dataset: &Dataset) -> (Vec<Sample>, Vec<Sample>) {
    let mut minority = Vec::new();
    let mut majority = Vec::new();
    for s in dataset.samples() {
        match s.label {
            Label::Minority => minority.push(s),
            Label::Majority => majority.push(s),
        }
    }
    (minority, majority)
}
