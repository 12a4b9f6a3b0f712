//! Min-max feature scaling.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::model::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ColumnKind {
    Real,
    Integer,
    Class,
}

/// Column metadata; for feature columns the observed range is what
/// [`MinMaxScaler`] maps onto `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ColumnSpec {
    pub name: String,
    pub kind: ColumnKind,
    pub observed_min: f64,
    pub observed_max: f64,
}

impl ColumnSpec {
    fn scale(&self, v: f64) -> f64 {
        let span = self.observed_max - self.observed_min;
        if span > 0.0 {
            (v - self.observed_min) / span
        } else {
            0.0
        }
    }

    fn unscale(&self, v: f64) -> f64 {
        let span = self.observed_max - self.observed_min;
        if span > 0.0 {
            self.observed_min + v * span
        } else {
            self.observed_min
        }
    }
}

/// Per-column affine map onto `[0, 1]`; constant columns map to 0.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MinMaxScaler {
    pub columns: Vec<ColumnSpec>,
}

impl MinMaxScaler {
    pub fn fit(dataset: &Dataset) -> Self {
        let n = dataset.n_features();
        let mut lo = alloc::vec![f64::INFINITY; n];
        let mut hi = alloc::vec![f64::NEG_INFINITY; n];
        for row in 0..dataset.len() {
            for (j, &v) in dataset.features(row).iter().enumerate() {
                lo[j] = lo[j].min(v);
                hi[j] = hi[j].max(v);
            }
        }
        let columns = (0..n)
            .map(|j| ColumnSpec {
                name: format!("x{j}"),
                kind: ColumnKind::Real,
                observed_min: if lo[j].is_finite() { lo[j] } else { 0.0 },
                observed_max: if hi[j].is_finite() { hi[j] } else { 0.0 },
            })
            .collect();
        MinMaxScaler { columns }
    }

    /// Wraps existing column metadata (e.g. ranges recorded at ingestion).
    pub fn from_columns(columns: Vec<ColumnSpec>) -> Self {
        MinMaxScaler { columns }
    }

    pub fn transform_row(&self, row: &mut [f64]) {
        for (v, c) in row.iter_mut().zip(&self.columns) {
            *v = c.scale(*v);
        }
    }

    pub fn inverse_row(&self, row: &mut [f64]) {
        for (v, c) in row.iter_mut().zip(&self.columns) {
            *v = c.unscale(*v);
        }
    }

    pub fn transform(&self, dataset: &Dataset) -> Dataset {
        self.map(dataset, |s, row| s.transform_row(row))
    }

    pub fn inverse(&self, dataset: &Dataset) -> Dataset {
        self.map(dataset, |s, row| s.inverse_row(row))
    }

    fn map(&self, dataset: &Dataset, f: impl Fn(&Self, &mut [f64])) -> Dataset {
        assert_eq!(self.columns.len(), dataset.n_features(), "scaler width mismatch");
        let mut values: Vec<f64> = dataset.raw_features().to_vec();
        for row in values.chunks_mut(dataset.n_features()) {
            f(self, row);
        }
        dataset.with_features(values)
    }
}

/// Rescales every feature column of `dataset` to `[0, 1]`.
pub fn normalize_minmax(dataset: &Dataset) -> (Dataset, Vec<ColumnSpec>) {
    let scaler = MinMaxScaler::fit(dataset);
    (scaler.transform(dataset), scaler.columns)
}
