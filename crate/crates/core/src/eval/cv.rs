//! Stratified k-fold cross-validation.
//!
//! Each fold fits min-max scaling on its training side only, resamples the
//! scaled training side, and classifies the (scaled) test side with k-NN.
//! Test rows never reach the scaler or the resampler.

use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::error::{bail, Result};
use crate::eval::classify::knn_classify;
use crate::eval::metrics::{g_mean, ConfusionMatrix};
use crate::model::{Dataset, Label};
use crate::resample::resample_with;
use crate::rng::{tags, RngStream};
use crate::scale::{ColumnSpec, MinMaxScaler};
use crate::spec::{Engine, ResampleSpec};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CvConfig {
    pub folds: usize,
    /// Neighbours consulted by the classifier.
    pub classifier_k: usize,
    pub engine: Engine,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig { folds: 10, classifier_k: 5, engine: Engine::Exact }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FoldReport {
    pub fold: usize,
    pub train_size: usize,
    pub test_size: usize,
    /// Training size after resampling.
    pub resampled_size: usize,
    /// Scaling fitted on the training side.
    pub scaler: Vec<ColumnSpec>,
    pub confusion: ConfusionMatrix,
    pub g_mean: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CvReport {
    pub folds: Vec<FoldReport>,
    pub mean_g_mean: f64,
}

/// Fold index of every row. Each class is shuffled and dealt round-robin,
/// the majority continuing where the minority stopped.
pub fn stratified_folds(dataset: &Dataset, folds: usize, rng: &RngStream) -> Result<Vec<usize>> {
    if folds < 2 {
        bail!(Config, "need at least 2 folds, got {folds}");
    }
    let mut minority: Vec<usize> = dataset.rows_with_label(Label::Minority).collect();
    let mut majority: Vec<usize> = dataset.rows_with_label(Label::Majority).collect();
    if minority.len() < folds || majority.len() < folds {
        bail!(
            Config,
            "{folds} folds need at least {folds} samples of each class (minority {}, majority {})",
            minority.len(),
            majority.len()
        );
    }
    let mut gen = rng.rng();
    minority.shuffle(&mut gen);
    majority.shuffle(&mut gen);
    let mut assignment = alloc::vec![0; dataset.len()];
    for (i, &row) in minority.iter().chain(&majority).enumerate() {
        assignment[row] = i % folds;
    }
    Ok(assignment)
}

/// Trains on every fold but `fold` and tests on `fold`. `spec = None` skips
/// resampling.
pub fn evaluate_fold(
    dataset: &Dataset,
    assignment: &[usize],
    fold: usize,
    spec: Option<&ResampleSpec>,
    config: &CvConfig,
    rng: &RngStream,
) -> Result<FoldReport> {
    let (test_rows, train_rows): (Vec<usize>, Vec<usize>) = (0..dataset.len()).partition(|&r| assignment[r] == fold);
    let train = dataset.subset(&train_rows, dataset.name());
    let test = dataset.subset(&test_rows, dataset.name());

    let scaler = MinMaxScaler::fit(&train);
    let train = scaler.transform(&train);
    let test = scaler.transform(&test);

    let stream = rng.derive(tags::FOLD).derive(fold as u64);
    let train = match spec {
        Some(spec) => resample_with(&train, spec, &stream)?.output,
        None => train,
    };
    let queries: Vec<_> = test.samples().collect();
    let predicted = knn_classify(&train, &queries, config.classifier_k, &config.engine, &stream.derive(tags::INDEX))?;
    let confusion = ConfusionMatrix::from_predictions(test.labels(), &predicted);
    Ok(FoldReport {
        fold,
        train_size: train_rows.len(),
        test_size: test_rows.len(),
        resampled_size: train.len(),
        scaler: scaler.columns,
        confusion,
        g_mean: g_mean(&confusion)?,
    })
}

/// Stratified cross-validation of `spec` (or of no resampling).
pub fn cross_validate(
    dataset: &Dataset,
    spec: Option<&ResampleSpec>,
    config: &CvConfig,
    rng: &RngStream,
) -> Result<CvReport> {
    let assignment = stratified_folds(dataset, config.folds, &rng.derive(tags::FOLDS))?;
    let folds = (0..config.folds)
        .map(|f| evaluate_fold(dataset, &assignment, f, spec, config, rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(folds))
}

pub fn summarize(folds: Vec<FoldReport>) -> CvReport {
    let mean_g_mean = folds.iter().map(|f| f.g_mean).sum::<f64>() / folds.len().max(1) as f64;
    CvReport { folds, mean_g_mean }
}
