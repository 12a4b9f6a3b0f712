//! Evaluation: k-NN classification, g-mean, stratified cross-validation and
//! the Friedman / Iman-Davenport / Holm comparison of methods across
//! experiments.

pub mod classify;
pub mod cv;
pub mod metrics;
pub mod special;
pub mod stats;

pub use classify::knn_classify;
pub use cv::{cross_validate, stratified_folds, CvConfig, CvReport, FoldReport};
pub use metrics::{g_mean, ConfusionMatrix};
pub use stats::{
    friedman_iman_davenport, holm_posthoc, rank_row, wins_ties_losses, Decision, FriedmanResult, HolmEntry, RankReport,
    WinsTiesLosses,
};
