//! Resampling run configuration.

use core::fmt;
use core::str::FromStr;

use crate::error::{bail, Error, Result};
use crate::knn::IndexConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Method {
    /// Random undersampling of the majority class.
    Rus,
    /// Edited nearest neighbour (majority-only removal).
    Enn,
    Smote,
    RusSmote,
    EnnSmote,
    /// Single-neighbourhood hybrid of ENN cleaning and SMOTE generation.
    Smotenn,
}

impl Method {
    pub const ALL: [Method; 6] =
        [Method::Rus, Method::Enn, Method::Smote, Method::RusSmote, Method::EnnSmote, Method::Smotenn];

    pub fn name(self) -> &'static str {
        match self {
            Method::Rus => "RUS",
            Method::Enn => "ENN",
            Method::Smote => "SMOTE",
            Method::RusSmote => "RUS+SMOTE",
            Method::EnnSmote => "ENN+SMOTE",
            Method::Smotenn => "SMOTENN",
        }
    }

    /// Whether the method generates synthetic samples (and so needs `N < K`).
    pub fn oversamples(self) -> bool {
        matches!(self, Method::Smote | Method::RusSmote | Method::EnnSmote | Method::Smotenn)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: alloc::string::String =
            s.chars().filter(|c| c.is_ascii_alphanumeric()).map(|c| c.to_ascii_lowercase()).collect();
        Ok(match norm.as_str() {
            "rus" => Method::Rus,
            "enn" => Method::Enn,
            "smote" => Method::Smote,
            "russmote" | "russmo" => Method::RusSmote,
            "ennsmote" | "ennsmo" => Method::EnnSmote,
            "smotenn" => Method::Smotenn,
            _ => bail!(Config, "unknown method `{s}`"),
        })
    }
}

/// Neighbour search engine.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Engine {
    /// Brute-force scan; exact.
    Exact,
    /// Hybrid spill tree; approximate unless `tau == 0`.
    SpillTree(IndexConfig),
}

impl Default for Engine {
    fn default() -> Self {
        Engine::Exact
    }
}

/// Full configuration of a resampling run.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResampleSpec {
    pub method: Method,
    /// Neighbourhood size `K`.
    pub k: usize,
    /// Synthetic samples per minority sample, `N < K`.
    pub n_oversample: usize,
    /// Majority samples retained per minority sample by the RUS step.
    pub p_ratio: f64,
    /// Standalone ENN stops once the ratio drops to this value.
    pub target_ir: f64,
    pub seed: u64,
    pub engine: Engine,
    pub partitions: usize,
    /// Use this interpolation factor instead of a fresh draw per synthetic.
    pub fixed_u: Option<f64>,
}

impl Default for ResampleSpec {
    fn default() -> Self {
        ResampleSpec {
            method: Method::Smotenn,
            k: 5,
            n_oversample: 1,
            p_ratio: 1.0,
            target_ir: 1.0,
            seed: 0,
            engine: Engine::Exact,
            partitions: 1,
            fixed_u: None,
        }
    }
}

impl ResampleSpec {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            bail!(Config, "k must be at least 1");
        }
        if self.n_oversample >= self.k {
            bail!(Config, "oversampling amount must satisfy N < K (N = {}, K = {})", self.n_oversample, self.k);
        }
        if !(self.p_ratio > 0.0 && self.p_ratio.is_finite()) {
            bail!(Config, "p_ratio must be positive, got {}", self.p_ratio);
        }
        if !(self.target_ir >= 1.0) {
            bail!(Config, "target IR must be at least 1, got {}", self.target_ir);
        }
        if self.partitions == 0 {
            bail!(Config, "partitions must be at least 1");
        }
        if let Some(u) = self.fixed_u {
            if !(0.0..=1.0).contains(&u) {
                bail!(Config, "fixed interpolation factor must lie in [0, 1], got {u}");
            }
        }
        if let Engine::SpillTree(cfg) = &self.engine {
            cfg.validate()?;
        }
        Ok(())
    }
}
