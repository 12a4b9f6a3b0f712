//! Hybrid undersampling/oversampling for class-imbalanced binary data.
//!
//! The crate is `no_std` (it needs `alloc`) and holds every algorithm of the
//! toolkit; file formats, thread pools and the command line live in the
//! `smotenn` companion crate.
//!
//! ```text
//! model      Dataset, Label, ImbalanceStats
//! rng        RngStream: seeded, splittable ChaCha streams
//! scale      min-max normalization with inverse mapping
//! knn        brute-force k-NN and the hybrid spill tree
//! resample   RUS, ENN, SMOTE, RUS+SMOTE, ENN+SMOTE, SMOTENN
//! partition  stratified blocks, per-block map and id-stable reduce
//! eval       k-NN classifier, g-mean, stratified CV, Friedman/Holm
//! ```
//!
//! # Example
//!
//! ```
//! use smotenn_core::{Dataset, Label, Method, ResampleSpec, Sample, resample};
//!
//! let mut rows = Vec::new();
//! for i in 0..40u64 {
//!     let label = if i % 5 == 0 { Label::Minority } else { Label::Majority };
//!     let x = (i as f64 * 0.37) % 1.0;
//!     rows.push(Sample::new(i, vec![x, 1.0 - x], label));
//! }
//! let data = Dataset::new("toy", rows).unwrap();
//! let spec = ResampleSpec { method: Method::Smote, k: 5, n_oversample: 1, ..Default::default() };
//! let out = resample(&data, &spec).unwrap();
//! assert_eq!(out.synthetic_count, 8);
//! ```

#![no_std]
#![deny(rustdoc::broken_intra_doc_links)]

extern crate alloc;

mod error;
mod math;

pub mod eval;
pub mod knn;
pub mod model;
pub mod partition;
pub mod resample;
pub mod rng;
pub mod scale;
pub mod spec;

pub use error::{Error, ErrorKind, Result};
pub use knn::{brute_force_knn, IndexConfig, Neighbor, NeighborSet, PointSet, SpillTreeIndex};
pub use model::{compute_imbalance, split_by_class, Dataset, ImbalanceStats, Label, Sample, SampleId};
pub use partition::{plan_partitions, run_partitioned, PartitionPlan};
pub use resample::{resample, resample_with, Provenance, ResampleResult};
pub use rng::RngStream;
pub use scale::{normalize_minmax, ColumnKind, ColumnSpec, MinMaxScaler};
pub use spec::{Engine, Method, ResampleSpec};
