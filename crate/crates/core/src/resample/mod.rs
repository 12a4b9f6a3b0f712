//! Resampling algorithms.
//!
//! Every operation returns a [`ResampleResult`]: the resampled dataset, the
//! original majority ids it removed and, for each synthetic sample, the
//! `(parent, neighbour, u)` triple it was interpolated from.
//!
//! Randomness follows one discipline shared by all methods: the random
//! undersampling step shuffles with `rng.derive(RUS)`, index construction
//! uses `rng.derive(INDEX)`, and every minority sample draws its neighbours
//! and interpolation factors from its own stream
//! `rng.derive(SAMPLE).derive(id)`. Outputs therefore do not depend on the
//! search engine (when it is exact) or on the order samples are visited in.

mod enn;
mod rus;
mod smote;
mod smotenn;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use rand::Rng;

use crate::error::Result;
use crate::model::{Dataset, Label, SampleId};
use crate::partition;
use crate::rng::{tags, RngStream};
use crate::spec::{Method, ResampleSpec};

pub use enn::enn;
pub use rus::rus;
pub use smote::smote;
pub use smotenn::smotenn;

/// Origin of a synthetic sample: `parent + u * (neighbor - parent)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Provenance {
    pub parent: SampleId,
    pub neighbor: SampleId,
    pub u: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResampleResult {
    pub output: Dataset,
    pub removed_ids: BTreeSet<SampleId>,
    pub synthetic_count: usize,
    /// Keyed by synthetic sample id.
    pub provenance: BTreeMap<SampleId, Provenance>,
}

impl ResampleResult {
    pub fn is_synthetic(&self, id: SampleId) -> bool {
        self.provenance.contains_key(&id)
    }
}

/// Runs `spec` with the root stream `(spec.seed, 0)`.
pub fn resample(dataset: &Dataset, spec: &ResampleSpec) -> Result<ResampleResult> {
    resample_with(dataset, spec, &RngStream::new(spec.seed, 0))
}

/// Runs `spec` with an explicit root stream, partitioning the data first when
/// `spec.partitions > 1`.
pub fn resample_with(dataset: &Dataset, spec: &ResampleSpec, rng: &RngStream) -> Result<ResampleResult> {
    spec.validate()?;
    if spec.partitions > 1 {
        let plan = partition::plan_partitions(dataset, spec.partitions, &rng.derive(tags::PLAN))?;
        return partition::run_partitioned_with(dataset, spec, &plan, rng);
    }
    apply_method(dataset, spec, rng)
}

/// Applies `spec.method` to the whole dataset, ignoring `spec.partitions`.
pub fn apply_method(dataset: &Dataset, spec: &ResampleSpec, rng: &RngStream) -> Result<ResampleResult> {
    spec.validate()?;
    let next_id = next_id(dataset);
    match spec.method {
        Method::Rus => rus(dataset, spec.p_ratio, rng),
        Method::Enn => enn(dataset, spec.k, spec.target_ir, &spec.engine, rng),
        Method::Smote => smote::run(dataset, spec.k, spec.n_oversample, &spec.engine, rng, spec.fixed_u, next_id),
        Method::Smotenn => smotenn(dataset, spec, rng),
        Method::RusSmote | Method::EnnSmote => compose(dataset, spec, rng),
    }
}

/// RUS+SMOTE or ENN+SMOTE: the first stage runs on `rng.derive(STAGE_ONE)`,
/// SMOTE on its output with `rng.derive(STAGE_TWO)`.
pub fn compose(dataset: &Dataset, spec: &ResampleSpec, rng: &RngStream) -> Result<ResampleResult> {
    let first = rng.derive(tags::STAGE_ONE);
    let stage = match spec.method {
        Method::RusSmote => rus(dataset, spec.p_ratio, &first)?,
        Method::EnnSmote => enn(dataset, spec.k, spec.target_ir, &spec.engine, &first)?,
        other => {
            return Err(crate::Error::Config(alloc::format!("{other} is not a composed method")));
        }
    };
    let second = smote::run(
        &stage.output,
        spec.k,
        spec.n_oversample,
        &spec.engine,
        &rng.derive(tags::STAGE_TWO),
        spec.fixed_u,
        next_id(dataset),
    )?;
    let mut removed_ids = stage.removed_ids;
    removed_ids.extend(second.removed_ids);
    Ok(ResampleResult {
        output: second.output.with_name(dataset.name()),
        removed_ids,
        synthetic_count: second.synthetic_count,
        provenance: second.provenance,
    })
}

pub(crate) fn next_id(dataset: &Dataset) -> SampleId {
    SampleId(dataset.max_id().map_or(0, |m| m.0 + 1))
}

pub(crate) fn sample_stream(rng: &RngStream, id: SampleId) -> RngStream {
    rng.derive(tags::SAMPLE).derive(id.0)
}

/// Draws up to `n` distinct entries of `pool` (in the order given), each with
/// an interpolation factor: pick an index uniformly among what is left,
/// remove it, then draw `u` unless it is fixed.
pub(crate) fn draw_neighbors<T: Copy>(
    stream: &RngStream,
    mut pool: Vec<T>,
    n: usize,
    fixed_u: Option<f64>,
) -> Vec<(T, f64)> {
    let mut rng = stream.rng();
    let mut out = Vec::with_capacity(n.min(pool.len()));
    while out.len() < n && !pool.is_empty() {
        let pick = pool.remove(rng.gen_range(0..pool.len()));
        let u = match fixed_u {
            Some(u) => u,
            None => rng.gen::<f64>(),
        };
        out.push((pick, u));
    }
    out
}

/// `parent + u * (neighbor - parent)`, coordinate by coordinate.
pub fn interpolate(parent: &[f64], neighbor: &[f64], u: f64) -> Vec<f64> {
    parent.iter().zip(neighbor).map(|(p, q)| p + u * (q - p)).collect()
}

/// Accumulates synthetic rows and assembles the final result.
pub(crate) struct OutputBuilder {
    next_id: SampleId,
    features: Vec<f64>,
    ids: Vec<SampleId>,
    provenance: BTreeMap<SampleId, Provenance>,
}

impl OutputBuilder {
    pub(crate) fn new(next_id: SampleId) -> Self {
        OutputBuilder { next_id, features: Vec::new(), ids: Vec::new(), provenance: BTreeMap::new() }
    }

    pub(crate) fn push_synthetic(&mut self, parent: (SampleId, &[f64]), neighbor: (SampleId, &[f64]), u: f64) {
        let row = interpolate(parent.1, neighbor.1, u);
        self.push_row(&row, Provenance { parent: parent.0, neighbor: neighbor.0, u });
    }

    /// Appends an already computed synthetic row under the next free id.
    pub(crate) fn push_row(&mut self, features: &[f64], provenance: Provenance) {
        let id = self.next_id;
        self.next_id = SampleId(id.0 + 1);
        self.features.extend_from_slice(features);
        self.ids.push(id);
        self.provenance.insert(id, provenance);
    }

    /// Keeps the rows of `source` not in `removed` (in order), then appends
    /// the synthetic rows. `removed_ids` of the result is `extra_removed ∪ removed`.
    pub(crate) fn finish(
        self,
        source: &Dataset,
        removed: &BTreeSet<SampleId>,
        extra_removed: BTreeSet<SampleId>,
        name: &str,
    ) -> ResampleResult {
        let keep: Vec<usize> = (0..source.len()).filter(|&r| !removed.contains(&source.id(r))).collect();
        let labels = alloc::vec![Label::Minority; self.ids.len()];
        let synthetic_count = self.ids.len();
        let output = source.subset(&keep, name).extended(&self.features, &labels, &self.ids);
        let mut removed_ids = extra_removed;
        removed_ids.extend(removed.iter().copied());
        ResampleResult { output, removed_ids, synthetic_count, provenance: self.provenance }
    }
}
