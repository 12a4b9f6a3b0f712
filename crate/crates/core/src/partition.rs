//! Partitioned execution: split the data into stratified blocks, resample
//! each block independently, merge the results.
//!
//! Block `b` runs on the stream `root.block(b)`, so a block's output depends
//! only on its own rows and the seed, never on how blocks are scheduled. The
//! reduce step is deterministic: blocks are merged by index, synthetic
//! samples get fresh global ids in block order.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::error::{bail, Error, Result};
use crate::model::{Dataset, Label, SampleId};
use crate::resample::{apply_method, next_id, OutputBuilder, ResampleResult};
use crate::rng::RngStream;
use crate::spec::ResampleSpec;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PartitionPlan {
    pub block_count: usize,
    /// Block of each dataset row.
    pub assignment: Vec<usize>,
    /// Every block received a share of both classes.
    pub stratified: bool,
}

impl PartitionPlan {
    /// Rows of block `b`, in dataset order.
    pub fn block_rows(&self, block: usize) -> Vec<usize> {
        self.assignment.iter().enumerate().filter(|(_, b)| **b == block).map(|(r, _)| r).collect()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = alloc::vec![0; self.block_count];
        for &b in &self.assignment {
            sizes[b] += 1;
        }
        sizes
    }
}

/// Stratified assignment: each class is shuffled and dealt round-robin, the
/// majority continuing where the minority stopped so block sizes differ by at
/// most one. Fails when there are fewer minority samples than blocks.
pub fn plan_partitions(dataset: &Dataset, block_count: usize, rng: &RngStream) -> Result<PartitionPlan> {
    if block_count == 0 {
        bail!(Config, "partition count must be at least 1");
    }
    let mut minority: Vec<usize> = dataset.rows_with_label(Label::Minority).collect();
    let mut majority: Vec<usize> = dataset.rows_with_label(Label::Majority).collect();
    if minority.len() < block_count {
        bail!(Planning, "{block_count} blocks need at least one minority sample each, dataset has {}", minority.len());
    }
    let mut gen = rng.rng();
    minority.shuffle(&mut gen);
    majority.shuffle(&mut gen);

    let mut assignment = alloc::vec![0; dataset.len()];
    for (i, &row) in minority.iter().chain(&majority).enumerate() {
        assignment[row] = i % block_count;
    }
    Ok(PartitionPlan { block_count, assignment, stratified: majority.len() >= block_count })
}

/// Resamples block `block` of `plan` on `root.block(block)`.
pub fn map_block(
    dataset: &Dataset,
    spec: &ResampleSpec,
    plan: &PartitionPlan,
    block: usize,
    root: &RngStream,
) -> Result<ResampleResult> {
    let rows = plan.block_rows(block);
    let wrap = |source: Error| Error::Block { block, source: Box::new(source) };
    if rows.len() < spec.k + 1 {
        return Err(wrap(Error::Planning(format!("{} samples, needs at least k + 1 = {}", rows.len(), spec.k + 1))));
    }
    let part = dataset.subset(&rows, format!("{}#{block}", dataset.name()));
    let single = ResampleSpec { partitions: 1, ..spec.clone() };
    apply_method(&part, &single, &root.block(block)).map_err(wrap)
}

/// Merges per-block results: originals keep their ids and dataset order,
/// synthetic samples follow, renumbered from `max_id + 1` block by block.
pub fn reduce(dataset: &Dataset, mut blocks: Vec<(usize, ResampleResult)>) -> ResampleResult {
    blocks.sort_by_key(|(b, _)| *b);
    let mut removed = BTreeSet::new();
    let mut out = OutputBuilder::new(next_id(dataset));
    for (_, result) in &blocks {
        removed.extend(result.removed_ids.iter().copied());
        let rows = &result.output;
        for row in 0..rows.len() {
            if let Some(p) = result.provenance.get(&rows.id(row)) {
                out.push_row(rows.features(row), *p);
            }
        }
    }
    out.finish(dataset, &removed, BTreeSet::new(), dataset.name())
}

/// Sequential partitioned run on the root stream `(spec.seed, 0)`.
pub fn run_partitioned(dataset: &Dataset, spec: &ResampleSpec, plan: &PartitionPlan) -> Result<ResampleResult> {
    run_partitioned_with(dataset, spec, plan, &RngStream::new(spec.seed, 0))
}

pub fn run_partitioned_with(
    dataset: &Dataset,
    spec: &ResampleSpec,
    plan: &PartitionPlan,
    root: &RngStream,
) -> Result<ResampleResult> {
    if plan.assignment.len() != dataset.len() {
        bail!(Planning, "plan covers {} rows, dataset has {}", plan.assignment.len(), dataset.len());
    }
    let blocks = (0..plan.block_count)
        .map(|b| map_block(dataset, spec, plan, b, root).map(|r| (b, r)))
        .collect::<Result<Vec<_>>>()?;
    Ok(reduce(dataset, blocks))
}

/// Ids of the original samples that survive in `result`.
pub fn retained_ids(result: &ResampleResult) -> Vec<SampleId> {
    result.output.ids().iter().copied().filter(|id| !result.provenance.contains_key(id)).collect()
}
