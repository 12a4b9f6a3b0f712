use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::knn::{AnyIndex, NeighborIndex, PointSet};
use crate::model::{Dataset, Label, SampleId};
use crate::resample::{OutputBuilder, ResampleResult};
use crate::rng::{tags, RngStream};
use crate::spec::Engine;

/// Edited nearest neighbours, majority side only.
///
/// Each pass builds an index over the surviving samples and marks every
/// majority sample whose `k` neighbours are strictly more than half minority;
/// all marked samples are then removed at once. Passes repeat until the
/// imbalance ratio drops to `target_ir`, a pass marks nothing, or no more than
/// `k` samples remain. A pass never takes the majority below the minority
/// count: when it would, only the lowest-id marked samples (up to the floor)
/// are removed.
pub fn enn(dataset: &Dataset, k: usize, target_ir: f64, engine: &Engine, rng: &RngStream) -> Result<ResampleResult> {
    if k == 0 {
        bail!(Config, "k must be at least 1");
    }
    if !(target_ir >= 1.0) {
        bail!(Config, "target_ir must be at least 1, got {target_ir}");
    }
    let minority = dataset.count(Label::Minority);
    if minority == 0 {
        bail!(DegenerateDataset, "no minority samples");
    }

    let mut alive: Vec<usize> = (0..dataset.len()).collect();
    let mut majority = dataset.count(Label::Majority);
    let mut removed = BTreeSet::new();
    let pass_rng = rng.derive(tags::ENN_PASS);

    for pass in 0u64.. {
        if majority as f64 <= target_ir * minority as f64 || alive.len() <= k {
            break;
        }
        let index = AnyIndex::build(engine, PointSet::from_rows(dataset, &alive), &pass_rng.derive(pass))?;
        let mut marked: Vec<SampleId> = Vec::new();
        for &row in &alive {
            if dataset.label(row) != Label::Majority {
                continue;
            }
            let id = dataset.id(row);
            let hood = index.knn(dataset.features(row), Some(id), k)?;
            let votes = hood.neighbors.iter().filter(|n| dataset.label(alive[n.row]) == Label::Minority).count();
            if 2 * votes > k {
                marked.push(id);
            }
        }
        let allowed = majority.saturating_sub(minority);
        if marked.len() > allowed {
            marked.sort_unstable();
            marked.truncate(allowed);
        }
        if marked.is_empty() {
            break;
        }
        majority -= marked.len();
        let pass_removed: BTreeSet<SampleId> = marked.into_iter().collect();
        alive.retain(|&r| !pass_removed.contains(&dataset.id(r)));
        removed.extend(pass_removed);
    }

    Ok(OutputBuilder::new(SampleId(0)).finish(dataset, &removed, BTreeSet::new(), dataset.name()))
}
