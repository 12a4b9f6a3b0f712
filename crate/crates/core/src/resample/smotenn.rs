use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::knn::{AnyIndex, NeighborIndex, PointSet};
use crate::model::{Dataset, Label};
use crate::resample::{draw_neighbors, next_id, rus, sample_stream, OutputBuilder, ResampleResult};
use crate::rng::{tags, RngStream};
use crate::spec::ResampleSpec;

/// SMOTENN.
///
/// 1. Undersample the majority to `round(p_ratio * minority)` samples.
/// 2. For every minority sample take its `k` nearest neighbours of either
///    class in the undersampled set.
/// 3. When strictly more than `k / 2` of them are minority, mark the majority
///    neighbours for removal and interpolate up to `n` synthetic samples
///    towards distinct minority neighbours.
/// 4. Drop every marked sample.
///
/// Neighbourhoods are all computed on the undersampled set; removals only take
/// effect at the end.
pub fn smotenn(dataset: &Dataset, spec: &ResampleSpec, rng: &RngStream) -> Result<ResampleResult> {
    spec.validate()?;
    let k = spec.k;
    let minority_count = dataset.count(Label::Minority);
    if minority_count < 2 {
        bail!(Precondition, "SMOTENN needs at least 2 minority samples, found {minority_count}");
    }

    let under = rus(dataset, spec.p_ratio, rng)?;
    let reduced = &under.output;
    if reduced.len() <= k {
        bail!(Precondition, "k = {k} must be below the undersampled size ({})", reduced.len());
    }
    let index = AnyIndex::build(&spec.engine, PointSet::from_dataset(reduced), &rng.derive(tags::INDEX))?;

    let mut edited = BTreeSet::new();
    let mut out = OutputBuilder::new(next_id(dataset));
    for row in reduced.rows_with_label(Label::Minority) {
        let id = reduced.id(row);
        let x = reduced.features(row);
        let hood = index.knn(x, Some(id), k)?;
        let (same, other): (Vec<usize>, Vec<usize>) =
            hood.neighbors.iter().map(|nb| nb.row).partition(|&r| reduced.label(r) == Label::Minority);
        if 2 * same.len() <= k {
            continue;
        }
        edited.extend(other.iter().map(|&r| reduced.id(r)));
        for (nb, u) in draw_neighbors(&sample_stream(rng, id), same, spec.n_oversample, spec.fixed_u) {
            out.push_synthetic((id, x), (reduced.id(nb), reduced.features(nb)), u);
        }
    }
    Ok(out.finish(reduced, &edited, under.removed_ids, dataset.name()))
}
