use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::knn::{AnyIndex, NeighborIndex, PointSet};
use crate::model::{Dataset, Label, SampleId};
use crate::resample::{draw_neighbors, sample_stream, OutputBuilder, ResampleResult};
use crate::rng::{tags, RngStream};
use crate::spec::Engine;

/// Classic SMOTE: every minority sample gets up to `n` synthetic samples
/// interpolated towards distinct members of its `k` nearest minority
/// neighbours. Requires more than `k` minority samples.
pub fn smote(
    dataset: &Dataset,
    k: usize,
    n: usize,
    engine: &Engine,
    rng: &RngStream,
    fixed_u: Option<f64>,
) -> Result<ResampleResult> {
    run(dataset, k, n, engine, rng, fixed_u, super::next_id(dataset))
}

pub(crate) fn run(
    dataset: &Dataset,
    k: usize,
    n: usize,
    engine: &Engine,
    rng: &RngStream,
    fixed_u: Option<f64>,
    first_id: SampleId,
) -> Result<ResampleResult> {
    if k == 0 {
        bail!(Config, "k must be at least 1");
    }
    let minority: Vec<usize> = dataset.rows_with_label(Label::Minority).collect();
    if minority.len() <= k {
        bail!(Precondition, "SMOTE needs more than k = {k} minority samples, found {}", minority.len());
    }
    let points = PointSet::from_rows(dataset, &minority);
    let index = AnyIndex::build(engine, points, &rng.derive(tags::INDEX))?;

    let mut out = OutputBuilder::new(first_id);
    for &row in &minority {
        let id = dataset.id(row);
        let x = dataset.features(row);
        let hood = index.knn(x, Some(id), k)?;
        let pool: Vec<usize> = hood.neighbors.iter().map(|nb| minority[nb.row]).collect();
        for (nb, u) in draw_neighbors(&sample_stream(rng, id), pool, n, fixed_u) {
            out.push_synthetic((id, x), (dataset.id(nb), dataset.features(nb)), u);
        }
    }
    Ok(out.finish(dataset, &BTreeSet::new(), BTreeSet::new(), dataset.name()))
}
