use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::knn::{AnyIndex, NeighborIndex, PointSet};
use crate::model::{Dataset, Label, Sample};
use crate::rng::RngStream;
use crate::spec::Engine;

/// Majority vote among the `k` nearest training samples. A tied vote predicts
/// the minority class.
pub fn knn_classify(
    train: &Dataset,
    test: &[Sample],
    k: usize,
    engine: &Engine,
    rng: &RngStream,
) -> Result<Vec<Label>> {
    if train.is_empty() {
        bail!(Precondition, "cannot classify with an empty training set");
    }
    if k == 0 || k >= train.len() {
        bail!(Precondition, "classifier k = {k} must be in 1..{}", train.len());
    }
    let index = AnyIndex::build(engine, PointSet::from_dataset(train), rng)?;
    test.iter()
        .map(|s| {
            let hood = index.knn(&s.features, None, k)?;
            let minority = hood.neighbors.iter().filter(|n| train.label(n.row) == Label::Minority).count();
            Ok(if 2 * minority >= k { Label::Minority } else { Label::Majority })
        })
        .collect()
}
