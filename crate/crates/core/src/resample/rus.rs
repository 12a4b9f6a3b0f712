use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{bail, Result};
use crate::model::{Dataset, Label, SampleId};
use crate::resample::{OutputBuilder, ResampleResult};
use crate::rng::{tags, RngStream};

/// Random undersampling to `round(p_ratio * minority)` majority samples,
/// capped at the current majority size and never below one.
///
/// Majority samples are shuffled in dataset order with a partial
/// Fisher-Yates pass on `rng.derive(RUS)`; the first `target` survive.
pub fn rus(dataset: &Dataset, p_ratio: f64, rng: &RngStream) -> Result<ResampleResult> {
    if !(p_ratio > 0.0 && p_ratio.is_finite()) {
        bail!(Config, "p_ratio must be positive, got {p_ratio}");
    }
    let minority = dataset.count(Label::Minority);
    if minority == 0 {
        bail!(DegenerateDataset, "no minority samples");
    }
    let mut majority: Vec<SampleId> = dataset.rows_with_label(Label::Majority).map(|r| dataset.id(r)).collect();
    let target = rus_target(minority, majority.len(), p_ratio);

    let mut gen = rng.derive(tags::RUS).rng();
    for i in 0..target.min(majority.len().saturating_sub(1)) {
        let j = gen.gen_range(i..majority.len());
        majority.swap(i, j);
    }
    let removed: BTreeSet<SampleId> = majority[target..].iter().copied().collect();
    Ok(OutputBuilder::new(SampleId(0)).finish(dataset, &removed, BTreeSet::new(), dataset.name()))
}

pub(crate) fn rus_target(minority: usize, majority: usize, p_ratio: f64) -> usize {
    let want = crate::math::round(p_ratio * minority as f64) as usize;
    want.clamp(1, majority.max(1)).min(majority)
}
