//! Multi-threaded execution on a bounded rayon pool.
//!
//! Partitioned runs map blocks concurrently and reduce on the calling thread;
//! cross-validation evaluates folds concurrently. Every task owns its random
//! stream, so results equal the sequential ones in `smotenn_core`.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use smotenn_core::eval::cv::{evaluate_fold, stratified_folds, summarize, CvConfig, CvReport};
use smotenn_core::partition::{map_block, reduce};
use smotenn_core::rng::tags;
use smotenn_core::{plan_partitions, Dataset, Label, ResampleResult, ResampleSpec, RngStream};

use crate::error::{Error, Result};

/// Pool with `threads` workers (all logical cores when `None`).
pub fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(t);
    }
    builder.build().map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockReport {
    pub block: usize,
    pub rows: usize,
    pub minority: usize,
    pub majority: usize,
    pub synthetic: usize,
    pub removed: usize,
    pub millis: f64,
}

fn millis(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

/// Resamples `dataset` with `spec`; output is identical to
/// [`smotenn_core::resample`].
pub fn run(
    dataset: &Dataset,
    spec: &ResampleSpec,
    pool: &rayon::ThreadPool,
) -> Result<(ResampleResult, Vec<BlockReport>)> {
    spec.validate()?;
    let root = RngStream::new(spec.seed, 0);
    if spec.partitions <= 1 {
        let start = Instant::now();
        let result = smotenn_core::resample_with(dataset, spec, &root)?;
        let report = BlockReport {
            block: 0,
            rows: dataset.len(),
            minority: dataset.count(Label::Minority),
            majority: dataset.count(Label::Majority),
            synthetic: result.synthetic_count,
            removed: result.removed_ids.len(),
            millis: millis(start),
        };
        return Ok((result, vec![report]));
    }

    let plan = plan_partitions(dataset, spec.partitions, &root.derive(tags::PLAN))?;
    let mapped: Vec<_> = pool.install(|| {
        (0..plan.block_count)
            .into_par_iter()
            .map(|b| {
                let start = Instant::now();
                let result = map_block(dataset, spec, &plan, b, &root);
                (b, result, millis(start))
            })
            .collect()
    });

    let mut reports = Vec::with_capacity(mapped.len());
    let mut blocks = Vec::with_capacity(mapped.len());
    for (b, result, ms) in mapped {
        let result = result?;
        let rows = plan.block_rows(b);
        let minority = rows.iter().filter(|&&r| dataset.label(r) == Label::Minority).count();
        reports.push(BlockReport {
            block: b,
            rows: rows.len(),
            minority,
            majority: rows.len() - minority,
            synthetic: result.synthetic_count,
            removed: result.removed_ids.len(),
            millis: ms,
        });
        log::debug!("block {b}: {} rows in {ms:.1} ms", rows.len());
        blocks.push((b, result));
    }
    Ok((reduce(dataset, blocks), reports))
}

/// [`smotenn_core::eval::cross_validate`] with folds evaluated in parallel.
pub fn cross_validate(
    dataset: &Dataset,
    spec: Option<&ResampleSpec>,
    config: &CvConfig,
    rng: &RngStream,
    pool: &rayon::ThreadPool,
) -> Result<CvReport> {
    let assignment = stratified_folds(dataset, config.folds, &rng.derive(tags::FOLDS))?;
    let folds = pool.install(|| {
        (0..config.folds)
            .into_par_iter()
            .map(|f| evaluate_fold(dataset, &assignment, f, spec, config, rng))
            .collect::<smotenn_core::Result<Vec<_>>>()
    })?;
    Ok(summarize(folds))
}
