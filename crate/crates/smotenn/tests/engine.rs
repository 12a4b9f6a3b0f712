//! The threaded runner against the sequential library.

mod support;

use smotenn::engine::{self, thread_pool};
use smotenn_core::eval::{cross_validate, CvConfig};
use smotenn_core::partition::{plan_partitions, run_partitioned_with};
use smotenn_core::rng::tags;
use smotenn_core::{resample, Label, Method, ResampleSpec, RngStream};
use support::gen::{random_dataset, two_gaussians};

fn spec(method: Method, partitions: usize, seed: u64) -> ResampleSpec {
    ResampleSpec { method, k: 3, n_oversample: 2, p_ratio: 1.5, seed, partitions, ..Default::default() }
}

#[test]
fn threaded_run_equals_library_run() {
    let pools = [thread_pool(Some(1)).unwrap(), thread_pool(Some(3)).unwrap()];
    for seed in 0..12 {
        let d = two_gaussians(seed, 400, 4.0, 3, 1.0);
        for method in Method::ALL {
            for partitions in 1..=4 {
                let s = spec(method, partitions, seed);
                let want = resample(&d, &s).unwrap();
                for pool in &pools {
                    let (got, blocks) = engine::run(&d, &s, pool).unwrap();
                    assert_eq!(got, want, "{method} B={partitions} seed {seed}");
                    assert_eq!(blocks.len(), partitions);
                    assert_eq!(blocks.iter().map(|b| b.rows).sum::<usize>(), d.len());
                    assert_eq!(blocks.iter().map(|b| b.synthetic).sum::<usize>(), got.synthetic_count);
                }
            }
        }
    }
}

#[test]
fn one_partition_equals_unpartitioned() {
    let pool = thread_pool(Some(2)).unwrap();
    for seed in 0..30 {
        let d = random_dataset(seed);
        for method in Method::ALL {
            let s = spec(method, 1, seed);
            let root = RngStream::new(seed, 0);
            let plan = plan_partitions(&d, 1, &root.derive(tags::PLAN)).unwrap();
            let partitioned = run_partitioned_with(&d, &s, &plan, &root);
            let plain = engine::run(&d, &s, &pool).map(|(r, _)| r);
            match (partitioned, plain) {
                (Ok(a), Ok(b)) => assert_eq!(a, b, "{method} seed {seed}"),
                (Err(_), Err(_)) => {}
                (a, b) => panic!("{method} seed {seed}: {a:?} vs {b:?}"),
            }
        }
    }
}

#[test]
fn block_reports_count_classes() {
    let d = two_gaussians(5, 1000, 9.0, 2, 2.0);
    let (_, blocks) = engine::run(&d, &spec(Method::Smotenn, 4, 5), &thread_pool(Some(2)).unwrap()).unwrap();
    assert_eq!(blocks.iter().map(|b| b.minority).sum::<usize>(), d.count(Label::Minority));
    for b in &blocks {
        assert_eq!(b.minority + b.majority, b.rows);
        assert_eq!(b.minority, 25);
    }
}

#[test]
fn parallel_folds_equal_sequential_folds() {
    let pool = thread_pool(Some(3)).unwrap();
    let d = two_gaussians(2, 300, 5.0, 2, 1.5);
    let cfg = CvConfig { folds: 5, ..Default::default() };
    let rng = RngStream::new(9, 0);
    let s = spec(Method::Smotenn, 1, 9);
    for resampler in [None, Some(&s)] {
        let a = engine::cross_validate(&d, resampler, &cfg, &rng, &pool).unwrap();
        let b = cross_validate(&d, resampler, &cfg, &rng).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn zero_threads_is_a_config_error() {
    assert_eq!(thread_pool(Some(0)).unwrap_err().exit_code(), 1);
}
