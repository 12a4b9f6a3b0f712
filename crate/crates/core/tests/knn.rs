//! Spill-tree search against brute force.

mod support;

use proptest::prelude::*;
use smotenn_core::knn::{recall_at_k, ExactIndex, NeighborIndex, PointSet, SpillTreeIndex};
use smotenn_core::{brute_force_knn, Dataset, IndexConfig, Label, RngStream, Sample, SampleId};
use support::gen::two_gaussians;

fn points(raw: &[Vec<f64>]) -> Dataset {
    let samples = raw
        .iter()
        .enumerate()
        .map(|(i, x)| Sample::new(i as u64, x.clone(), if i % 3 == 0 { Label::Minority } else { Label::Majority }))
        .collect();
    Dataset::new("pts", samples).unwrap()
}

fn cloud() -> impl Strategy<Value = (Vec<Vec<f64>>, usize)> {
    (1usize..6).prop_flat_map(|dim| {
        let coord = prop_oneof![(-50i32..50).prop_map(|v| v as f64 * 0.5), -10.0f64..10.0];
        (prop::collection::vec(prop::collection::vec(coord, dim), 6..120), 1usize..12)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn metric_tree_search_is_exact((raw, leaf) in cloud(), seed in any::<u64>(), k in 1usize..6) {
        let d = points(&raw);
        let k = k.min(d.len() - 1);
        let cfg = IndexConfig { tau: 0.0, defeatist_search: false, ..IndexConfig::metric(leaf) };
        let tree = SpillTreeIndex::build(PointSet::from_dataset(&d), cfg, &RngStream::new(seed, 0)).unwrap();
        let exact = ExactIndex::new(PointSet::from_dataset(&d));
        for row in 0..d.len() {
            let q = d.sample(row);
            let a = tree.knn(&q.features, Some(q.id), k).unwrap();
            let b = exact.knn(&q.features, Some(q.id), k).unwrap();
            prop_assert_eq!(&a, &b);
            let c = brute_force_knn(&d, &q, k).unwrap();
            prop_assert_eq!(a.ids().collect::<Vec<_>>(), c.ids().collect::<Vec<_>>());
        }
    }

    #[test]
    fn backtracking_spill_tree_is_exact((raw, leaf) in cloud(), seed in any::<u64>(), tau in 0.0f64..0.3) {
        let d = points(&raw);
        let cfg = IndexConfig { tau, rho: 0.7, leaf_size: leaf, defeatist_search: false };
        let tree = SpillTreeIndex::build(PointSet::from_dataset(&d), cfg, &RngStream::new(seed, 0)).unwrap();
        prop_assert_eq!(recall_at_k(&tree, &d, 3.min(d.len() - 1)).unwrap(), 1.0);
    }

    #[test]
    fn every_point_reaches_a_leaf_and_balance_holds((raw, leaf) in cloud(), seed in any::<u64>(), tau in 0.0f64..0.5) {
        let d = points(&raw);
        let cfg = IndexConfig { tau, rho: 0.7, leaf_size: leaf, defeatist_search: true };
        let tree = SpillTreeIndex::build(PointSet::from_dataset(&d), cfg, &RngStream::new(seed, 0)).unwrap();
        let mut seen: Vec<SampleId> = tree.leaves().into_iter().flatten().collect();
        seen.sort();
        seen.dedup();
        prop_assert_eq!(seen, d.ids().to_vec());
        prop_assert!(tree.balance_holds());
        let s = tree.stats();
        prop_assert!(s.replication >= 1.0);
    }
}

#[test]
fn default_config_recall_on_two_gaussians() {
    let mut total = 0.0;
    for seed in 0..10 {
        let d = two_gaussians(seed, 2000, 1.0, 4, 2.0);
        let tree = SpillTreeIndex::build(PointSet::from_dataset(&d), IndexConfig::default(), &RngStream::new(seed, 1))
            .unwrap();
        total += recall_at_k(&tree, &d, 5).unwrap();
    }
    assert!(total / 10.0 >= 0.90, "mean recall {}", total / 10.0);
}

#[test]
fn depth_is_logarithmic_on_uniform_points() {
    use rand::{Rng, SeedableRng};
    let mut g = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    let raw: Vec<Vec<f64>> = (0..1000).map(|_| (0..3).map(|_| g.gen::<f64>()).collect()).collect();
    let d = points(&raw);
    for seed in 0..5 {
        let tree = SpillTreeIndex::build(PointSet::from_dataset(&d), IndexConfig::metric(16), &RngStream::new(seed, 0))
            .unwrap();
        let depth = tree.stats().max_depth as f64;
        assert!(depth <= 2.0 * (1000.0f64 / 16.0).log2() + 2.0, "depth {depth}");
    }
}

#[test]
fn leaf_size_at_least_m_gives_single_leaf() {
    let raw: Vec<Vec<f64>> = (0..50).map(|i| vec![i as f64, (i * i) as f64]).collect();
    let d = points(&raw);
    let tree =
        SpillTreeIndex::build(PointSet::from_dataset(&d), IndexConfig::metric(50), &RngStream::new(0, 0)).unwrap();
    let s = tree.stats();
    assert_eq!((s.max_depth, s.leaf_count), (0, 1));
}
