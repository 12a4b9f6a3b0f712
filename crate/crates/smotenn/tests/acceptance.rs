//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.
//!
//! `cargo test -p smotenn --test acceptance` runs everything; a criterion
//! number as argument (`-- 4`) runs just that one.

mod support;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use smotenn::engine::{self, thread_pool};
use smotenn::fixtures::ScoreMatrix;
use smotenn_core::eval::{cross_validate, friedman_iman_davenport, holm_posthoc, CvConfig, Decision, RankReport};
use smotenn_core::knn::recall_at_k;
use smotenn_core::{
    resample, Dataset, Engine, IndexConfig, Label, Method, PointSet, ResampleResult, ResampleSpec, RngStream, SampleId,
    SpillTreeIndex,
};
use support::fixtures_dir;
use support::gen::{random_dataset, two_gaussians};
use support::oracle::{self, OracleOutput, OracleSynthetic};

type Outcome = Result<String, String>;

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn near(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol
}

fn fixture(group: &str) -> RankReport {
    ScoreMatrix::read_dir(&fixtures_dir().join(group)).unwrap().rank_report(0.05).unwrap()
}

fn rejected(r: &RankReport, method: &str) -> bool {
    r.holm_for(method).is_some_and(|h| h.decision == Decision::Reject)
}

fn published_ranks(group: &str, rank: f64, smote_wtl: (usize, usize, usize)) -> Outcome {
    let start = Instant::now();
    let r = fixture(group);
    let elapsed = start.elapsed();
    let smotenn = r.rank_of("SMOTENN").unwrap();
    check!(r.control == "SMOTENN", "control is {}", r.control);
    check!(near(smotenn, rank, 0.3), "SMOTENN rank {smotenn:.3}, want {rank} +- 0.3");
    let rejections = r.holm.iter().filter(|h| h.decision == Decision::Reject).count();
    check!(rejections == r.method_names.len() - 1, "{rejections} of {} Holm comparisons rejected", r.holm.len());
    let w = r.wtl_for("SMOTE").unwrap();
    check!((w.wins, w.ties, w.losses) == smote_wtl, "SMOTE W/T/L {}/{}/{}", w.wins, w.ties, w.losses);
    check!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!(
        "{} rows, SMOTENN rank {smotenn:.3}, {rejections}/{} rejected, SMOTE {}/{}/{}, {:.1} ms",
        r.rows,
        r.holm.len(),
        w.wins,
        w.ties,
        w.losses,
        elapsed.as_secs_f64() * 1e3
    ))
}

fn criterion_1() -> Outcome {
    published_ranks("small", 1.77, (8, 1, 57))
}

fn criterion_2() -> Outcome {
    published_ranks("medium", 1.54, (2, 1, 21))
}

fn criterion_3() -> Outcome {
    let r = fixture("large");
    let [smote, smotenn, rus] = ["SMOTE", "SMOTENN", "RUS"].map(|m| r.rank_of(m).unwrap());
    check!(smote < smotenn && smotenn < rus, "order SMOTE {smote} SMOTENN {smotenn} RUS {rus}");
    for (got, want) in [(smote, 2.10), (smotenn, 2.75), (rus, 3.00)] {
        check!(near(got, want, 0.3), "rank {got:.3}, want {want} +- 0.3");
    }
    for m in ["ENN", "ENN+SMOTE"] {
        check!(rejected(&r, m), "{m} not rejected");
    }
    for m in ["SMOTENN", "RUS", "RUS+SMOTE"] {
        check!(!rejected(&r, m), "{m} rejected");
    }
    Ok(format!("ranks SMOTE {smote:.2} < SMOTENN {smotenn:.2} < RUS {rus:.2}; ENN, ENN+SMOTE rejected"))
}

fn as_oracle(r: &ResampleResult) -> OracleOutput {
    let synthetic = r
        .provenance
        .iter()
        .map(|(id, p)| {
            let row = r.output.ids().iter().position(|x| x == id).unwrap();
            OracleSynthetic {
                id: id.0,
                parent: p.parent.0,
                neighbor: p.neighbor.0,
                u: p.u,
                features: r.output.features(row).to_vec(),
            }
        })
        .collect();
    OracleOutput {
        removed: r.removed_ids.iter().map(|i| i.0).collect(),
        synthetic,
        ids: r.output.ids().iter().map(|i| i.0).collect(),
    }
}

fn params(seed: u64) -> (usize, usize, f64) {
    let k = 3 + (seed as usize % 5) * 2;
    let n = 1 + seed as usize % (k - 1);
    let p = [0.5, 1.0, 2.0, 4.0, 100.0][seed as usize % 5];
    (k, n, p)
}

fn spec(method: Method, k: usize, n: usize, p: f64, seed: u64, engine: Engine) -> ResampleSpec {
    ResampleSpec { method, k, n_oversample: n, p_ratio: p, seed, engine, ..Default::default() }
}

fn criterion_4() -> Outcome {
    let mut mismatches = Vec::new();
    let mut synthetic = 0;
    let mut removed = 0;
    for seed in 0..50 {
        let d = random_dataset(seed);
        let (k, n, p) = params(seed);
        let got = resample(&d, &spec(Method::Smotenn, k, n, p, seed, Engine::Exact))
            .map_err(|e| format!("seed {seed}: {e}"))?;
        let want = oracle::smotenn(&d, k, n, p, seed);
        synthetic += want.synthetic.len();
        removed += want.removed.len();
        if as_oracle(&got) != want {
            mismatches.push(seed);
        }
    }
    check!(mismatches.is_empty(), "mismatching datasets: {mismatches:?}");
    Ok(format!("50 datasets, 0 mismatches ({synthetic} synthetic, {removed} removed)"))
}

fn criterion_5() -> Outcome {
    let mut compared = 0;
    for seed in 0..50 {
        let d = random_dataset(seed);
        let (k, n, p) = params(seed);
        let leaf = 1 + seed as usize % 8;
        let tree = Engine::SpillTree(IndexConfig { tau: 0.0, defeatist_search: false, ..IndexConfig::metric(leaf) });
        for method in [Method::Smote, Method::Enn, Method::Smotenn] {
            let a = resample(&d, &spec(method, k, n, p, seed, Engine::Exact));
            let b = resample(&d, &spec(method, k, n, p, seed, tree));
            match (a, b) {
                (Ok(a), Ok(b)) => {
                    check!(a == b, "{method} differs on dataset {seed}");
                    compared += 1;
                }
                (Err(a), Err(b)) => check!(a == b, "{method} dataset {seed}: {a} vs {b}"),
                (a, b) => return Err(format!("{method} dataset {seed}: {:?} vs {:?}", a.err(), b.err())),
            }
        }
    }
    Ok(format!("{compared} runs bit-identical across SMOTE, ENN, SMOTENN"))
}

fn criterion_6() -> Outcome {
    let mut lines = Vec::new();
    for dim in [2, 4, 8, 16] {
        let mut total = 0.0;
        for seed in 0..10 {
            let d = two_gaussians(seed, 2000, 1.0, dim, 2.0);
            let tree =
                SpillTreeIndex::build(PointSet::from_dataset(&d), IndexConfig::default(), &RngStream::new(seed, 1))
                    .map_err(|e| e.to_string())?;
            total += recall_at_k(&tree, &d, 5).map_err(|e| e.to_string())?;
        }
        let mean = total / 10.0;
        check!(mean >= 0.90, "dim {dim}: mean recall@5 {mean:.4}");
        lines.push(format!("dim {dim}: {mean:.4}"));
    }
    Ok(format!("mean recall@5 over 10 seeds, {}", lines.join(", ")))
}

fn row_of(d: &Dataset, id: SampleId) -> usize {
    d.ids().iter().position(|x| *x == id).unwrap()
}

fn conserved(input: &Dataset, r: &ResampleResult) -> bool {
    r.output.len() + r.removed_ids.len() == input.len() + r.synthetic_count && r.provenance.len() == r.synthetic_count
}

fn segments(input: &Dataset, r: &ResampleResult) -> Result<(), TestCaseError> {
    for (id, p) in &r.provenance {
        let x = r.output.features(row_of(&r.output, *id));
        let (a, b) = (row_of(input, p.parent), row_of(input, p.neighbor));
        prop_assert!(input.label(a) == Label::Minority && input.label(b) == Label::Minority);
        prop_assert!((0.0..1.0).contains(&p.u));
        for ((xi, pa), pb) in x.iter().zip(input.features(a)).zip(input.features(b)) {
            prop_assert!(pa.min(*pb) <= *xi && *xi <= pa.max(*pb));
        }
    }
    Ok(())
}

fn kn() -> impl Strategy<Value = (usize, usize)> {
    (1usize..10).prop_flat_map(|k| (Just(k), 0usize..k))
}

fn plain(method: Method, k: usize, n: usize, p: f64, seed: u64) -> ResampleSpec {
    spec(method, k, n, p, seed, Engine::Exact)
}

const CASES: u32 = 1000;

fn prop<S: Strategy>(
    passed: &mut Vec<&'static str>,
    name: &'static str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))?;
    passed.push(name);
    Ok(())
}

fn criterion_7() -> Outcome {
    let mut names = Vec::new();
    prop(&mut names, "convex hull", (0u64..100_000, kn(), 0.3f64..5.0), |(seed, (k, n), p)| {
        let d = random_dataset(seed);
        for method in [Method::Smote, Method::Smotenn, Method::RusSmote, Method::EnnSmote] {
            if let Ok(r) = resample(&d, &plain(method, k, n, p, seed)) {
                segments(&d, &r)?;
            }
        }
        Ok(())
    })?;
    prop(&mut names, "SMOTE count", (0u64..100_000, kn()), |(seed, (k, n))| {
        let d = random_dataset(seed);
        let minority = d.count(Label::Minority);
        if minority <= k {
            prop_assert!(resample(&d, &plain(Method::Smote, k, n, 1.0, seed)).is_err());
            return Ok(());
        }
        let r = resample(&d, &plain(Method::Smote, k, n, 1.0, seed)).unwrap();
        prop_assert_eq!(r.output.count(Label::Minority), minority * (n + 1));
        prop_assert_eq!(r.output.count(Label::Majority), d.count(Label::Majority));
        Ok(())
    })?;
    prop(&mut names, "RUS ratio", (0u64..100_000, 0.05f64..20.0), |(seed, p)| {
        let d = random_dataset(seed);
        let (minority, majority) = (d.count(Label::Minority), d.count(Label::Majority));
        let r = resample(&d, &plain(Method::Rus, 5, 1, p, seed)).unwrap();
        let want = ((p * minority as f64).round() as usize).clamp(1, majority);
        prop_assert_eq!(r.output.count(Label::Majority), want);
        prop_assert_eq!(r.output.count(Label::Minority), minority);
        Ok(())
    })?;
    prop(&mut names, "SMOTENN removal soundness", (0u64..100_000, kn(), 0.3f64..5.0), |(seed, (k, n), p)| {
        let d = random_dataset(seed);
        let Ok(r) = resample(&d, &plain(Method::Smotenn, k, n, p, seed)) else {
            return Ok(());
        };
        let kept: BTreeSet<usize> = oracle::rus_keep(&d, p, &RngStream::new(seed, 0)).into_iter().collect();
        let pool: Vec<usize> = (0..d.len()).filter(|&i| d.label(i) == Label::Minority || kept.contains(&i)).collect();
        let mut gated = BTreeSet::new();
        for &i in pool.iter().filter(|&&i| d.label(i) == Label::Minority) {
            let t = oracle::nearest(&d, &pool, i, k);
            if 2 * t.iter().filter(|&&q| d.label(q) == Label::Minority).count() > k {
                gated.extend(t.iter().map(|&q| d.id(q)));
            }
        }
        for id in &r.removed_ids {
            let row = row_of(&d, *id);
            prop_assert_eq!(d.label(row), Label::Majority);
            prop_assert!(!kept.contains(&row) || gated.contains(id));
        }
        Ok(())
    })?;
    prop(&mut names, "partition conservation", (0u64..100_000, 1usize..5, 0usize..6), |(seed, blocks, m)| {
        let d = random_dataset(seed);
        let s = ResampleSpec { partitions: blocks, ..plain(Method::ALL[m], 3, 1, 2.0, seed) };
        if let Ok(r) = resample(&d, &s) {
            prop_assert!(conserved(&d, &r));
            let ids: BTreeSet<SampleId> = r.output.ids().iter().copied().collect();
            prop_assert_eq!(ids.len(), r.output.len());
            prop_assert!(r.removed_ids.iter().all(|id| !ids.contains(id)));
        }
        Ok(())
    })?;
    prop(&mut names, "seed determinism", (0u64..100_000, 0usize..6, 1usize..3), |(seed, m, blocks)| {
        let d = random_dataset(seed);
        let s = ResampleSpec { partitions: blocks, ..plain(Method::ALL[m], 3, 2, 1.5, seed) };
        prop_assert_eq!(resample(&d, &s), resample(&d, &s));
        Ok(())
    })?;
    Ok(format!("{} properties x {CASES} cases: {}", names.len(), names.join(", ")))
}

fn mean_g_mean(method: Option<Method>) -> Result<f64, String> {
    let cfg = CvConfig { folds: 5, classifier_k: 5, engine: Engine::Exact };
    let mut total = 0.0;
    for seed in 0..5 {
        let d = two_gaussians(100 + seed, 2000, 10.0, 2, 1.5);
        let s = method.map(|m| ResampleSpec { method: m, seed, ..Default::default() });
        total += cross_validate(&d, s.as_ref(), &cfg, &RngStream::new(seed, 0)).map_err(|e| e.to_string())?.mean_g_mean;
    }
    Ok(total / 5.0)
}

fn criterion_8() -> Outcome {
    let none = mean_g_mean(None)?;
    let rus = mean_g_mean(Some(Method::Rus))?;
    let smotenn = mean_g_mean(Some(Method::Smotenn))?;
    check!(smotenn >= none, "SMOTENN {smotenn:.4} below no resampling {none:.4}");
    check!(smotenn >= rus - 0.02, "SMOTENN {smotenn:.4} below RUS {rus:.4} - 0.02");

    let big = two_gaussians(7, 500_000, 10.0, 10, 1.5);
    let s = ResampleSpec {
        method: Method::Smotenn,
        partitions: 16,
        engine: Engine::SpillTree(IndexConfig::default()),
        seed: 7,
        ..Default::default()
    };
    let start = Instant::now();
    let (r, blocks) = engine::run(&big, &s, &thread_pool(None).unwrap()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check!(conserved(&big, &r), "500k run lost samples");
    check!(elapsed < Duration::from_secs(300), "500k rows took {elapsed:?}");
    Ok(format!(
        "g-mean none {none:.4}, RUS {rus:.4}, SMOTENN {smotenn:.4}; 500k x 10 in {} blocks: {:.1} s, {} synthetic",
        blocks.len(),
        elapsed.as_secs_f64(),
        r.synthetic_count
    ))
}

fn criterion_9() -> Outcome {
    const TOL: f64 = 1e-9;
    let small = [[0.9, 0.8, 0.7], [0.85, 0.86, 0.6], [0.7, 0.7, 0.5], [0.95, 0.6, 0.65]];
    let ten = [
        [0.91, 0.85, 0.80],
        [0.88, 0.90, 0.70],
        [0.75, 0.75, 0.75],
        [0.93, 0.81, 0.82],
        [0.60, 0.55, 0.58],
        [0.99, 0.97, 0.90],
        [0.82, 0.83, 0.84],
        [0.70, 0.65, 0.60],
        [0.77, 0.70, 0.77],
        [0.66, 0.62, 0.64],
    ];
    struct Case {
        ranks: [f64; 3],
        chi2: f64,
        f: f64,
        p: f64,
        holm: [(usize, f64, f64); 2],
    }
    let cases = [
        (
            small.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
            Case {
                ranks: [1.375, 1.875, 2.75],
                chi2: 3.875,
                f: 2.8181818181818181818,
                p: 0.137088775634765625,
                holm: [
                    (2, 1.9445436482630056921, 0.025914963608954838718),
                    (1, 0.7071067811865475244, 0.23975006109347673116),
                ],
            },
        ),
        (
            ten.iter().map(|r| r.to_vec()).collect(),
            Case {
                ranks: [1.45, 2.3, 2.25],
                chi2: 4.55,
                f: 2.650485436893204,
                p: 0.097968485173458719781,
                holm: [
                    (1, 1.900657780874820944, 0.028673425950683216235),
                    (2, 1.7888543819998318564, 0.036819135060151318821),
                ],
            },
        ),
    ];
    let mut worst: f64 = 0.0;
    for (matrix, want) in &cases {
        let fr = friedman_iman_davenport(matrix).map_err(|e| e.to_string())?;
        let holm = holm_posthoc(&fr.avg_ranks, fr.rows, 0.05);
        let mut pairs: Vec<(f64, f64)> = fr.avg_ranks.iter().copied().zip(want.ranks).collect();
        pairs.extend([(fr.chi2, want.chi2), (fr.f_statistic, want.f), (fr.p_value, want.p)]);
        for (h, (method, z, p)) in holm.iter().zip(want.holm) {
            check!(
                h.method == method,
                "N={}: Holm order {:?}",
                fr.rows,
                holm.iter().map(|h| h.method).collect::<Vec<_>>()
            );
            pairs.extend([(h.z, z), (h.p_value, p)]);
        }
        for (got, want) in pairs {
            worst = worst.max((got - want).abs());
            check!(near(got, want, TOL), "N={}: {got} vs {want}", fr.rows);
        }
    }
    Ok(format!("k=3 with N=4 and N=10, max abs error {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("small-dataset fixture ranks", criterion_1),
        ("medium-dataset fixture ranks", criterion_2),
        ("large-dataset fixture ranks", criterion_3),
        ("reference-implementation equivalence", criterion_4),
        ("exact spill-tree equivalence", criterion_5),
        ("spill-tree recall", criterion_6),
        ("resampling invariants", criterion_7),
        ("end-to-end quality and scale", criterion_8),
        ("rank statistics against frozen values", criterion_9),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let number = i + 1;
        if !only.is_empty() && !only.contains(&number) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {number}. {name}: {detail} [{secs:.2} s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {number}. {name}: {why} [{secs:.2} s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
