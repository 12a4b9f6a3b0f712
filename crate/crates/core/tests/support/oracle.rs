//! Reference implementations written straight from the algorithm listings,
//! with quadratic neighbour scans and no shared code beyond the data model and
//! the random streams.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use smotenn_core::rng::{tags, RngStream};
use smotenn_core::{Dataset, Label};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSynthetic {
    pub id: u64,
    pub parent: u64,
    pub neighbor: u64,
    pub u: f64,
    pub features: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutput {
    pub removed: BTreeSet<u64>,
    pub synthetic: Vec<OracleSynthetic>,
    /// Ids of the final set: surviving originals in input order, then synthetics.
    pub ids: Vec<u64>,
}

fn sq(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    s
}

/// The `k` rows of `pool` nearest to `row` (itself excluded), closest first,
/// lower id first among equal distances.
pub fn nearest(d: &Dataset, pool: &[usize], row: usize, k: usize) -> Vec<usize> {
    let mut cand: Vec<(f64, u64, usize)> = pool
        .iter()
        .filter(|&&r| d.id(r) != d.id(row))
        .map(|&r| (sq(d.features(row), d.features(r)), d.id(r).0, r))
        .collect();
    cand.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    cand.truncate(k);
    cand.into_iter().map(|c| c.2).collect()
}

/// Majority rows kept by random undersampling.
pub fn rus_keep(d: &Dataset, p: f64, root: &RngStream) -> Vec<usize> {
    let n_plus = d.labels().iter().filter(|l| **l == Label::Minority).count();
    let mut minus: Vec<usize> = (0..d.len()).filter(|&r| d.label(r) == Label::Majority).collect();
    let mut want = (p * n_plus as f64).round() as usize;
    if want < 1 {
        want = 1;
    }
    if want > minus.len() {
        want = minus.len();
    }
    let mut g = root.derive(tags::RUS).rng();
    let mut i = 0;
    while i + 1 < minus.len() && i < want {
        let j = g.gen_range(i..minus.len());
        minus.swap(i, j);
        i += 1;
    }
    minus.truncate(want);
    minus
}

fn first_free(d: &Dataset) -> u64 {
    d.ids().iter().map(|i| i.0).max().unwrap() + 1
}

/// SMOTENN, step by step.
pub fn smotenn(d: &Dataset, k: usize, n: usize, p: f64, seed: u64) -> OracleOutput {
    let root = RngStream::new(seed, 0);
    // 1-2: undersample the majority, keep every minority sample.
    let kept: BTreeSet<usize> = rus_keep(d, p, &root).into_iter().collect();
    let s_star: Vec<usize> = (0..d.len()).filter(|&r| d.label(r) == Label::Minority || kept.contains(&r)).collect();
    let mut removed: BTreeSet<u64> =
        (0..d.len()).filter(|&r| d.label(r) == Label::Majority && !kept.contains(&r)).map(|r| d.id(r).0).collect();
    // 3
    let mut l_set: BTreeSet<u64> = BTreeSet::new();
    let mut synthetic = Vec::new();
    let mut next = first_free(d);
    // 4
    for &i in s_star.iter().filter(|&&r| d.label(r) == Label::Minority) {
        // 5
        let t = nearest(d, &s_star, i, k);
        let plus: Vec<usize> = t.iter().copied().filter(|&r| d.label(r) == Label::Minority).collect();
        // 6
        if plus.len() * 2 > k {
            // 7
            for &r in &t {
                if d.label(r) == Label::Majority {
                    l_set.insert(d.id(r).0);
                }
            }
            // 8
            let mut t = plus;
            let mut g = root.derive(tags::SAMPLE).derive(d.id(i).0).rng();
            // 9-14
            for _ in 0..n {
                if t.is_empty() {
                    break;
                }
                let pick = g.gen_range(0..t.len());
                let xk = t.remove(pick);
                let u: f64 = g.gen();
                let xi = d.features(i);
                let x = d.features(xk);
                let features: Vec<f64> = (0..xi.len()).map(|c| xi[c] + u * (x[c] - xi[c])).collect();
                synthetic.push(OracleSynthetic { id: next, parent: d.id(i).0, neighbor: d.id(xk).0, u, features });
                next += 1;
            }
        }
    }
    // 17
    let ids = s_star
        .iter()
        .map(|&r| d.id(r).0)
        .filter(|id| !l_set.contains(id))
        .chain(synthetic.iter().map(|s| s.id))
        .collect();
    removed.extend(l_set);
    OracleOutput { removed, synthetic, ids }
}

/// Classic SMOTE over minority-only neighbourhoods.
pub fn smote(d: &Dataset, k: usize, n: usize, seed: u64) -> OracleOutput {
    let root = RngStream::new(seed, 0);
    let plus: Vec<usize> = (0..d.len()).filter(|&r| d.label(r) == Label::Minority).collect();
    let mut synthetic = Vec::new();
    let mut next = first_free(d);
    for &i in &plus {
        let mut t = nearest(d, &plus, i, k);
        let mut g = root.derive(tags::SAMPLE).derive(d.id(i).0).rng();
        for _ in 0..n {
            if t.is_empty() {
                break;
            }
            let xk = t.remove(g.gen_range(0..t.len()));
            let u: f64 = g.gen();
            let xi = d.features(i);
            let x = d.features(xk);
            let features = (0..xi.len()).map(|c| xi[c] + u * (x[c] - xi[c])).collect();
            synthetic.push(OracleSynthetic { id: next, parent: d.id(i).0, neighbor: d.id(xk).0, u, features });
            next += 1;
        }
    }
    let ids = d.ids().iter().map(|i| i.0).chain(synthetic.iter().map(|s| s.id)).collect();
    OracleOutput { removed: BTreeSet::new(), synthetic, ids }
}

/// Majority ids one ENN pass would mark (strict majority of minority neighbours).
pub fn enn_pass(d: &Dataset, k: usize) -> BTreeSet<u64> {
    let all: Vec<usize> = (0..d.len()).collect();
    all.iter()
        .filter(|&&r| d.label(r) == Label::Majority)
        .filter(|&&r| {
            let t = nearest(d, &all, r, k);
            2 * t.iter().filter(|&&q| d.label(q) == Label::Minority).count() > k
        })
        .map(|&r| d.id(r).0)
        .collect()
}

/// Iterated ENN: repeat passes over the survivors until the ratio reaches
/// `target_ir`, nothing is marked, or at most `k` samples are left. A pass may
/// not push the majority below the minority count; the lowest ids go first.
pub fn enn(d: &Dataset, k: usize, target_ir: f64) -> BTreeSet<u64> {
    let n_plus = d.labels().iter().filter(|l| **l == Label::Minority).count();
    let mut alive: Vec<usize> = (0..d.len()).collect();
    let mut removed = BTreeSet::new();
    loop {
        let n_minus = alive.iter().filter(|&&r| d.label(r) == Label::Majority).count();
        if n_minus as f64 <= target_ir * n_plus as f64 || alive.len() <= k {
            break;
        }
        let mut marked: Vec<u64> = alive
            .iter()
            .filter(|&&r| d.label(r) == Label::Majority)
            .filter(|&&r| {
                let t = nearest(d, &alive, r, k);
                2 * t.iter().filter(|&&q| d.label(q) == Label::Minority).count() > k
            })
            .map(|&r| d.id(r).0)
            .collect();
        marked.sort();
        marked.truncate(n_minus - n_plus.min(n_minus));
        if marked.is_empty() {
            break;
        }
        alive.retain(|&r| !marked.contains(&d.id(r).0));
        removed.extend(marked);
    }
    removed
}
