//! Rank-based comparison of several methods over many experiments.
//!
//! Input is a matrix of scores (higher is better): one row per experiment,
//! one column per method.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::eval::special::{f_sf, normal_sf};
use crate::math::sqrt;

/// Ranks within one row: 1 for the largest score, ties share the mean rank.
pub fn rank_row(row: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| row[b].total_cmp(&row[a]));
    let mut ranks = alloc::vec![0.0; row.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && row[order[end]] == row[order[start]] {
            end += 1;
        }
        let shared = (start + end + 1) as f64 / 2.0;
        for &j in &order[start..end] {
            ranks[j] = shared;
        }
        start = end;
    }
    ranks
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FriedmanResult {
    pub avg_ranks: Vec<f64>,
    pub chi2: f64,
    pub f_statistic: f64,
    /// Upper tail of F with `(k - 1, (k - 1)(N - 1))` degrees of freedom.
    pub p_value: f64,
    pub rows: usize,
    pub methods: usize,
}

/// Friedman statistic with the Iman-Davenport F correction.
pub fn friedman_iman_davenport(matrix: &[Vec<f64>]) -> Result<FriedmanResult> {
    let n = matrix.len();
    if n < 2 {
        bail!(Config, "need at least 2 rows, got {n}");
    }
    let k = matrix[0].len();
    if k < 2 {
        bail!(Config, "need at least 2 methods, got {k}");
    }
    if let Some(i) = matrix.iter().position(|r| r.len() != k) {
        bail!(Config, "row {i} has {} columns, expected {k}", matrix[i].len());
    }
    if matrix.iter().flatten().any(|v| !v.is_finite()) {
        bail!(Config, "scores must be finite");
    }

    let mut avg_ranks = alloc::vec![0.0; k];
    for row in matrix {
        for (acc, r) in avg_ranks.iter_mut().zip(rank_row(row)) {
            *acc += r;
        }
    }
    for r in &mut avg_ranks {
        *r /= n as f64;
    }

    let (nf, kf) = (n as f64, k as f64);
    let centre = (kf + 1.0) / 2.0;
    let spread: f64 = avg_ranks.iter().map(|r| (r - centre) * (r - centre)).sum();
    let chi2 = 12.0 * nf / (kf * (kf + 1.0)) * spread;
    let (f_statistic, p_value) = if chi2 == 0.0 {
        (0.0, 1.0)
    } else {
        let denom = nf * (kf - 1.0) - chi2;
        if denom <= 0.0 {
            (f64::INFINITY, 0.0)
        } else {
            let f = (nf - 1.0) * chi2 / denom;
            (f, f_sf(f, kf - 1.0, (kf - 1.0) * (nf - 1.0)))
        }
    };
    Ok(FriedmanResult { avg_ranks, chi2, f_statistic, p_value, rows: n, methods: k })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum Decision {
    Reject,
    NotReject,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HolmEntry {
    /// Column index of the method compared with the control.
    pub method: usize,
    pub z: f64,
    pub p_value: f64,
    pub threshold: f64,
    pub decision: Decision,
}

/// Index of the best (lowest) average rank; the first one on ties.
pub fn control_of(avg_ranks: &[f64]) -> usize {
    let mut best = 0;
    for (j, r) in avg_ranks.iter().enumerate() {
        if *r < avg_ranks[best] {
            best = j;
        }
    }
    best
}

/// Holm step-down comparison of every method against the best-ranked one.
///
/// `z = (R_j - R_best) / sqrt(k (k + 1) / (6 N))` with a one-sided normal
/// p-value. Entries come back sorted by p-value; the i-th smallest (from 0) is
/// tested at `alpha / (k - 1 - i)` and the first failure stops all rejections.
pub fn holm_posthoc(avg_ranks: &[f64], rows: usize, alpha: f64) -> Vec<HolmEntry> {
    let k = avg_ranks.len();
    if k < 2 {
        return Vec::new();
    }
    let control = control_of(avg_ranks);
    let se = sqrt((k * (k + 1)) as f64 / (6.0 * rows as f64));
    let mut entries: Vec<HolmEntry> = (0..k)
        .filter(|&j| j != control)
        .map(|j| {
            let z = (avg_ranks[j] - avg_ranks[control]) / se;
            HolmEntry { method: j, z, p_value: normal_sf(z), threshold: 0.0, decision: Decision::NotReject }
        })
        .collect();
    entries.sort_by(|a, b| a.p_value.total_cmp(&b.p_value).then(a.method.cmp(&b.method)));
    let mut still_rejecting = true;
    for (i, e) in entries.iter_mut().enumerate() {
        e.threshold = alpha / (k - 1 - i) as f64;
        still_rejecting &= e.p_value < e.threshold;
        if still_rejecting {
            e.decision = Decision::Reject;
        }
    }
    entries
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WinsTiesLosses {
    pub wins: usize,
    pub ties: usize,
    pub losses: usize,
}

/// Per method, the rows where it scores above / equal to / below `control`.
pub fn wins_ties_losses(matrix: &[Vec<f64>], control: usize) -> Vec<WinsTiesLosses> {
    let k = matrix.first().map_or(0, Vec::len);
    let mut out = alloc::vec![WinsTiesLosses::default(); k];
    for row in matrix {
        let c = row[control];
        for (j, v) in row.iter().enumerate() {
            if *v > c {
                out[j].wins += 1;
            } else if *v == c {
                out[j].ties += 1;
            } else {
                out[j].losses += 1;
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HolmRow {
    pub method: String,
    pub z: f64,
    pub p_value: f64,
    pub threshold: f64,
    pub decision: Decision,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RankReport {
    pub method_names: Vec<String>,
    pub avg_ranks: Vec<f64>,
    pub rows: usize,
    pub control: String,
    pub friedman_chi2: f64,
    pub iman_davenport_f: f64,
    pub p_value: f64,
    pub alpha: f64,
    /// Sorted by p-value.
    pub holm: Vec<HolmRow>,
    /// Aligned with `method_names`; the control's own entry is all ties.
    pub wins_ties_losses: Vec<WinsTiesLosses>,
}

impl RankReport {
    pub fn from_matrix(method_names: Vec<String>, matrix: &[Vec<f64>], alpha: f64) -> Result<Self> {
        let fr = friedman_iman_davenport(matrix)?;
        if method_names.len() != fr.methods {
            bail!(Config, "{} method names for {} columns", method_names.len(), fr.methods);
        }
        let control = control_of(&fr.avg_ranks);
        let holm = holm_posthoc(&fr.avg_ranks, fr.rows, alpha)
            .into_iter()
            .map(|e| HolmRow {
                method: method_names[e.method].clone(),
                z: e.z,
                p_value: e.p_value,
                threshold: e.threshold,
                decision: e.decision,
            })
            .collect();
        Ok(RankReport {
            control: method_names[control].clone(),
            wins_ties_losses: wins_ties_losses(matrix, control),
            method_names,
            avg_ranks: fr.avg_ranks,
            rows: fr.rows,
            friedman_chi2: fr.chi2,
            iman_davenport_f: fr.f_statistic,
            p_value: fr.p_value,
            alpha,
            holm,
        })
    }

    pub fn rank_of(&self, method: &str) -> Option<f64> {
        self.method_names.iter().position(|m| m == method).map(|j| self.avg_ranks[j])
    }

    pub fn holm_for(&self, method: &str) -> Option<&HolmRow> {
        self.holm.iter().find(|h| h.method == method)
    }

    pub fn wtl_for(&self, method: &str) -> Option<WinsTiesLosses> {
        self.method_names.iter().position(|m| m == method).map(|j| self.wins_ties_losses[j])
    }
}
