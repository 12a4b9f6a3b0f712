//! Hybrid spill tree.
//!
//! Each internal node splits its points by projecting them on the line
//! through two far-apart pivots and cutting at the median projection `L`.
//! A *spill* split lets both children keep the points whose projection lies
//! in the band `(L - tau, L + tau]`; it is used only when neither child then
//! exceeds `rho * |node|`, otherwise the node falls back to a disjoint
//! *metric* split at `L`. Search backtracks across metric splits with the
//! usual boundary-distance prune and, by default, never across spill splits.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{bail, Result};
use crate::knn::{KBest, NeighborIndex, NeighborSet, PointSet};
use crate::math;
use crate::model::SampleId;
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IndexConfig {
    /// Overlap half-width as a fraction of each node's projected spread.
    pub tau: f64,
    /// Balance factor in `[0, 1)`.
    pub rho: f64,
    pub leaf_size: usize,
    /// Skip backtracking at spill nodes. With `false` the search is exact.
    pub defeatist_search: bool,
}

impl Default for IndexConfig {
    fn default() -> Self {
        IndexConfig { tau: 0.1, rho: 0.7, leaf_size: 32, defeatist_search: true }
    }
}

impl IndexConfig {
    /// `tau = 0`: every split is a metric split and search is exact.
    pub fn metric(leaf_size: usize) -> Self {
        IndexConfig { tau: 0.0, leaf_size, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            bail!(Config, "tau must be a finite non-negative fraction, got {}", self.tau);
        }
        if !(0.0..1.0).contains(&self.rho) {
            bail!(Config, "balance factor rho must satisfy 0 <= rho < 1, got {}", self.rho);
        }
        if self.leaf_size == 0 {
            bail!(Config, "leaf_size must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Split {
    /// Point-set rows of the pivots `p_l`, `p_r`.
    pivots: (u32, u32),
    /// Offset of the unit projection axis in `SpillTreeIndex::axes`.
    axis: usize,
    boundary: f64,
    /// Absolute overlap half-width; zero for metric splits.
    band: f64,
    overlap: bool,
    left: u32,
    right: u32,
}

#[derive(Debug, Clone)]
enum Node {
    Leaf { start: u32, len: u32 },
    Split(Split),
}

#[derive(Debug, Clone)]
pub struct SpillTreeIndex {
    points: PointSet,
    config: IndexConfig,
    nodes: Vec<Node>,
    axes: Vec<f64>,
    leaf_rows: Vec<u32>,
}

/// Shape summary of a built tree.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IndexStats {
    pub point_count: usize,
    pub node_count: usize,
    pub split_count: usize,
    pub overlap_count: usize,
    /// `overlap_count / split_count`, 0 for a single leaf.
    pub overlap_fraction: f64,
    /// Longest root-to-leaf path in edges; a lone leaf has depth 0.
    pub max_depth: usize,
    /// `depth_histogram[d]` = number of leaves at depth `d`.
    pub depth_histogram: Vec<usize>,
    pub leaf_count: usize,
    pub leaf_min: usize,
    pub leaf_max: usize,
    pub leaf_mean: f64,
    /// Total leaf entries over point count (1.0 without spill).
    pub replication: f64,
}

impl SpillTreeIndex {
    pub fn build(points: PointSet, config: IndexConfig, rng: &RngStream) -> Result<Self> {
        config.validate()?;
        if points.is_empty() {
            bail!(Precondition, "cannot index an empty partition");
        }
        let mut index = SpillTreeIndex { points, config, nodes: Vec::new(), axes: Vec::new(), leaf_rows: Vec::new() };
        let rows: Vec<u32> = (0..index.points.len() as u32).collect();
        index.build_node(rows, *rng);
        Ok(index)
    }

    pub fn config(&self) -> &IndexConfig {
        &self.config
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    fn axis(&self, offset: usize) -> &[f64] {
        &self.axes[offset..offset + self.points.dim()]
    }

    fn project(&self, split: &Split, x: &[f64]) -> f64 {
        let origin = self.points.point(split.pivots.0 as usize);
        let axis = self.axis(split.axis);
        let mut acc = 0.0;
        for ((v, o), a) in x.iter().zip(origin).zip(axis) {
            acc += (v - o) * a;
        }
        acc
    }

    fn push_leaf(&mut self, rows: &[u32]) -> u32 {
        let start = self.leaf_rows.len() as u32;
        self.leaf_rows.extend_from_slice(rows);
        self.nodes.push(Node::Leaf { start, len: rows.len() as u32 });
        (self.nodes.len() - 1) as u32
    }

    fn farthest(&self, from: u32, rows: &[u32]) -> (u32, f64) {
        let origin = self.points.point(from as usize);
        let mut best = (from, 0.0);
        for &r in rows {
            let d2 = math::dist2(origin, self.points.point(r as usize));
            if d2 > best.1 {
                best = (r, d2);
            }
        }
        best
    }

    fn build_node(&mut self, rows: Vec<u32>, stream: RngStream) -> u32 {
        if rows.len() <= self.config.leaf_size {
            return self.push_leaf(&rows);
        }
        let start = rows[stream.rng().gen_range(0..rows.len())];
        let (p_l, _) = self.farthest(start, &rows);
        let (p_r, span2) = self.farthest(p_l, &rows);
        if span2 == 0.0 {
            // All points coincide.
            return self.push_leaf(&rows);
        }

        let norm = math::sqrt(span2);
        let axis_offset = self.axes.len();
        let (a, b) = (self.points.point(p_l as usize), self.points.point(p_r as usize));
        let axis: Vec<f64> = a.iter().zip(b).map(|(x, y)| (y - x) / norm).collect();
        self.axes.extend_from_slice(&axis);

        let mut split = Split {
            pivots: (p_l, p_r),
            axis: axis_offset,
            boundary: 0.0,
            band: 0.0,
            overlap: false,
            left: 0,
            right: 0,
        };
        let proj: Vec<f64> = rows.iter().map(|&r| self.project(&split, self.points.point(r as usize))).collect();
        let mut sorted = proj.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        let boundary = sorted[(sorted.len() - 1) / 2];
        let spread = sorted[sorted.len() - 1] - sorted[0];
        split.boundary = boundary;

        let band = self.config.tau * spread;
        if band > 0.0 {
            let left_n = proj.iter().filter(|&&p| p <= boundary + band).count();
            let right_n = proj.iter().filter(|&&p| p > boundary - band).count();
            let cap = self.config.rho * rows.len() as f64;
            if (left_n as f64) <= cap && (right_n as f64) <= cap {
                split.band = band;
                split.overlap = true;
            }
        }

        let (hi, lo) = (boundary + split.band, boundary - split.band);
        let left: Vec<u32> = rows.iter().zip(&proj).filter(|(_, &p)| p <= hi).map(|(&r, _)| r).collect();
        let right: Vec<u32> = rows.iter().zip(&proj).filter(|(_, &p)| p > lo).map(|(&r, _)| r).collect();
        if right.is_empty() || left.len() == rows.len() && right.len() == rows.len() {
            // Projections tie at the median; no progress possible.
            return self.push_leaf(&rows);
        }
        drop(proj);
        drop(rows);

        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { start: 0, len: 0 });
        split.left = self.build_node(left, stream.derive(0));
        split.right = self.build_node(right, stream.derive(1));
        self.nodes[id] = Node::Split(split);
        id as u32
    }

    fn search(&self, node: u32, q: &[f64], exclude: Option<SampleId>, best: &mut KBest) {
        match &self.nodes[node as usize] {
            Node::Leaf { start, len } => {
                for &r in &self.leaf_rows[*start as usize..(*start + *len) as usize] {
                    let id = self.points.id(r as usize);
                    if Some(id) == exclude {
                        continue;
                    }
                    let d2 = math::dist2(q, self.points.point(r as usize));
                    if d2 <= best.worst() {
                        best.offer(d2, id, r);
                    }
                }
            }
            Node::Split(s) => {
                let p = self.project(s, q);
                let go_left = p <= s.boundary;
                let (near, far) = if go_left { (s.left, s.right) } else { (s.right, s.left) };
                self.search(near, q, exclude, best);

                if s.overlap && self.config.defeatist_search {
                    // Defeatist: only fall through when the near side could
                    // not supply k candidates.
                    if !best.is_full() {
                        self.search(far, q, exclude, best);
                    }
                    return;
                }
                // Lower bound on the distance from q to any point of `far`.
                let gap = if go_left { (s.boundary - s.band) - p } else { p - (s.boundary + s.band) };
                let gap = gap.max(0.0);
                if !best.is_full() || gap <= math::sqrt(best.worst()) * (1.0 + 1e-9) + 1e-12 {
                    self.search(far, q, exclude, best);
                }
            }
        }
    }

    pub fn stats(&self) -> IndexStats {
        let mut hist: Vec<usize> = Vec::new();
        let (mut splits, mut overlaps) = (0usize, 0usize);
        let (mut leaf_min, mut leaf_max, mut leaf_total, mut leaves) = (usize::MAX, 0usize, 0usize, 0usize);
        let mut stack = vec![(0u32, 0usize)];
        while let Some((n, depth)) = stack.pop() {
            match &self.nodes[n as usize] {
                Node::Leaf { len, .. } => {
                    if hist.len() <= depth {
                        hist.resize(depth + 1, 0);
                    }
                    hist[depth] += 1;
                    let len = *len as usize;
                    leaves += 1;
                    leaf_total += len;
                    leaf_min = leaf_min.min(len);
                    leaf_max = leaf_max.max(len);
                }
                Node::Split(s) => {
                    splits += 1;
                    overlaps += usize::from(s.overlap);
                    stack.push((s.left, depth + 1));
                    stack.push((s.right, depth + 1));
                }
            }
        }
        IndexStats {
            point_count: self.points.len(),
            node_count: self.nodes.len(),
            split_count: splits,
            overlap_count: overlaps,
            overlap_fraction: if splits == 0 { 0.0 } else { overlaps as f64 / splits as f64 },
            max_depth: hist.len().saturating_sub(1),
            depth_histogram: hist,
            leaf_count: leaves,
            leaf_min,
            leaf_max,
            leaf_mean: leaf_total as f64 / leaves as f64,
            replication: leaf_total as f64 / self.points.len() as f64,
        }
    }

    /// Leaf contents as sample ids, in depth-first left-to-right order.
    pub fn leaves(&self) -> Vec<Vec<SampleId>> {
        let mut out = Vec::new();
        let mut stack = vec![0u32];
        while let Some(n) = stack.pop() {
            match &self.nodes[n as usize] {
                Node::Leaf { start, len } => out.push(
                    self.leaf_rows[*start as usize..(*start + *len) as usize]
                        .iter()
                        .map(|&r| self.points.id(r as usize))
                        .collect(),
                ),
                Node::Split(s) => {
                    stack.push(s.right);
                    stack.push(s.left);
                }
            }
        }
        out
    }

    /// Root split as `(boundary, band, overlap)` plus the ids of each child
    /// subtree; `None` when the root is a leaf.
    pub fn root_split(&self) -> Option<(f64, f64, bool, Vec<SampleId>, Vec<SampleId>)> {
        match &self.nodes[0] {
            Node::Leaf { .. } => None,
            Node::Split(s) => {
                Some((s.boundary, s.band, s.overlap, self.subtree_ids(s.left), self.subtree_ids(s.right)))
            }
        }
    }

    /// Projection of `x` on the root split axis (0 when the root is a leaf).
    pub fn root_projection(&self, x: &[f64]) -> f64 {
        match &self.nodes[0] {
            Node::Leaf { .. } => 0.0,
            Node::Split(s) => self.project(s, x),
        }
    }

    fn subtree_ids(&self, node: u32) -> Vec<SampleId> {
        let mut ids = Vec::new();
        let mut stack = vec![node];
        while let Some(n) = stack.pop() {
            match &self.nodes[n as usize] {
                Node::Leaf { start, len } => ids.extend(
                    self.leaf_rows[*start as usize..(*start + *len) as usize]
                        .iter()
                        .map(|&r| self.points.id(r as usize)),
                ),
                Node::Split(s) => {
                    stack.push(s.right);
                    stack.push(s.left);
                }
            }
        }
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Checks the balance rule at every spill node: each child holds at most
    /// `rho * |node|` distinct points.
    pub fn balance_holds(&self) -> bool {
        self.nodes.iter().all(|n| match n {
            Node::Split(s) if s.overlap => {
                let parent = self.subtree_ids_len_of_split(s);
                let cap = self.config.rho * parent as f64;
                self.subtree_ids(s.left).len() as f64 <= cap && self.subtree_ids(s.right).len() as f64 <= cap
            }
            _ => true,
        })
    }

    fn subtree_ids_len_of_split(&self, s: &Split) -> usize {
        let mut ids = self.subtree_ids(s.left);
        ids.extend(self.subtree_ids(s.right));
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }
}

impl NeighborIndex for SpillTreeIndex {
    fn knn(&self, query: &[f64], exclude: Option<SampleId>, k: usize) -> Result<NeighborSet> {
        self.points.check_query(query, exclude, k)?;
        let mut best = KBest::new(k);
        self.search(0, query, exclude, &mut best);
        Ok(best.finish(exclude))
    }

    fn points(&self) -> &PointSet {
        &self.points
    }
}
