//! k-nearest-neighbour search.
//!
//! Two engines share one contract ([`NeighborIndex`]): an exact brute-force
//! scan and the hybrid spill tree in [`spill`]. Neighbours are ordered by
//! `(squared distance, id)`, so equal distances resolve to the smaller id and
//! both engines agree bit for bit whenever the tree search is exact.

mod spill;

use alloc::vec::Vec;

use crate::error::{bail, Error, Result};
use crate::math;
use crate::model::{Dataset, Sample, SampleId};
use crate::rng::RngStream;
use crate::spec::Engine;

pub use spill::{IndexConfig, IndexStats, SpillTreeIndex};

/// One neighbour: its id, its row in the searched point set and its
/// Euclidean distance to the query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub id: SampleId,
    pub row: usize,
    pub distance: f64,
}

/// Result of a k-NN query, ascending by distance (ties by id).
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborSet {
    pub query_id: Option<SampleId>,
    pub neighbors: Vec<Neighbor>,
}

impl NeighborSet {
    pub fn ids(&self) -> impl Iterator<Item = SampleId> + '_ {
        self.neighbors.iter().map(|n| n.id)
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }
}

/// Owned, row-major copy of the points an index searches.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
    ids: Vec<SampleId>,
}

impl PointSet {
    pub fn from_dataset(dataset: &Dataset) -> Self {
        PointSet { dim: dataset.n_features(), coords: dataset.raw_features().to_vec(), ids: dataset.ids().to_vec() }
    }

    /// Copies the given dataset rows; row `i` of the set is `rows[i]`.
    pub fn from_rows(dataset: &Dataset, rows: &[usize]) -> Self {
        let mut coords = Vec::with_capacity(rows.len() * dataset.n_features());
        let mut ids = Vec::with_capacity(rows.len());
        for &r in rows {
            coords.extend_from_slice(dataset.features(r));
            ids.push(dataset.id(r));
        }
        PointSet { dim: dataset.n_features(), coords, ids }
    }

    pub fn from_samples(samples: &[Sample]) -> Result<Self> {
        let dim = samples.first().map_or(0, |s| s.features.len());
        let mut coords = Vec::with_capacity(samples.len() * dim);
        for s in samples {
            if s.features.len() != dim {
                bail!(InvalidDataset, "sample {} has {} features, expected {dim}", s.id, s.features.len());
            }
            coords.extend_from_slice(&s.features);
        }
        Ok(PointSet { dim, coords, ids: samples.iter().map(|s| s.id).collect() })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, row: usize) -> &[f64] {
        &self.coords[row * self.dim..(row + 1) * self.dim]
    }

    pub fn id(&self, row: usize) -> SampleId {
        self.ids[row]
    }

    pub(crate) fn check_query(&self, query: &[f64], exclude: Option<SampleId>, k: usize) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptyIndex);
        }
        if query.len() != self.dim {
            bail!(InvalidDataset, "query has {} features, index has {}", query.len(), self.dim);
        }
        // An excluded id is assumed to be present; checking costs a scan.
        let available = self.len() - usize::from(exclude.is_some());
        if k == 0 || k > available {
            bail!(Precondition, "k = {k} neighbours requested but only {available} candidates exist (need k < m)");
        }
        Ok(())
    }
}

/// Bounded candidate list ordered by `(dist2, id)`.
#[derive(Debug)]
pub(crate) struct KBest {
    k: usize,
    items: Vec<(f64, SampleId, u32)>,
}

impl KBest {
    pub(crate) fn new(k: usize) -> Self {
        KBest { k, items: Vec::with_capacity(k + 1) }
    }

    pub(crate) fn is_full(&self) -> bool {
        self.items.len() >= self.k
    }

    /// Squared distance of the current k-th candidate (infinite until full).
    pub(crate) fn worst(&self) -> f64 {
        if self.is_full() {
            self.items[self.k - 1].0
        } else {
            f64::INFINITY
        }
    }

    pub(crate) fn offer(&mut self, d2: f64, id: SampleId, row: u32) {
        let key = (d2, id);
        if self.is_full() {
            let last = self.items[self.k - 1];
            if !lt(key, (last.0, last.1)) {
                return;
            }
        }
        if self.items.iter().any(|c| c.2 == row) {
            return;
        }
        let pos = self.items.partition_point(|c| lt((c.0, c.1), key));
        self.items.insert(pos, (d2, id, row));
        self.items.truncate(self.k);
    }

    pub(crate) fn finish(self, query_id: Option<SampleId>) -> NeighborSet {
        let neighbors = self
            .items
            .into_iter()
            .map(|(d2, id, row)| Neighbor { id, row: row as usize, distance: math::sqrt(d2) })
            .collect();
        NeighborSet { query_id, neighbors }
    }
}

#[inline]
fn lt(a: (f64, SampleId), b: (f64, SampleId)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Common query interface of the exact and approximate engines.
pub trait NeighborIndex {
    /// The `k` nearest points to `query`, never returning `exclude`.
    fn knn(&self, query: &[f64], exclude: Option<SampleId>, k: usize) -> Result<NeighborSet>;

    fn points(&self) -> &PointSet;
}

/// Brute-force engine: scans every point.
#[derive(Debug, Clone)]
pub struct ExactIndex {
    points: PointSet,
}

impl ExactIndex {
    pub fn new(points: PointSet) -> Self {
        ExactIndex { points }
    }
}

impl NeighborIndex for ExactIndex {
    fn knn(&self, query: &[f64], exclude: Option<SampleId>, k: usize) -> Result<NeighborSet> {
        self.points.check_query(query, exclude, k)?;
        let mut best = KBest::new(k);
        for row in 0..self.points.len() {
            let id = self.points.id(row);
            if Some(id) == exclude {
                continue;
            }
            let d2 = math::dist2(query, self.points.point(row));
            if d2 <= best.worst() {
                best.offer(d2, id, row as u32);
            }
        }
        Ok(best.finish(exclude))
    }

    fn points(&self) -> &PointSet {
        &self.points
    }
}

/// Either engine, chosen at run time from an [`Engine`].
#[derive(Debug, Clone)]
pub enum AnyIndex {
    Exact(ExactIndex),
    SpillTree(SpillTreeIndex),
}

impl AnyIndex {
    pub fn build(engine: &Engine, points: PointSet, rng: &RngStream) -> Result<Self> {
        Ok(match engine {
            Engine::Exact => AnyIndex::Exact(ExactIndex::new(points)),
            Engine::SpillTree(cfg) => AnyIndex::SpillTree(SpillTreeIndex::build(points, *cfg, rng)?),
        })
    }
}

impl NeighborIndex for AnyIndex {
    fn knn(&self, query: &[f64], exclude: Option<SampleId>, k: usize) -> Result<NeighborSet> {
        match self {
            AnyIndex::Exact(i) => i.knn(query, exclude, k),
            AnyIndex::SpillTree(i) => i.knn(query, exclude, k),
        }
    }

    fn points(&self) -> &PointSet {
        match self {
            AnyIndex::Exact(i) => i.points(),
            AnyIndex::SpillTree(i) => i.points(),
        }
    }
}

/// Exact k-NN of `query` within `dataset`, excluding the query's own id.
pub fn brute_force_knn(dataset: &Dataset, query: &Sample, k: usize) -> Result<NeighborSet> {
    if query.features.len() != dataset.n_features() {
        bail!(InvalidDataset, "query has {} features, dataset has {}", query.features.len(), dataset.n_features());
    }
    let available = dataset.len() - usize::from(dataset.ids().contains(&query.id));
    if k == 0 || k > available {
        bail!(Precondition, "k = {k} must be below the sample count ({})", dataset.len());
    }
    let mut best = KBest::new(k);
    for row in 0..dataset.len() {
        let id = dataset.id(row);
        if id == query.id {
            continue;
        }
        let d2 = math::dist2(&query.features, dataset.features(row));
        if d2 <= best.worst() {
            best.offer(d2, id, row as u32);
        }
    }
    Ok(best.finish(Some(query.id)))
}

/// Mean fraction of the exact k nearest neighbours that `index` returns,
/// over every sample of `dataset` queried with self-exclusion.
pub fn recall_at_k<I: NeighborIndex + ?Sized>(index: &I, dataset: &Dataset, k: usize) -> Result<f64> {
    let exact = ExactIndex::new(PointSet::from_dataset(dataset));
    let mut total = 0.0;
    for row in 0..dataset.len() {
        let id = dataset.id(row);
        let q = dataset.features(row);
        let truth = exact.knn(q, Some(id), k)?;
        let got = index.knn(q, Some(id), k)?;
        let hits = got.ids().filter(|g| truth.ids().any(|t| t == *g)).count();
        total += hits as f64 / k as f64;
    }
    Ok(total / dataset.len() as f64)
}
