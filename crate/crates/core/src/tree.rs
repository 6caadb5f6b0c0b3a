//! The cluster tree restricted to a sample, stored as a filtration.
//!
//! A [`ClusterTree`] is a sequence of [`MergeEvent`]s sorted by radius.
//! Vertices are born at their k-NN radius and components merge at the
//! smallest radius where an edge joins them. The subpartition at level `r`
//! is everything born at or below `r`, grouped by all merges at or below
//! `r`.
//!
//! Component ids are the smallest point index in the component. A merge
//! `(a, b)` always has `a < b` and produces a component with id `a`.
//! Within one radius, births come first in ascending point order, followed
//! by merges in ascending `(a, b)` order. Builders in this crate emit merges
//! in a canonical shape: when several components join into one at a single
//! radius, the smallest id absorbs the others one at a time. The tree
//! therefore depends only on the sequence of subpartitions, never on the
//! order edges were scanned.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::Rule;
use crate::unionfind::UnionFind;

/// A disjoint family of index sets. Each set is sorted ascending and the
/// sets are ordered by their smallest element.
pub type Subpartition = Vec<Vec<usize>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventKind {
    Birth { point: usize },
    Merge { a: usize, b: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MergeEvent {
    pub radius: f64,
    pub kind: EventKind,
}

impl MergeEvent {
    pub fn birth(radius: f64, point: usize) -> Self {
        MergeEvent {
            radius,
            kind: EventKind::Birth { point },
        }
    }

    pub fn merge(radius: f64, a: usize, b: usize) -> Self {
        MergeEvent {
            radius,
            kind: EventKind::Merge { a, b },
        }
    }

    pub fn is_birth(&self) -> bool {
        matches!(self.kind, EventKind::Birth { .. })
    }
}

/// The settings a tree was built with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeMeta {
    pub d: usize,
    pub k: usize,
    pub alpha: f64,
    pub rule: Rule,
}

impl Default for TreeMeta {
    fn default() -> Self {
        TreeMeta {
            d: 1,
            k: 1,
            alpha: 1.0,
            rule: Rule::Rsl,
        }
    }
}

/// Where a tree came from: scale constants, pruning settings and seed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(rename = "C_delta", default, skip_serializing_if = "Option::is_none")]
    pub c_delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_tilde: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pruning: Option<PruningNote>,
}

/// Recorded by the pruning pass so a pruned tree documents how its lookup
/// levels were clamped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PruningNote {
    /// Levels at or above this radius had a non-positive lookup density and
    /// were reconnected up to the root. `0` means every level was clamped.
    pub clamped_from_r: Option<f64>,
    /// Cutoff above which all components were reconnected, when the
    /// low-level option was on.
    pub low_level_cutoff_r: Option<f64>,
}

/// A cluster of the tree: the component with id `id` as it exists from
/// `radius` until its next merge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterRef {
    pub id: usize,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterTree {
    n: usize,
    meta: TreeMeta,
    events: Vec<MergeEvent>,
    pub provenance: Provenance,
}

impl ClusterTree {
    /// Validates an event sequence and wraps it as a tree.
    pub fn new(n: usize, meta: TreeMeta, events: Vec<MergeEvent>) -> Result<Self> {
        validate_events(n, &events)?;
        Ok(ClusterTree {
            n,
            meta,
            events,
            provenance: Provenance::default(),
        })
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn meta(&self) -> &TreeMeta {
        &self.meta
    }

    pub fn events(&self) -> &[MergeEvent] {
        &self.events
    }

    /// Distinct event radii in ascending order; the subpartition only
    /// changes at these values.
    pub fn event_radii(&self) -> Vec<f64> {
        let mut radii: Vec<f64> = self.events.iter().map(|e| e.radius).collect();
        radii.dedup();
        radii
    }

    /// Birth radius of every point, `None` for points never born.
    pub fn birth_radii(&self) -> Vec<Option<f64>> {
        let mut out = vec![None; self.n];
        for e in &self.events {
            if let EventKind::Birth { point } = e.kind {
                out[point] = Some(e.radius);
            }
        }
        out
    }

    pub fn merge_count(&self) -> usize {
        self.events.iter().filter(|e| !e.is_birth()).count()
    }

    pub fn birth_count(&self) -> usize {
        self.events.len() - self.merge_count()
    }

    /// The subpartition at level `r`.
    pub fn components_at(&self, r: f64) -> Result<Subpartition> {
        check_level(r)?;
        let mut replay = Replay::new(self);
        replay.advance_to(r);
        Ok(replay.subpartition())
    }

    /// Component id of every point at level `r`, `None` for unborn points.
    pub fn labels_at(&self, r: f64) -> Result<Vec<Option<usize>>> {
        check_level(r)?;
        let mut replay = Replay::new(self);
        replay.advance_to(r);
        Ok(replay.labels())
    }

    /// The smallest cluster containing every index of `s`: the first level
    /// at which all of `s` is born and lies in one component. `None` when
    /// that never happens (a forest whose roots never join).
    pub fn smallest_cluster_containing(&self, s: &[usize]) -> Result<Option<ClusterRef>> {
        if s.is_empty() {
            return Err(Error::InvalidQuery("empty index set".into()));
        }
        for &i in s {
            if i >= self.n {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    n: self.n,
                });
            }
        }
        let mut replay = Replay::new(self);
        while let Some(r) = replay.next_level() {
            if replay.all_together(s) {
                return Ok(Some(ClusterRef {
                    id: replay.uf.id(s[0]),
                    radius: r,
                }));
            }
        }
        Ok(None)
    }

    /// Whether the smallest clusters containing `s1` and `s2` are disjoint.
    ///
    /// Clusters of a tree are either nested or disjoint, so it suffices to
    /// check whether one representative of each set shares a component at
    /// the higher of the two cluster levels.
    pub fn disjoint_at(&self, s1: &[usize], s2: &[usize]) -> Result<bool> {
        if s1.is_empty() || s2.is_empty() {
            return Err(Error::InvalidQuery("empty index set".into()));
        }
        let mut mask = vec![false; self.n];
        for &i in s1.iter().filter(|&&i| i < self.n) {
            mask[i] = true;
        }
        if s2.iter().any(|&i| i < self.n && mask[i]) {
            return Err(Error::InvalidQuery("index sets overlap".into()));
        }
        let c1 = self
            .smallest_cluster_containing(s1)?
            .ok_or_else(|| Error::InvalidQuery("first set never lies in one cluster".into()))?;
        let c2 = self
            .smallest_cluster_containing(s2)?
            .ok_or_else(|| Error::InvalidQuery("second set never lies in one cluster".into()))?;
        let level = c1.radius.max(c2.radius);
        let mut replay = Replay::new(self);
        replay.advance_to(level);
        Ok(replay.uf.find(s1[0]) != replay.uf.find(s2[0]))
    }
}

fn check_level(r: f64) -> Result<()> {
    if r.is_nan() || r < 0.0 {
        return Err(Error::param(
            "r",
            format!("level must be nonnegative, got {r}"),
        ));
    }
    Ok(())
}

fn validate_events(n: usize, events: &[MergeEvent]) -> Result<()> {
    let mut born = vec![false; n];
    let mut live = vec![false; n];
    let mut uf = UnionFind::new(n);
    let mut prev: Option<&MergeEvent> = None;
    for (pos, e) in events.iter().enumerate() {
        if !(e.radius >= 0.0) || !e.radius.is_finite() {
            return Err(Error::MalformedTree(format!(
                "event {pos} has invalid radius {}",
                e.radius
            )));
        }
        if let Some(p) = prev {
            if e.radius < p.radius {
                return Err(Error::MalformedTree(format!(
                    "event {pos} is out of radius order"
                )));
            }
            if e.radius == p.radius && e.is_birth() && !p.is_birth() {
                return Err(Error::MalformedTree(format!(
                    "event {pos}: births must precede merges at equal radius"
                )));
            }
        }
        match e.kind {
            EventKind::Birth { point } => {
                if point >= n {
                    return Err(Error::IndexOutOfRange { index: point, n });
                }
                if born[point] {
                    return Err(Error::MalformedTree(format!("point {point} is born twice")));
                }
                born[point] = true;
                live[point] = true;
            }
            EventKind::Merge { a, b } => {
                if a >= n || b >= n {
                    return Err(Error::IndexOutOfRange { index: a.max(b), n });
                }
                if a >= b {
                    return Err(Error::MalformedTree(format!(
                        "event {pos}: merge ({a}, {b}) must list the smaller id first"
                    )));
                }
                if !live[a] || !live[b] {
                    return Err(Error::MalformedTree(format!(
                        "event {pos}: merge ({a}, {b}) references a dead or unborn component"
                    )));
                }
                uf.union(a, b);
                live[b] = false;
            }
        }
        prev = Some(e);
    }
    Ok(())
}

/// Incremental replay of a filtration.
pub(crate) struct Replay<'a> {
    events: &'a [MergeEvent],
    pos: usize,
    pub(crate) uf: UnionFind,
    pub(crate) born: Vec<bool>,
}

impl<'a> Replay<'a> {
    pub(crate) fn new(tree: &'a ClusterTree) -> Self {
        Self::from_events(tree.n, &tree.events)
    }

    pub(crate) fn from_events(n: usize, events: &'a [MergeEvent]) -> Self {
        Replay {
            events,
            pos: 0,
            uf: UnionFind::new(n),
            born: vec![false; n],
        }
    }

    fn apply(&mut self, e: &MergeEvent) {
        match e.kind {
            EventKind::Birth { point } => self.born[point] = true,
            EventKind::Merge { a, b } => {
                self.uf.union(a, b);
            }
        }
    }

    /// Applies every event with radius `<= r`.
    pub(crate) fn advance_to(&mut self, r: f64) {
        while let Some(e) = self.events.get(self.pos) {
            if e.radius > r {
                break;
            }
            self.apply(e);
            self.pos += 1;
        }
    }

    /// Applies all events at the next distinct radius and returns it.
    pub(crate) fn next_level(&mut self) -> Option<f64> {
        let r = self.events.get(self.pos)?.radius;
        self.advance_to(r);
        Some(r)
    }

    fn all_together(&mut self, s: &[usize]) -> bool {
        if !s.iter().all(|&i| self.born[i]) {
            return false;
        }
        let root = self.uf.find(s[0]);
        s[1..].iter().all(|&i| self.uf.find(i) == root)
    }

    pub(crate) fn labels(&mut self) -> Vec<Option<usize>> {
        (0..self.born.len())
            .map(|i| self.born[i].then(|| self.uf.id(i)))
            .collect()
    }

    pub(crate) fn subpartition(&mut self) -> Subpartition {
        group_labels(&self.labels())
    }
}

/// Groups points by label. Labels are component ids (smallest member), so
/// iterating points in order yields sets sorted by smallest element.
pub(crate) fn group_labels(labels: &[Option<usize>]) -> Subpartition {
    let mut slot = vec![usize::MAX; labels.len()];
    let mut out: Subpartition = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        if let Some(id) = *l {
            if slot[id] == usize::MAX {
                slot[id] = out.len();
                out.push(Vec::new());
            }
            out[slot[id]].push(i);
        }
    }
    out
}

/// Canonicalizes a subpartition given in arbitrary order.
pub fn normalize(mut parts: Subpartition) -> Subpartition {
    for p in parts.iter_mut() {
        p.sort_unstable();
    }
    parts.retain(|p| !p.is_empty());
    parts.sort_unstable_by_key(|p| p[0]);
    parts
}

/// Builds canonical event sequences level by level.
pub(crate) struct CanonicalBuilder {
    uf: UnionFind,
    born: Vec<bool>,
    events: Vec<MergeEvent>,
    last: f64,
}

impl CanonicalBuilder {
    pub(crate) fn new(n: usize) -> Self {
        CanonicalBuilder {
            uf: UnionFind::new(n),
            born: vec![false; n],
            events: Vec::new(),
            last: f64::NEG_INFINITY,
        }
    }

    /// Records one level: `births` become singletons, then every link joins
    /// the components of its endpoints. Links must join born vertices.
    pub(crate) fn level<I>(&mut self, r: f64, births: &[usize], links: I)
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        debug_assert!(r >= self.last);
        self.last = r;
        let mut births = births.to_vec();
        births.sort_unstable();
        for &i in &births {
            debug_assert!(!self.born[i]);
            self.born[i] = true;
            self.events.push(MergeEvent::birth(r, i));
        }
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for (u, v) in links {
            debug_assert!(self.born[u] && self.born[v]);
            let (cu, cv) = (self.uf.id(u), self.uf.id(v));
            if cu != cv {
                pairs.push((cu, cv));
            }
        }
        if pairs.is_empty() {
            return;
        }
        for &(cu, cv) in &pairs {
            self.uf.union(cu, cv);
        }
        let mut involved: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        involved.sort_unstable();
        involved.dedup();
        // (new id, old id): sorting gives each group contiguous and ascending.
        let mut grouped: Vec<(usize, usize)> =
            involved.iter().map(|&c| (self.uf.id(c), c)).collect();
        grouped.sort_unstable();
        for &(head, c) in &grouped {
            if c != head {
                self.events.push(MergeEvent::merge(r, head, c));
            }
        }
    }

    pub(crate) fn finish(self) -> Vec<MergeEvent> {
        self.events
    }
}
