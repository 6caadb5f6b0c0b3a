//! Oracles and experiments.
//!
//! The oracles recompute what the sweep computes along an unrelated code
//! path: [`brute_force_components`] materializes the graph at one level and
//! traverses it, [`single_linkage_oracle`] derives the classical
//! single-linkage filtration from a minimum spanning tree of raw distances.
//! Both must agree with the estimators exactly.
//!
//! The experiments sample from synthetic densities and check the finite
//! sample guarantees of the estimators and of pruning. Each is a pure
//! function of its arguments: trial `t` uses [`trial_seed`]`(seed, t)` and
//! trials are merged by index, so a report replays bit for bit.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{build_tree, EdgeRule, Rule};
use crate::geometry::{euclidean, knn_radii, PointSet};
use crate::pruning::{prune, PruneOptions, PrunedTree};
use crate::scales::ScaleParams;
use crate::synthetic::{
    trial_seed, two_bump, DensitySpec, Interval, PiecewiseConstant1D, SeparationCertificate,
};
use crate::tree::{normalize, ClusterTree, EventKind, MergeEvent, Subpartition, TreeMeta};

/// Components of the graph at level `r`, built explicitly.
///
/// Shorthand for [`ExplicitGraphs::components_at`] on a fresh instance.
pub fn brute_force_components(
    ps: &PointSet,
    k: usize,
    rule: &EdgeRule,
    r: f64,
) -> Result<Subpartition> {
    ExplicitGraphs::new(ps, k, rule)?.components_at(r)
}

/// One level of the graph family, materialized.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelGraph {
    /// Active vertices, ascending.
    pub vertices: Vec<usize>,
    /// Edges `(i, j)` with `i < j`, ascending.
    pub edges: Vec<(usize, usize)>,
}

/// The graphs of one sample, built level by level without the sweep.
///
/// Radii `r_k` are read off fully sorted distance rows; every pair of
/// active vertices is tested with the rule's literal predicate and
/// components are found by breadth-first search.
pub struct ExplicitGraphs {
    n: usize,
    dist: Vec<f64>,
    rk: Vec<f64>,
    rule: EdgeRule,
}

impl ExplicitGraphs {
    pub fn new(ps: &PointSet, k: usize, rule: &EdgeRule) -> Result<Self> {
        let n = ps.len();
        if k < 1 || k > n {
            return Err(Error::param(
                "k",
                format!("must lie in [1, n = {n}], got {k}"),
            ));
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                dist[i * n + j] = euclidean(ps.point(i), ps.point(j));
            }
        }
        let rk = (0..n)
            .map(|i| {
                let mut row = dist[i * n..(i + 1) * n].to_vec();
                row.sort_by(f64::total_cmp);
                row[k - 1]
            })
            .collect();
        Ok(ExplicitGraphs {
            n,
            dist,
            rk,
            rule: *rule,
        })
    }

    /// `r_k` of every point.
    pub fn radii(&self) -> &[f64] {
        &self.rk
    }

    pub fn graph_at(&self, r: f64) -> Result<LevelGraph> {
        if r.is_nan() || r < 0.0 {
            return Err(Error::param(
                "r",
                format!("level must be nonnegative, got {r}"),
            ));
        }
        let vertices: Vec<usize> = (0..self.n).filter(|&i| self.rk[i] <= r).collect();
        let mut edges = Vec::new();
        for (a, &i) in vertices.iter().enumerate() {
            for &j in &vertices[a + 1..] {
                if self
                    .rule
                    .edge_present(self.dist[i * self.n + j], self.rk[i], self.rk[j], r)
                {
                    edges.push((i, j));
                }
            }
        }
        Ok(LevelGraph { vertices, edges })
    }

    pub fn components_at(&self, r: f64) -> Result<Subpartition> {
        let g = self.graph_at(r)?;
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for &(i, j) in &g.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut seen = vec![false; self.n];
        let mut parts = Vec::new();
        for &s in &g.vertices {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = std::collections::VecDeque::from([s]);
            let mut part = Vec::new();
            while let Some(u) = queue.pop_front() {
                part.push(u);
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            parts.push(part);
        }
        Ok(normalize(parts))
    }
}

/// The classical single-linkage filtration: every point enters at its
/// nearest-neighbor distance and components join along the edges of a
/// Euclidean minimum spanning tree.
///
/// The result is in the same canonical event form as the estimators' and
/// equals `build_tree(ps, 2, &EdgeRule::rsl(1.0))` event for event.
pub fn single_linkage_oracle(ps: &PointSet) -> Result<ClusterTree> {
    let n = ps.len();
    if n < 2 {
        return Err(Error::param("n", "single linkage needs at least 2 points"));
    }
    // Prim on raw distances.
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut link = vec![0usize; n];
    let mut mst = Vec::with_capacity(n - 1);
    best[0] = 0.0;
    for _ in 0..n {
        let u = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| best[a].total_cmp(&best[b]))
            .expect("a vertex remains");
        in_tree[u] = true;
        if u != 0 {
            mst.push((best[u], link[u], u));
        }
        for v in 0..n {
            let w = euclidean(ps.point(u), ps.point(v));
            if !in_tree[v] && w < best[v] {
                best[v] = w;
                link[v] = u;
            }
        }
    }
    // The lightest MST edge at a vertex is its nearest-neighbor distance.
    let mut birth = vec![f64::INFINITY; n];
    for &(w, a, b) in &mst {
        birth[a] = birth[a].min(w);
        birth[b] = birth[b].min(w);
    }
    let mut levels: Vec<f64> = birth
        .iter()
        .copied()
        .chain(mst.iter().map(|e| e.0))
        .collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let mut snapshots = Vec::with_capacity(levels.len());
    for &r in &levels {
        let mut label: Vec<usize> = (0..n).collect();
        // Tiny union-find local to the oracle.
        fn root(label: &mut [usize], mut x: usize) -> usize {
            while label[x] != x {
                label[x] = label[label[x]];
                x = label[x];
            }
            x
        }
        for &(w, a, b) in &mst {
            if w <= r {
                let (ra, rb) = (root(&mut label, a), root(&mut label, b));
                label[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in (0..n).filter(|&i| birth[i] <= r) {
            let g = root(&mut label, i);
            groups.entry(g).or_default().push(i);
        }
        snapshots.push((r, normalize(groups.into_values().collect())));
    }
    let meta = TreeMeta {
        d: ps.dim(),
        k: 2,
        alpha: 1.0,
        rule: Rule::Rsl,
    };
    ClusterTree::new(n, meta, events_from_snapshots(n, &snapshots))
}

/// Canonical events for a nested sequence of subpartitions: at each level
/// the new points are born in ascending order, then every new component
/// made of several earlier pieces absorbs them in ascending id order,
/// components taken by ascending smallest element.
pub fn events_from_snapshots(n: usize, snapshots: &[(f64, Subpartition)]) -> Vec<MergeEvent> {
    let mut prev_id: Vec<Option<usize>> = vec![None; n];
    let mut events = Vec::new();
    for (r, parts) in snapshots {
        let mut born: Vec<usize> = parts
            .iter()
            .flatten()
            .copied()
            .filter(|&i| prev_id[i].is_none())
            .collect();
        born.sort_unstable();
        events.extend(born.iter().map(|&i| MergeEvent::birth(*r, i)));
        for &i in &born {
            prev_id[i] = Some(i);
        }
        let mut next_id = prev_id.clone();
        for part in parts {
            let mut pieces: Vec<usize> = part.iter().map(|&i| prev_id[i].expect("born")).collect();
            pieces.sort_unstable();
            pieces.dedup();
            let head = pieces[0];
            events.extend(pieces[1..].iter().map(|&p| MergeEvent::merge(*r, head, p)));
            for &i in part {
                next_id[i] = Some(head);
            }
        }
        prev_id = next_id;
    }
    events
}

/// Outcome of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialDiagnostics {
    pub index: usize,
    pub seed: u64,
    pub skipped: bool,
    /// Named pass/fail checks, one per variant and property.
    pub outcomes: BTreeMap<String, bool>,
    /// Named measurements.
    pub values: BTreeMap<String, f64>,
}

/// One point of a success curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub successes: usize,
    pub skipped: usize,
}

impl CurvePoint {
    pub fn fraction(&self) -> f64 {
        fraction(self.successes, self.trials - self.skipped)
    }
}

/// The result of a seeded experiment. Every trial replays from its entry in
/// `seeds`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub trials: usize,
    /// Trials in which every variant succeeded.
    pub successes: usize,
    /// Trials with nothing to check, e.g. no sample fell in a cluster.
    pub skipped: usize,
    pub seed: u64,
    pub seeds: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<ScaleParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<DensitySpec>,
    pub settings: BTreeMap<String, f64>,
    /// Successes per variant.
    pub variants: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curve: Vec<CurvePoint>,
    pub diagnostics: Vec<TrialDiagnostics>,
}

impl ExperimentReport {
    fn new(experiment: &str, seed: u64) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            trials: 0,
            successes: 0,
            skipped: 0,
            seed,
            seeds: Vec::new(),
            params: None,
            density: None,
            settings: BTreeMap::new(),
            variants: BTreeMap::new(),
            curve: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    /// Trials that were not skipped.
    pub fn evaluated(&self) -> usize {
        self.trials - self.skipped
    }

    /// Success fraction over evaluated trials; zero when none was.
    pub fn fraction(&self) -> f64 {
        fraction(self.successes, self.evaluated())
    }

    /// Success fraction of one variant over evaluated trials.
    pub fn variant_fraction(&self, variant: &str) -> Option<f64> {
        self.variants
            .get(variant)
            .map(|&s| fraction(s, self.evaluated()))
    }

    /// Folds trial outcomes in index order. A trial succeeds when all of
    /// its outcomes hold; `variants` counts each outcome separately.
    fn absorb(&mut self, trials: Vec<TrialDiagnostics>) {
        for t in trials {
            self.trials += 1;
            self.seeds.push(t.seed);
            if t.skipped {
                self.skipped += 1;
            } else {
                for (name, &ok) in &t.outcomes {
                    *self.variants.entry(name.clone()).or_insert(0) += ok as usize;
                }
                if t.outcomes.values().all(|&ok| ok) {
                    self.successes += 1;
                }
            }
            self.diagnostics.push(t);
        }
    }
}

fn fraction(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn run_trials<F>(trials: usize, seed: u64, f: F) -> Result<Vec<TrialDiagnostics>>
where
    F: Fn(usize, u64) -> Result<TrialDiagnostics> + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|t| f(t, trial_seed(seed, t as u64)))
        .collect()
}

fn skipped(index: usize, seed: u64) -> TrialDiagnostics {
    TrialDiagnostics {
        index,
        seed,
        skipped: true,
        outcomes: BTreeMap::new(),
        values: BTreeMap::new(),
    }
}

/// Indices of the points lying in `iv`.
fn members(ps: &PointSet, iv: Interval) -> Vec<usize> {
    (0..ps.len())
        .filter(|&i| iv.contains(ps.point(i)[0]))
        .collect()
}

/// Whether the points of `a` and of `b` share no component under `labels`.
fn separated(labels: &[Option<usize>], a: &[usize], b: &[usize]) -> bool {
    let mut mark = std::collections::HashSet::new();
    for &i in a {
        if let Some(l) = labels[i] {
            mark.insert(l);
        }
    }
    b.iter()
        .all(|&j| labels[j].map_or(true, |l| !mark.contains(&l)))
}

/// Whether every point of `a` is born and all share one component.
fn connected(labels: &[Option<usize>], a: &[usize]) -> bool {
    match a.first().map(|&i| labels[i]) {
        None => true,
        Some(None) => false,
        Some(first) => a.iter().all(|&i| labels[i] == first),
    }
}

/// The certificate at `lambda`, with `Ok(None)` when the level set is
/// empty and an error when it has a single component.
fn certificate_at(
    density: &PiecewiseConstant1D,
    lambda: f64,
) -> Result<Option<SeparationCertificate>> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::param(
            "lambda",
            format!("must be positive, got {lambda}"),
        ));
    }
    if lambda > density.max_density() {
        return Ok(None);
    }
    density
        .separation_certificate(lambda)
        .map(Some)
        .ok_or_else(|| {
            Error::Hypothesis(format!(
                "the level set at {lambda} has fewer than two components"
            ))
        })
}

/// Separation and connectedness at `r(lambda)`.
///
/// The clusters are the first two components `I`, `I'` of `{f >= level}`
/// shrunk by `sigma = sigma_sup / 2` of their certificate, so that their
/// `sigma`-thickenings are `I`, `I'` and the radius is evaluated at
/// `lambda = inf f` over `I` and `I'`. Each trial samples `n` points, builds
/// one tree per rule (with `p.k` and `p.alpha`) and checks, at that radius,
/// that no component holds samples of both clusters (`<rule>.separated`)
/// and that each cluster's samples are born and share one component
/// (`<rule>.connected`). A level above the density's maximum has no
/// clusters and every trial is skipped.
pub fn check_separation_connectedness(
    density: &PiecewiseConstant1D,
    n: usize,
    p: &ScaleParams,
    level: f64,
    rules: &[Rule],
    trials: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    let p = p.with_n_k(n, p.k)?;
    if p.d != 1 {
        return Err(Error::param("d", "one-dimensional densities need d = 1"));
    }
    let cert = certificate_at(density, level)?;
    let mut report = ExperimentReport::new("separation_connectedness", seed);
    report.params = Some(p);
    report.density = Some(DensitySpec::PiecewiseConstant(density.clone()));
    report.settings.insert("level".into(), level);
    let Some(cert) = cert else {
        report.absorb(
            (0..trials)
                .map(|t| skipped(t, trial_seed(seed, t as u64)))
                .collect(),
        );
        return Ok(report);
    };
    let sigma = cert.sigma_sup / 2.0;
    let (a, a2) = cert.clusters(sigma)?;
    let radius = p.r_of_lambda(cert.cluster_level)?;
    report.settings.insert("sigma".into(), sigma);
    report.settings.insert("lambda".into(), cert.cluster_level);
    report.settings.insert("r_lambda".into(), radius);
    let rules: Vec<EdgeRule> = rules
        .iter()
        .map(|&r| EdgeRule::new(r, p.alpha))
        .collect::<Result<_>>()?;

    let outcomes = run_trials(trials, seed, |index, s| {
        let ps = density.sample(n, s)?;
        let (in_a, in_a2) = (members(&ps, a), members(&ps, a2));
        if in_a.is_empty() || in_a2.is_empty() {
            return Ok(skipped(index, s));
        }
        let mut diag = skipped(index, s);
        diag.skipped = false;
        diag.values.insert("n_a".into(), in_a.len() as f64);
        diag.values.insert("n_a_prime".into(), in_a2.len() as f64);
        for rule in &rules {
            let tree = build_tree(&ps, p.k, rule)?;
            let labels = tree.labels_at(radius)?;
            let name = rule.rule.as_str();
            diag.outcomes.insert(
                format!("{name}.separated"),
                separated(&labels, &in_a, &in_a2),
            );
            diag.outcomes.insert(
                format!("{name}.connected"),
                connected(&labels, &in_a) && connected(&labels, &in_a2),
            );
        }
        Ok(diag)
    })?;
    report.absorb(outcomes);
    Ok(report)
}

/// Whether the mutual k-NN graph of a sorted 1D sample has an edge between
/// `(-inf, boundary]` and `(boundary, inf)`. `radii[i]` belongs to `xs[i]`.
///
/// Only pairs within `alpha * r_k` of the left endpoint can be edges, so
/// each left point scans right neighbors until that window closes.
pub fn mutual_knn_crosses(xs: &[f64], radii: &[f64], alpha: f64, boundary: f64) -> Result<bool> {
    let rule = EdgeRule::mutual_knn(alpha)?;
    let split = xs.partition_point(|&x| x <= boundary);
    for i in (0..split).rev() {
        let reach = alpha * radii[i];
        if boundary - xs[i] > reach {
            continue;
        }
        for j in split..xs.len() {
            let d = (xs[j] - xs[i]).abs();
            if d > reach {
                break;
            }
            if rule.edge_present(d, radii[i], radii[j], f64::INFINITY) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Checks the hypotheses of the mutual k-NN disconnection bound and lists
/// every violated one.
fn disconnection_hypotheses(
    lambda: f64,
    lambda_max: f64,
    k: usize,
    alpha: f64,
    n: usize,
) -> Result<()> {
    let mut failed = Vec::new();
    if !(lambda > 0.0) {
        failed.push(format!("lambda = {lambda} must be positive"));
    }
    if !(lambda_max > 32.0 * lambda) {
        failed.push(format!(
            "Lambda = {lambda_max} must exceed 32 lambda = {}",
            32.0 * lambda
        ));
    }
    if !(k as f64 <= lambda_max / (64.0 * lambda)) || k < 1 {
        failed.push(format!(
            "k = {k} must lie in [1, Lambda / (64 lambda)] = [1, {}]",
            lambda_max / (64.0 * lambda)
        ));
    }
    if !(1.0..=2.0).contains(&alpha) {
        failed.push(format!("alpha = {alpha} must lie in [1, 2]"));
    }
    if k + 1 > n {
        failed.push(format!("n = {n} must exceed k = {k}"));
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::Hypothesis(failed.join("; ")))
    }
}

/// Disconnection of the mutual k-NN graph on a two-bump density.
///
/// Samples `n` points from `two_bump(lambda, Lambda)` (dense region `A`,
/// sparse bridge `B`, dense region `C`, each of width
/// `1 / (lambda + 2 Lambda)`) and counts the trials in which the mutual
/// k-NN graph over all points has no edge between `A` and `B ∪ C`.
///
/// `k` counts neighbors other than the point itself, so the graph uses the
/// radius to the `(k + 1)`-th closest sample, the point included.
pub fn knn_disconnection_experiment(
    lambda: f64,
    lambda_max: f64,
    k: usize,
    alpha: f64,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    disconnection_hypotheses(lambda, lambda_max, k, alpha, n)?;
    let density = two_bump(lambda, lambda_max)?;
    let boundary = density.boundaries()[1];
    let mut report = ExperimentReport::new("knn_disconnection", seed);
    report.density = Some(DensitySpec::TwoBump { lambda, lambda_max });
    for (key, v) in [
        ("lambda", lambda),
        ("Lambda", lambda_max),
        ("k", k as f64),
        ("alpha", alpha),
        ("n", n as f64),
    ] {
        report.settings.insert(key.into(), v);
    }
    let outcomes = run_trials(trials, seed, |index, s| {
        let ps = density.sample(n, s)?;
        let mut xs: Vec<f64> = ps.iter().map(|p| p[0]).collect();
        xs.sort_by(f64::total_cmp);
        let sorted = PointSet::from_1d(&xs)?;
        let radii = knn_radii(&sorted, k + 1)?;
        let crosses = mutual_knn_crosses(&xs, &radii.radii, alpha, boundary)?;
        let mut diag = skipped(index, s);
        diag.skipped = false;
        diag.outcomes.insert("disconnected".into(), !crosses);
        diag.values
            .insert("n_a".into(), xs.partition_point(|&x| x <= boundary) as f64);
        Ok(diag)
    })?;
    report.absorb(outcomes);
    Ok(report)
}

/// Two disjoint components of one level of a tree that lie in a single
/// connected component of the level set at their own density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalseCluster {
    pub r: f64,
    /// Component ids (smallest member) and sizes.
    pub first: (usize, usize),
    pub second: (usize, usize),
    /// `min f` over the points of both components.
    pub lambda: f64,
    /// The true component holding both.
    pub component: Interval,
}

/// Lists false clusters of a tree over a 1D sample of `density`.
///
/// For every level `r` of the tree and every pair of disjoint components
/// `(A_n, A_n')` at `r` with `lambda = min f` over their points at least
/// `lambda_floor`, the pair is flagged when both sets lie in one connected
/// component of `{f >= lambda}`. A pair is examined at each level where one
/// of the two components is new or has grown, so every flagged pair is a
/// distinct pair of clusters. The guarantees for pruned trees hold above a
/// density floor; `lambda_floor = 0` audits everything.
pub fn false_cluster_audit(
    tree: &ClusterTree,
    density: &PiecewiseConstant1D,
    ps: &PointSet,
    lambda_floor: f64,
) -> Result<Vec<FalseCluster>> {
    if ps.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: ps.dim(),
        });
    }
    if ps.len() != tree.n() {
        return Err(Error::param(
            "ps",
            format!("{} points for a tree over {}", ps.len(), tree.n()),
        ));
    }
    let support = density.support();
    let xs: Vec<f64> = ps.iter().map(|p| p[0]).collect();
    for (i, &x) in xs.iter().enumerate() {
        if !support.contains(x) {
            return Err(Error::OutsideSupport {
                index: i,
                coordinate: x,
            });
        }
    }
    let f: Vec<f64> = xs.iter().map(|&x| density.density_at(x)).collect();

    #[derive(Clone, Copy)]
    struct Stats {
        lo: f64,
        hi: f64,
        lambda: f64,
        size: usize,
    }
    let mut live: BTreeMap<usize, Stats> = BTreeMap::new();
    let mut out = Vec::new();
    let events = tree.events();
    let mut pos = 0;
    while pos < events.len() {
        let r = events[pos].radius;
        let mut changed = Vec::new();
        while pos < events.len() && events[pos].radius == r {
            match events[pos].kind {
                EventKind::Birth { point } => {
                    live.insert(
                        point,
                        Stats {
                            lo: xs[point],
                            hi: xs[point],
                            lambda: f[point],
                            size: 1,
                        },
                    );
                    changed.push(point);
                }
                EventKind::Merge { a, b } => {
                    let sb = live.remove(&b).expect("merge of live components");
                    let sa = live.get_mut(&a).expect("merge of live components");
                    sa.lo = sa.lo.min(sb.lo);
                    sa.hi = sa.hi.max(sb.hi);
                    sa.lambda = sa.lambda.min(sb.lambda);
                    sa.size += sb.size;
                    changed.push(a);
                }
            }
            pos += 1;
        }
        changed.sort_unstable();
        changed.dedup();
        changed.retain(|c| live.contains_key(c));
        for &c in &changed {
            let sc = live[&c];
            if sc.lambda < lambda_floor {
                continue;
            }
            for (&o, so) in &live {
                // Pairs of two changed components are visited once.
                if o == c
                    || (o < c && changed.binary_search(&o).is_ok())
                    || so.lambda < lambda_floor
                {
                    continue;
                }
                let lambda = sc.lambda.min(so.lambda);
                let span = Interval {
                    lo: sc.lo.min(so.lo),
                    hi: sc.hi.max(so.hi),
                };
                if density.inf_on(span) >= lambda {
                    let component = density
                        .true_level_components(lambda)
                        .into_iter()
                        .find(|iv| iv.lo <= span.lo && span.hi <= iv.hi)
                        .unwrap_or(span);
                    let (x, y) = if c < o {
                        ((c, sc.size), (o, so.size))
                    } else {
                        ((o, so.size), (c, sc.size))
                    };
                    out.push(FalseCluster {
                        r,
                        first: x,
                        second: y,
                        lambda,
                        component,
                    });
                }
            }
        }
    }
    Ok(out)
}

impl AsRef<ClusterTree> for PrunedTree {
    fn as_ref(&self) -> &ClusterTree {
        self.tree()
    }
}

/// Recovery and removal guarantees of pruning.
///
/// Clusters and radius are set up as in [`check_separation_connectedness`].
/// Each trial builds one tree per rule, prunes it with `p.eps_tilde` and
/// checks:
///
/// - `<rule>.separated`, `<rule>.connected`: the pruned tree at `r(lambda)`
///   keeps the two clusters apart and each one connected;
/// - `<rule>.clean`: [`false_cluster_audit`] of the pruned tree is empty
///   above the level floor `lambda_o` for the buffer `sigma` and `eps`.
///
/// Whether the unpruned tree has false clusters above the same floor is
/// recorded as the value `<rule>.unpruned_false_clusters`.
#[allow(clippy::too_many_arguments)]
pub fn pruning_experiment(
    density: &PiecewiseConstant1D,
    n: usize,
    p: &ScaleParams,
    level: f64,
    eps: f64,
    options: PruneOptions,
    rules: &[Rule],
    trials: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    let p = p.with_n_k(n, p.k)?;
    if p.d != 1 {
        return Err(Error::param("d", "one-dimensional densities need d = 1"));
    }
    let cert = certificate_at(density, level)?
        .ok_or_else(|| Error::Hypothesis(format!("the level set at {level} is empty")))?;
    let sigma = cert.sigma_sup / 2.0;
    let (a, a2) = cert.clusters(sigma)?;
    let radius = p.r_of_lambda(cert.cluster_level)?;
    let floor = p.pruning_level_floor(sigma, eps)?;
    let mut report = ExperimentReport::new("pruning", seed);
    report.params = Some(p);
    report.density = Some(DensitySpec::PiecewiseConstant(density.clone()));
    for (key, v) in [
        ("level", level),
        ("sigma", sigma),
        ("eps", eps),
        ("lambda", cert.cluster_level),
        ("r_lambda", radius),
        ("lambda_floor", floor),
        ("separator_sup", cert.separator_sup),
        ("prune_low_levels", options.prune_low_levels as u8 as f64),
    ] {
        report.settings.insert(key.into(), v);
    }
    let rules: Vec<EdgeRule> = rules
        .iter()
        .map(|&r| EdgeRule::new(r, p.alpha))
        .collect::<Result<_>>()?;

    let outcomes = run_trials(trials, seed, |index, s| {
        let ps = density.sample(n, s)?;
        let (in_a, in_a2) = (members(&ps, a), members(&ps, a2));
        if in_a.is_empty() || in_a2.is_empty() {
            return Ok(skipped(index, s));
        }
        let mut diag = skipped(index, s);
        diag.skipped = false;
        for rule in &rules {
            let base = build_tree(&ps, p.k, rule)?;
            let pruned = prune(&base, &p, options)?;
            let labels = pruned.tree().labels_at(radius)?;
            let name = rule.rule.as_str();
            diag.outcomes.insert(
                format!("{name}.separated"),
                separated(&labels, &in_a, &in_a2),
            );
            diag.outcomes.insert(
                format!("{name}.connected"),
                connected(&labels, &in_a) && connected(&labels, &in_a2),
            );
            let after = false_cluster_audit(pruned.tree(), density, &ps, floor)?;
            diag.outcomes
                .insert(format!("{name}.clean"), after.is_empty());
            let before = false_cluster_audit(&base, density, &ps, floor)?;
            diag.values.insert(
                format!("{name}.unpruned_false_clusters"),
                before.len() as f64,
            );
            diag.values
                .insert(format!("{name}.pruned_false_clusters"), after.len() as f64);
        }
        Ok(diag)
    })?;
    report.absorb(outcomes);
    Ok(report)
}

/// How `k` grows with the sample size along a consistency curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KSchedule {
    Fixed {
        k: usize,
    },
    /// `k = ceil(per_log_n * ln n)`.
    LogN {
        per_log_n: f64,
    },
}

impl KSchedule {
    pub fn k_for(&self, n: usize) -> usize {
        match *self {
            KSchedule::Fixed { k } => k,
            KSchedule::LogN { per_log_n } => ((per_log_n * (n as f64).ln()).ceil() as usize).max(1),
        }
    }
}

/// Empirical Hartigan consistency.
///
/// For each `n` of `n_grid`, the fraction of trials in which the smallest
/// clusters of the tree containing the samples of `A` and of `A'` are
/// disjoint. Clusters are set up as in [`check_separation_connectedness`];
/// the tree uses `p.alpha`, `rule` and `k` from `schedule`. A cluster whose
/// samples never share a component (possible for a forest) counts as a
/// failure. The curve is in `report.curve`; the totals pool all sizes.
#[allow(clippy::too_many_arguments)]
pub fn hartigan_consistency_curve(
    density: &PiecewiseConstant1D,
    p: &ScaleParams,
    level: f64,
    rule: Rule,
    schedule: KSchedule,
    n_grid: &[usize],
    trials: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    let cert = certificate_at(density, level)?
        .ok_or_else(|| Error::Hypothesis(format!("the level set at {level} is empty")))?;
    let sigma = cert.sigma_sup / 2.0;
    let (a, a2) = cert.clusters(sigma)?;
    let edge_rule = EdgeRule::new(rule, p.alpha)?;
    let mut report = ExperimentReport::new("hartigan_consistency", seed);
    report.params = Some(*p);
    report.density = Some(DensitySpec::PiecewiseConstant(density.clone()));
    report.settings.insert("level".into(), level);
    report.settings.insert("sigma".into(), sigma);
    for (g, &n) in n_grid.iter().enumerate() {
        let k = schedule.k_for(n);
        if k > n {
            return Err(Error::param("k", format!("k = {k} exceeds n = {n}")));
        }
        let grid_seed = trial_seed(seed, u64::MAX - g as u64);
        let outcomes = run_trials(trials, grid_seed, |index, s| {
            let ps = density.sample(n, s)?;
            let (in_a, in_a2) = (members(&ps, a), members(&ps, a2));
            if in_a.is_empty() || in_a2.is_empty() {
                return Ok(skipped(index, s));
            }
            let tree = build_tree(&ps, k, &edge_rule)?;
            let disjoint = match tree.disjoint_at(&in_a, &in_a2) {
                Ok(d) => d,
                Err(Error::InvalidQuery(_)) => false,
                Err(e) => return Err(e),
            };
            let mut diag = skipped(index, s);
            diag.skipped = false;
            diag.outcomes.insert("disjoint".into(), disjoint);
            diag.values.insert("n".into(), n as f64);
            diag.values.insert("k".into(), k as f64);
            Ok(diag)
        })?;
        let mut point = ExperimentReport::new("", grid_seed);
        point.absorb(outcomes.clone());
        report.curve.push(CurvePoint {
            n,
            k,
            trials: point.trials,
            successes: point.successes,
            skipped: point.skipped,
        });
        report.absorb(outcomes);
    }
    Ok(report)
}

/// Sample and neighborhood sizes for a separation experiment: the
/// smallest `k` meeting both the robust single linkage bound
/// [`ScaleParams::k_min_rsl`] and the k-NN graph bound
/// [`ScaleParams::k_min_knn`] (absolute constant `c` in both) when
/// `n = factor * sample_size_bound(sigma, lambda, eps)` is sized from that
/// same `k`. Found by fixed-point iteration; returns `(k, n)`.
#[allow(clippy::too_many_arguments)]
pub fn size_experiment(
    p: &ScaleParams,
    lambda_max: f64,
    lambda: f64,
    sigma: f64,
    eps: f64,
    c: f64,
    factor: f64,
) -> Result<(usize, usize)> {
    let mut k = p.k.max(1);
    for _ in 0..100 {
        let sized = p.with_n_k(p.n.max(k), k)?;
        let n = ((factor * sized.sample_size_bound(sigma, lambda, eps)?).ceil() as usize).max(k);
        let at_n = sized.with_n_k(n, k)?;
        let need = at_n
            .k_min_knn(lambda_max, lambda, c)?
            .max(at_n.k_min_rsl(eps, c)?)
            .ceil() as usize;
        if need <= k {
            return Ok((k, n));
        }
        k = need;
    }
    Err(Error::param("k", "sizing did not converge"))
}
