//! Robust single linkage and the (mutual) k-NN graph estimator as one
//! sweep.
//!
//! Every vertex `i` becomes active at `r_k(x_i)`. Every pair `(i, j)` gets
//! an activation radius: the smallest `r` at which the pair is an edge of
//! the graph at level `r`, or `+inf` if it never is. Running union-find
//! over the finite activations in ascending order (Kruskal) reproduces the
//! connected components of the graph family at every level without ever
//! materializing a graph. Only a minimum spanning forest of the activation
//! weights affects those components, so [`build_tree`] finds one with
//! dense Prim in `O(n^2)` time and `O(n)` memory instead of sorting all
//! pairs.
//!
//! | rule   | edge `(i, j)` present at `r` when                          | activation                        |
//! |--------|------------------------------------------------------------|-----------------------------------|
//! | `Rsl`  | both active and `d_ij <= alpha * r`                        | `max(r_i, r_j, d_ij / alpha)`     |
//! | `Knn`  | both active and `d_ij <= alpha * max(r_i, r_j)`            | `max(r_i, r_j)` or `+inf`         |
//! | `Mknn` | both active and `d_ij <= alpha * min(r_i, r_j)`            | `max(r_i, r_j)` or `+inf`         |
//!
//! For `Rsl` the quotient `d_ij / alpha` is replaced by the smallest float
//! `r` with `alpha * r >= d_ij` evaluated in floating point, so the sweep
//! agrees bit-for-bit with the literal edge predicate.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_k, euclidean, knn_radii, KnnRadii, PointSet};
use crate::tree::{CanonicalBuilder, ClusterTree, TreeMeta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    /// Robust single linkage: all pairs within `alpha * r`.
    Rsl,
    /// k-NN graph: `d <= alpha * max(r_k)`.
    Knn,
    /// Mutual k-NN graph: `d <= alpha * min(r_k)`.
    Mknn,
}

impl Rule {
    pub const ALL: [Rule; 3] = [Rule::Rsl, Rule::Knn, Rule::Mknn];

    pub fn as_str(&self) -> &'static str {
        match self {
            Rule::Rsl => "rsl",
            Rule::Knn => "knn",
            Rule::Mknn => "mknn",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rsl" => Ok(Rule::Rsl),
            "knn" => Ok(Rule::Knn),
            "mknn" => Ok(Rule::Mknn),
            other => Err(Error::param(
                "rule",
                format!("unknown rule `{other}`, expected rsl, knn or mknn"),
            )),
        }
    }
}

/// An edge rule together with its scale factor `alpha >= 1`.
///
/// Guarantees for the estimators are only known for `1 <= alpha <= 2`
/// (and need `alpha >= sqrt 2` for the logarithmic `k`), but any finite
/// `alpha >= 1` is accepted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeRule {
    pub rule: Rule,
    pub alpha: f64,
}

impl EdgeRule {
    pub fn new(rule: Rule, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 1.0 {
            return Err(Error::param(
                "alpha",
                format!("must be a finite value >= 1, got {alpha}"),
            ));
        }
        Ok(EdgeRule { rule, alpha })
    }

    pub fn rsl(alpha: f64) -> Result<Self> {
        Self::new(Rule::Rsl, alpha)
    }

    pub fn knn(alpha: f64) -> Result<Self> {
        Self::new(Rule::Knn, alpha)
    }

    pub fn mutual_knn(alpha: f64) -> Result<Self> {
        Self::new(Rule::Mknn, alpha)
    }

    /// The literal edge predicate at level `r` for two active endpoints.
    #[inline]
    pub fn edge_present(&self, d_ij: f64, rki: f64, rkj: f64, r: f64) -> bool {
        let scale = match self.rule {
            Rule::Rsl => r,
            Rule::Knn => rki.max(rkj),
            Rule::Mknn => rki.min(rkj),
        };
        d_ij <= self.alpha * scale
    }

    #[inline]
    pub(crate) fn activation(&self, d_ij: f64, rki: f64, rkj: f64) -> f64 {
        let born = rki.max(rkj);
        match self.rule {
            Rule::Rsl => born.max(min_scale(d_ij, self.alpha)),
            Rule::Knn | Rule::Mknn => {
                if self.edge_present(d_ij, rki, rkj, born) {
                    born
                } else {
                    f64::INFINITY
                }
            }
        }
    }
}

/// Smallest float `r >= 0` with `alpha * r >= d` in floating point.
fn min_scale(d: f64, alpha: f64) -> f64 {
    let mut r = d / alpha;
    while alpha * r < d {
        r = r.next_up();
    }
    while r > 0.0 && alpha * r.next_down() >= d {
        r = r.next_down();
    }
    r
}

/// Activation radius of the pair `(i, j)` under `rule`, or `+inf` when the
/// pair never becomes an edge.
pub fn edge_activation(rule: &EdgeRule, d_ij: f64, rki: f64, rkj: f64) -> Result<f64> {
    for (name, v) in [("d_ij", d_ij), ("rki", rki), ("rkj", rkj)] {
        if v.is_nan() || v < 0.0 {
            return Err(Error::param(name, format!("must be nonnegative, got {v}")));
        }
    }
    Ok(rule.activation(d_ij, rki, rkj))
}

/// Vertex births and finite edge activations for one sample.
#[derive(Debug, Clone)]
pub struct ActivationSchedule {
    pub radii: KnnRadii,
    /// `(activation, i, j)` with `i < j`, sorted ascending.
    pub edges: Vec<(f64, u32, u32)>,
}

impl ActivationSchedule {
    pub fn new(ps: &PointSet, k: usize, rule: &EdgeRule) -> Result<Self> {
        check_k(ps, k)?;
        if ps.len() > u32::MAX as usize {
            return Err(Error::param("n", "too many points"));
        }
        let radii = knn_radii(ps, k)?;
        let n = ps.len();
        let r = &radii.radii;
        let mut edges: Vec<(f64, u32, u32)> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                (i + 1..n).filter_map(move |j| {
                    let a = rule.activation(ps.dist(i, j), r[i], r[j]);
                    a.is_finite().then_some((a, i as u32, j as u32))
                })
            })
            .collect();
        edges.par_sort_unstable_by(|x, y| {
            x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2))
        });
        Ok(ActivationSchedule { radii, edges })
    }
}

/// Builds the cluster tree of `ps` under `rule`.
///
/// For every `r >= 0`, `components_at(r)` of the result equals the connected
/// components of the graph whose vertices are `{i : r_k(x_i) <= r}` and
/// whose edges are the pairs satisfying the rule at `r`.
pub fn build_tree(ps: &PointSet, k: usize, rule: &EdgeRule) -> Result<ClusterTree> {
    check_k(ps, k)?;
    let radii = knn_radii(ps, k)?;
    let forest = spanning_forest(ps, &radii.radii, rule);
    Ok(sweep(ps, k, rule, &radii.radii, &forest))
}

/// Minimum spanning forest of the finite activation weights, sorted by
/// `(activation, i, j)` with `i < j`.
fn spanning_forest(ps: &PointSet, radii: &[f64], rule: &EdgeRule) -> Vec<(f64, u32, u32)> {
    let n = ps.len();
    // Vertices not yet in the forest, with their key and tree neighbor,
    // kept contiguous so each pass touches only what is left.
    let mut rem: Vec<(u32, f64, u32)> = (1..n)
        .map(|v| (v as u32, f64::INFINITY, u32::MAX))
        .collect();
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    let below_inv_alpha = match rule.rule {
        Rule::Rsl => (1.0 / rule.alpha) * (1.0 - 1e-12),
        Rule::Knn | Rule::Mknn => 0.0,
    };
    let mut u = 0usize;
    while !rem.is_empty() {
        // Relax from u and pick the next vertex in the same pass. With no
        // finite key left, a new tree starts from any remaining vertex;
        // the forest may differ but the filtration it induces does not.
        let ru = radii[u];
        let xu = ps.point(u);
        let mut best = (f64::INFINITY, 0usize);
        for (slot, entry) in rem.iter_mut().enumerate() {
            let (v, key, _) = *entry;
            let rv = radii[v as usize];
            // Activations never precede both births, and for Rsl never
            // precede `d / alpha` up to rounding; most pairs stop here.
            if ru.max(rv) < key {
                let d = euclidean(xu, ps.point(v as usize));
                if d * below_inv_alpha < key {
                    let a = rule.activation(d, ru, rv);
                    if a < key {
                        *entry = (v, a, u as u32);
                    }
                }
            }
            if entry.1 < best.0 {
                best = (entry.1, slot);
            }
        }
        let (v, key, parent) = rem.swap_remove(best.1);
        if parent != u32::MAX {
            out.push((key, parent.min(v), parent.max(v)));
        }
        u = v as usize;
    }
    out.sort_unstable_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    out
}

/// Kruskal sweep over vertex births and sorted activations.
fn sweep(
    ps: &PointSet,
    k: usize,
    rule: &EdgeRule,
    radii: &[f64],
    edges: &[(f64, u32, u32)],
) -> ClusterTree {
    let n = ps.len();
    let mut births: Vec<usize> = (0..n).collect();
    births.sort_by(|&a, &b| radii[a].total_cmp(&radii[b]).then(a.cmp(&b)));

    let mut builder = CanonicalBuilder::new(n);
    let (mut bi, mut ei) = (0, 0);
    let mut level_births = Vec::new();
    while bi < n || ei < edges.len() {
        let next_birth = births.get(bi).map(|&i| radii[i]).unwrap_or(f64::INFINITY);
        let next_edge = edges.get(ei).map(|e| e.0).unwrap_or(f64::INFINITY);
        let r = next_birth.min(next_edge);
        level_births.clear();
        while bi < n && radii[births[bi]] == r {
            level_births.push(births[bi]);
            bi += 1;
        }
        let start = ei;
        while ei < edges.len() && edges[ei].0 == r {
            ei += 1;
        }
        let links = edges[start..ei]
            .iter()
            .map(|&(_, i, j)| (i as usize, j as usize));
        builder.level(r, &level_births, links);
    }

    let meta = TreeMeta {
        d: ps.dim(),
        k,
        alpha: rule.alpha,
        rule: rule.rule,
    };
    ClusterTree::new(n, meta, builder.finish()).expect("sweep emits canonical events")
}
