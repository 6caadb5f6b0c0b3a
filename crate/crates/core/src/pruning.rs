//! Removal of spurious clusters by lookup.
//!
//! At level `r`, two components are reconnected when they share a
//! component of the base tree at the lookup level
//! `r' = r(max(lambda_tilde_r, 0))`, where a clamped lookup density of zero
//! sends `r'` to `+inf` (the base tree's final components). Pruning only
//! adds connections and never removes vertices.
//!
//! Writing `L(r) = max(r, r')`, the pruned subpartition at `r` is the base
//! subpartition at `L(r)` restricted to the vertices born by `r`: if
//! `r' <= r` the base components at `r'` refine those at `r` and no
//! reconnection happens. `L` is nondecreasing, so the pruned subpartitions
//! are nested.
//!
//! The pruned filtration changes at base birth radii and wherever `L(r)`
//! reaches a base merge radius `e`. The latter crossing points are located
//! exactly, as the smallest float `r` with `L(r) >= e`.

use crate::error::{Error, Result};
use crate::scales::ScaleParams;
use crate::tree::{
    group_labels, CanonicalBuilder, ClusterTree, EventKind, PruningNote, Replay, Subpartition,
};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PruneOptions {
    /// Reconnect every component at levels `r > (k / (10 n v_d eps_tilde))^(1/d)`.
    pub prune_low_levels: bool,
}

/// A base tree together with its pruned filtration.
#[derive(Debug, Clone)]
pub struct PrunedTree {
    base: ClusterTree,
    params: ScaleParams,
    options: PruneOptions,
    pruned: ClusterTree,
}

impl PrunedTree {
    pub fn base(&self) -> &ClusterTree {
        &self.base
    }

    /// The pruned filtration as a tree of its own.
    pub fn tree(&self) -> &ClusterTree {
        &self.pruned
    }

    pub fn into_tree(self) -> ClusterTree {
        self.pruned
    }

    pub fn params(&self) -> &ScaleParams {
        &self.params
    }

    pub fn eps_tilde(&self) -> f64 {
        self.params.eps_tilde
    }

    /// The post-pruning subpartition at level `r`.
    pub fn components_at(&self, r: f64) -> Result<Subpartition> {
        self.pruned.components_at(r)
    }

    /// The lookup radius `L(r)` actually used at level `r`.
    pub fn effective_lookup(&self, r: f64) -> f64 {
        effective_lookup(&self.params, self.options, r)
    }

    /// Evaluates the pruning rule at `r` from the base tree directly,
    /// bypassing the precomputed filtration.
    pub fn direct_components_at(&self, r: f64) -> Result<Subpartition> {
        let born = self.base.labels_at(r)?;
        let lookup = self.effective_lookup(r);
        let mut replay = Replay::new(&self.base);
        replay.advance_to(lookup);
        let target = replay.labels();
        let labels: Vec<Option<usize>> = born.iter().zip(&target).map(|(b, t)| b.and(*t)).collect();
        Ok(group_labels(&labels))
    }
}

/// Shorthand for [`PrunedTree::components_at`].
pub fn pruned_components_at(pt: &PrunedTree, r: f64) -> Result<Subpartition> {
    pt.components_at(r)
}

fn effective_lookup(p: &ScaleParams, options: PruneOptions, r: f64) -> f64 {
    if options.prune_low_levels {
        if let Some(cut) = p.low_level_cutoff() {
            if r > cut {
                return f64::INFINITY;
            }
        }
    }
    r.max(p.lookup_radius(r))
}

/// Smallest nonnegative float `r <= hi` with `pred(r)`, assuming `pred` is
/// monotone and `pred(hi)` holds. Positive floats order like their bits.
fn first_true(hi: f64, pred: impl Fn(f64) -> bool) -> f64 {
    if pred(0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0u64, hi.to_bits());
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(f64::from_bits(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    f64::from_bits(hi)
}

/// Prunes `tree` with the lookup rule parameterized by `params`.
pub fn prune(
    tree: &ClusterTree,
    params: &ScaleParams,
    options: PruneOptions,
) -> Result<PrunedTree> {
    params.validate()?;
    let meta = tree.meta();
    if tree.n() != params.n {
        return Err(Error::ParameterMismatch {
            field: "n",
            tree: tree.n().to_string(),
            params: params.n.to_string(),
        });
    }
    if meta.k != params.k {
        return Err(Error::ParameterMismatch {
            field: "k",
            tree: meta.k.to_string(),
            params: params.k.to_string(),
        });
    }
    if meta.d != params.d {
        return Err(Error::ParameterMismatch {
            field: "d",
            tree: meta.d.to_string(),
            params: params.d.to_string(),
        });
    }

    let n = tree.n();
    let events = tree.events();
    let lookup = |r: f64| effective_lookup(params, options, r);

    let mut births: Vec<(f64, usize)> = events
        .iter()
        .filter_map(|e| match e.kind {
            EventKind::Birth { point } => Some((e.radius, point)),
            _ => None,
        })
        .collect();
    births.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut levels: Vec<f64> = births.iter().map(|b| b.0).collect();
    let mut merge_radii: Vec<f64> = events
        .iter()
        .filter(|e| !e.is_birth())
        .map(|e| e.radius)
        .collect();
    merge_radii.dedup();
    levels.extend(
        merge_radii
            .iter()
            .map(|&e| first_true(e, |r| lookup(r) >= e)),
    );
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    // `target` replays the base tree at the lookup level; `rep` holds one
    // pruned-born point of each target component.
    let mut target = UnionFind::new(n);
    let mut rep: Vec<Option<usize>> = vec![None; n];
    let mut ev = 0;
    let mut bi = 0;
    let mut builder = CanonicalBuilder::new(n);
    let mut links = Vec::new();
    let mut level_births = Vec::new();
    for &r in &levels {
        links.clear();
        level_births.clear();
        let reach = lookup(r);
        while ev < events.len() && events[ev].radius <= reach {
            if let EventKind::Merge { a, b } = events[ev].kind {
                let (ra, rb) = (target.find(a), target.find(b));
                let (pa, pb) = (rep[ra], rep[rb]);
                target.union(a, b);
                let root = target.find(a);
                rep[root] = pa.or(pb);
                if let (Some(x), Some(y)) = (pa, pb) {
                    links.push((x, y));
                }
            }
            ev += 1;
        }
        while bi < births.len() && births[bi].0 <= r {
            let i = births[bi].1;
            level_births.push(i);
            let root = target.find(i);
            match rep[root] {
                Some(j) => links.push((i, j)),
                None => rep[root] = Some(i),
            }
            bi += 1;
        }
        builder.level(r, &level_births, links.iter().copied());
    }

    let mut provenance = tree.provenance.clone();
    provenance.c_delta = Some(params.c_delta);
    provenance.delta = Some(params.delta);
    provenance.eps_tilde = Some(params.eps_tilde);
    provenance.pruning = Some(PruningNote {
        clamped_from_r: params.clamp_radius(),
        low_level_cutoff_r: if options.prune_low_levels {
            params.low_level_cutoff()
        } else {
            None
        },
    });
    let pruned = ClusterTree::new(n, *meta, builder.finish())?.with_provenance(provenance);
    Ok(PrunedTree {
        base: tree.clone(),
        params: *params,
        options,
        pruned,
    })
}
