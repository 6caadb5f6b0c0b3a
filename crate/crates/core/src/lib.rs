//! Cluster tree estimation from samples.
//!
//! Build a hierarchy of clusters from a point set with robust single
//! linkage or a k-NN graph sweep ([`estimators`]), query it as a function
//! of the radius ([`tree`]), remove spurious branches ([`pruning`]) and
//! check the whole pipeline against densities with a known tree
//! ([`synthetic`], [`validation`]).
//!
//! ```
//! use clustertree::{build_tree, EdgeRule, PointSet};
//!
//! let ps = PointSet::from_1d(&[0.0, 1.0, 3.0]).unwrap();
//! let tree = build_tree(&ps, 2, &EdgeRule::rsl(1.0).unwrap()).unwrap();
//! assert_eq!(tree.components_at(1.0).unwrap(), vec![vec![0, 1]]);
//! assert_eq!(tree.components_at(2.0).unwrap(), vec![vec![0, 1, 2]]);
//! ```

pub mod error;
pub mod estimators;
pub mod geometry;
pub mod io;
pub mod pruning;
pub mod scales;
pub mod synthetic;
pub mod tree;
mod unionfind;
pub mod validation;

pub use error::{Error, Result};
pub use estimators::{build_tree, edge_activation, EdgeRule, Rule};
pub use geometry::{distance, knn_radii, unit_ball_volume, KnnRadii, PointSet};
pub use pruning::{prune, pruned_components_at, PruneOptions, PrunedTree};
pub use scales::ScaleParams;
pub use tree::{ClusterTree, EventKind, MergeEvent, Provenance, Subpartition, TreeMeta};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/quickstart.md")]
    mod quickstart {}
    #[doc = include_str!("../../../book/src/estimators.md")]
    mod estimators {}
    #[doc = include_str!("../../../book/src/tree.md")]
    mod tree {}
    #[doc = include_str!("../../../book/src/scales.md")]
    mod scales {}
    #[doc = include_str!("../../../book/src/pruning.md")]
    mod pruning {}
    #[doc = include_str!("../../../book/src/synthetic.md")]
    mod synthetic {}
    #[doc = include_str!("../../../book/src/validation.md")]
    mod validation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
