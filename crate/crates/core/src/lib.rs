//! Overlapping hierarchical clustering through concept lattices.
//!
//! Numerical data is binarized into a transaction database by k-nearest
//! neighbor membership ([`binarize`]). The closed itemsets of that database
//! are the concepts of a formal context ([`miner`]); their extents are
//! clusters of data points, and the covering relation between extents gives
//! a directed graph of overlapping clusters ([`lattice`]). Hierarchies are
//! scored with dendrogram purity ([`eval`]) against a Ward-linkage
//! agglomerative baseline ([`hac`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! the benchmark harness live in the `fcagraph` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod binarize;
pub mod bitset;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod hac;
pub mod lattice;
pub mod miner;

pub use binarize::{knn_binarize, knn_binarize_with, Metric, SelfPolicy, TransactionDatabase};
pub use bitset::BitSet;
pub use dataset::{generate_synth, Dataset, SynthKind, SynthSpec};
pub use error::{Error, Result};
pub use eval::{
    dendrogram_purity, evaluate, lca, purity, ClusterHierarchy, Partition, PurityReport,
};
pub use hac::{dendrogram_clusters, hac_ward, Dendrogram, Merge, WardClustering};
pub use lattice::{build_hasse, LatticeGraph};
pub use miner::{closure, derive_extent, derive_intent, mine_concepts, Concept, ConceptSet};
