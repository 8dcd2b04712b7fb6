//! Small-graph combinatorics: Prüfer-coded labeled trees, spanning trees
//! inside a given graph, connected spanning subgraph sums and set partitions.
//!
//! Vertex sets are `0..n` with `n` small. Edge sets of a graph on `n`
//! vertices are bitmasks over [`pair_index`].

mod connected;
mod partitions;
mod trees;

pub use connected::{
    connected_subgraphs, connected_sum, is_connected, pair_index, pairs, EdgeMask,
    MAX_CONNECTED_EDGES,
};
pub use partitions::{bell, set_partitions, SetPartitions};
pub use trees::{
    count_spanning_trees, labeled_trees, spanning_trees_in, LabeledTree, MAX_TREE_VERTICES,
};
