//! Sums over trees whose vertices carry labels from a finite vertex system.
//!
//! A vertex system assigns each label a positive weight `v_beta` and each
//! pair a symmetric nonnegative edge weight `e`. Tree sums fix the labels of
//! the first `m` tree vertices and sum over the rest, weighting a labeled
//! tree by `prod v_beta * prod_{edges} e` and dividing by the factorial of
//! the number of free vertices. Local sums admit any labels; global sums
//! admit only tuples whose entries are pairwise compatible.
//!
//! Infinite sums are truncated at a maximal tree size. The inner sum over
//! trees is evaluated by the matrix-tree theorem and checked against
//! direct enumeration.

mod instances;
mod sums;
mod system;
mod trees;

pub use instances::{
    contour_bound_sweep, contour_system, polymer_system, ContourBoundRow,
    ContourSystem, PolymerSystem,
};
pub use sums::{
    brute_force_tree_sum, spanning_tree_weight, total_edge, tree_sum_global, tree_sum_local,
    two_vertex_factorization, Factorization, TreeSum, MAX_TREE_SIZE, MAX_TUPLES,
};
pub use system::{
    contracting, leaf_pruning, modified_vertex, toys, GlobalCompat, VertexSystem, VertexWeight,
};
pub use trees::{
    is_restricted, permutations, remove_vertex_expand, restricted_tree_count, restricted_trees,
    RestrictedTreeFamily,
};
