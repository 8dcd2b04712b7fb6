//! Cluster expansion of the polymer gas. `log Z` is the sum over ordered
//! polymer tuples of the Ursell function of their incompatibility graph
//! times the product of activities, divided by the tuple length factorial;
//! here the tuples are grouped into multisets so each is visited once.

mod series;
mod ursell;

pub use polygas_contour::{peierls_sum, PeierlsRow};
pub use polygas_graphs::{connected_subgraphs as connected_graphs, labeled_trees, LabeledTree};
pub use series::{truncated_log_z, TruncatedSeries, MAX_SERIES_CLUSTERS, MAX_SERIES_ORDER};
pub use ursell::{penrose_bound, ursell, ClusterTuple, MAX_URSELL_SIZE};
