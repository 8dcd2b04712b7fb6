//! Contours of the long-range chain: the unique decomposition of a spin-flip
//! set into pairwise compatible irreducible pieces, the relations between
//! pieces, and exhaustive sweeps of the energy/entropy inequalities that the
//! polymer expansion relies on.
//!
//! Two flip sets are compatible when their dual distance exceeds
//! `M * min(diam)^a`. A flip set is irreducible when no nontrivial split into
//! even parts is pairwise compatible.

mod collection;
mod contour;
mod enumerate;
mod hypotheses;
mod partition;

pub use collection::{
    collection_interior, energy_decomposition_check, external_contours, interior_collection,
    iota, CollectionKind, ContourCollection,
};
pub use contour::{
    dist_dual, is_compatible, is_inside, is_positively_compatible, Contour, Relation,
};
pub use enumerate::{
    class_representatives, contours_containing_origin, cover_size, enumerate_contours,
    ContourClass, MAX_ENUM_DIAM,
};
pub use hypotheses::{
    peierls_sum, verify_hypotheses, HypothesisReport, PeierlsRow, Violation, ViolationKind,
};
pub use partition::{
    is_irreducible, is_irreducible_bonds, m_partition, m_partition_with, split_bonds,
    SplitOrder, MAX_EXHAUSTIVE_FLIPS,
};
