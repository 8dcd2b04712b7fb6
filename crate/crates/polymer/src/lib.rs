//! Polymers are positive collections of contours. Each configuration of the
//! chain splits into a tree of polymers (external contours at the root,
//! every contour's maximal inner contours one level down), and the partition
//! function becomes a hard-core gas over compatible polymer families with
//! activities `z = Z / Z*`, where `Z` sums over everything a polymer may
//! enclose and `Z*` normalizes by the enclosed configurations alone.

mod activity;
mod decompose;
mod gas;
mod polymer;

pub use activity::{Activities, Activity, Decoration, MAX_DECORATED_SITES};
pub use decompose::{
    children, coarsest_decomposition, enumerate_compatible_polymer_sets, polymer_universe,
    refinements, MAX_GAS_SITES,
};
pub use gas::{mayer_expand_check, polymer_partition_function, PolymerGasSum};
pub use polymer::{contours_compatible, polymer_compatible, Polymer, PolymerSet};
