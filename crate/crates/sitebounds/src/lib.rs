//! Estimates on lattice sites. The kernel `C(x,y) = |x-y|^(-alpha)` (one on
//! the diagonal) turns bounds on contours into bounds on points: chain
//! inequalities for products of kernels, a distance detector for
//! incompatible polymers, contour-to-point inequalities, and the tree sum
//! over sites that shapes many-point correlations.

mod detector;
mod kernel;
mod report;

pub use detector::{
    contour_point_bounds_check, contour_point_sweep, detector_set_member, detector_witness,
    witness_sweep, BodyPair, PointBound, PointCase, PointSweep, PointSweepRow, WitnessReport,
};
pub use kernel::{
    chain_bound_check, chain_bound_sweep, contracting_step_check, kernel, site_tree_sum,
    summed_chain, summed_chain_bound_check, summed_chain_bound_sweep, ChainInstance, ChainSweep,
    Sides, CHAIN_RADIUS, MAX_CHAIN, MAX_SUMMED_CHAIN, MAX_TREE_SITES,
};
pub use report::{correlation_bound_report, CorrelationBoundReport, CorrelationBoundRow};
