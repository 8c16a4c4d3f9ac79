//! Blocky subsets of lattices, their coarse K-theory, cover generators for the
//! worked examples, and a brute-force excision oracle.
//!
//! ℤⁿ stands in for ℝⁿ throughout; the two are coarsely equivalent.

mod blocky;
mod excision;
mod families;
mod ktheory;

pub use blocky::{
    block_decomposition, intersect, zinf_block_family, BlockySpace, Classification, Factor,
};
pub use excision::{
    check_excision, check_excision_many, check_metric_sandwich, disjoint_rays, for_each_point,
    intersect_sets, parse_weight, ExcisionParams, ExcisionReport, Interval, Metric, ProductSet,
};
pub use families::{blocky_mv_input, BlockCover, Builtin, WedgeFamily, ZinfBlocks};
pub use ktheory::{
    point_k_theory, roe_k_theory, wedge_cover, wedge_intersection, CoarseSpace, WedgeCoverPiece,
    WedgeKind, WedgeSize,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoarseError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("no K-theory lookup for {0:?}: outside the supported grammar")]
    UnknownSpace(String),
    #[error("box half-width {box_half} must exceed S + R = {s} + {radius}")]
    BoxTooSmall { box_half: u64, radius: u64, s: u64 },
    #[error("bad metric weights: {0}")]
    BadWeights(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}
