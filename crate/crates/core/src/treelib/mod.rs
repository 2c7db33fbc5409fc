//! Canonical rooted trees with at most two children per vertex, their
//! enumeration, and the statistics that weight the tree series: size,
//! tree factorial, symmetry factor, homogeneity order, depth, and
//! simple/short class membership.

mod classify;
mod enumerate;
mod export;
mod stats;
mod tree;

pub use classify::{classify, TreeClassParams};
pub use enumerate::{
    counts, enumerate, enumerate_depth_class, enumerate_depth_class_with_ceiling,
    enumerate_with_ceiling, DEFAULT_DEPTH_CEILING, DEFAULT_SIZE_CEILING,
};
pub use export::{read_lines, write_csv, write_lines, TreeRow};
pub use stats::{
    factorial, homogeneity, stats, stats_with_class, symmetry, verify_gamma_lower_bound,
    GammaEnvelopeRow, TreeStats,
};
pub use tree::{canonical_cmp, decode, encode, graft, graft1, graft2, leaf, Tree, LEAF_TOKEN};
