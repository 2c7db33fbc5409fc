//! Per-tree terms of the series, Picard iterates and truncated sums.

mod fit;
mod phi;
mod sum;

pub use fit::{
    envelope_report, fit_envelope, fit_simple_class, profile_rate, profile_rates, time_node, EnvelopeFit, ProfileRate,
    SimpleClassFit, TreeRatio,
};
pub use phi::{phi, phi_uncached, Mutation, PhiCache, MAX_PHI_DEPTH};
pub use sum::{
    class_sum, picard, regime_label, residual, series_sum, tree_sum, ClassFilter, SeriesReport, SeriesTerm,
    SizeAggregate, TailRecord,
};
