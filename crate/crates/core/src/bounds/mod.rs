//! Executable versions of the analytic estimates: the per-tree envelope
//! and its constants, series tails and convergence thresholds, tree-count
//! and tree-factorial fits, convolution integrals of power weights, and
//! the decay majorant of the critical case.

mod constants;
mod decay;
mod fit;
mod integrals;
mod report;

pub use constants::{
    c_tau, c_tau_recursion_defect, c_tau_recursive, convergence_threshold, envelope_at, gamma_class_fit, log_factorial, simple_class_summand,
    tail_bound, theorem_envelope, zn_fit, zn_fit_enumerated, BoundParams, GammaClassFit, TailBound, ThresholdMode,
    ZnFit,
};
pub use decay::{
    decay_fit, laplace_rates, log_majorant, majorant, majorant_ratio, majorant_slope, DecayFit, LaplaceRates,
    MajorantSlope, DEFAULT_MIN_SPAN,
};
pub use fit::{geomspace, linear_fit, loglog_slope, LinearFit};
pub use integrals::{
    appendix_i, appendix_i_radial, estimate_a_prime, lemma1_envelope, lemma1_shape_max, exponent_min_check, lemma4_check, psi, psi_convolution,
    APrimeEstimate, Region, A_PRIME_RADIUS,
};
pub use report::{write_json, write_table, BoundReport};
