//! Divergence-free fields on a cubic wavevector lattice and the operators
//! of the mild formulation: heat semigroup, symmetrised bilinear term and
//! its time convolution.

mod bilinear;
mod convolve;
mod field;
mod grid;
pub mod io;
mod norm;

pub use bilinear::{bilinear_b, bilinear_frames, calb};
pub use convolve::{product_weights, time_convolve};
pub use field::{
    dot_k, from_velocity, make_initial, project_divfree, semigroup_apply, sup_norm, to_velocity, vnorm, InitialKind,
    SpectralField, Trajectory, Vec3c, BUMP_SHELL, ZERO3,
};
pub use grid::{norm3, Grid, GridSpec, Lattice};
pub use norm::{lemma1_nt, lemma1_nt_profile};
