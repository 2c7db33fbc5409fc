//! Rooted-tree series for mild solutions of the 3D Navier-Stokes equation
//! written in Fourier variables.
//!
//! The crate is organised around four layers:
//!
//! - [`treelib`]: canonical trees with at most two children per vertex and
//!   their combinatorics (factorial, symmetry factor, homogeneity, classes).
//! - [`spectral`]: divergence-free fields on a wavevector grid, the heat
//!   semigroup, the symmetrised bilinear term and its time convolution.
//! - [`series`]: per-tree terms, Picard iterates, truncated tree sums and
//!   class-restricted sums.
//! - [`bounds`]: every quantitative estimate as an executable check.
//!
//! [`cli`] drives them from a config file; `examples/` has one runnable
//! program per capability.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod quad;
pub mod series;
pub mod spectral;
pub mod suite;
pub mod treelib;

pub use error::{Error, Result};
