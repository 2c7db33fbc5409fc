use std::ops::Deref;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Geometry of the wavevector cube `[-K, K]^3`, the quadrature excision
/// radius, the time grid, and the exponent `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Half-width `K` of the cube.
    pub cutoff: f64,
    /// Odd number of nodes per axis `M`.
    pub points_per_axis: usize,
    /// Cells closer than this to a kernel singularity are dropped.
    pub singular_cutoff: f64,
    pub time_horizon: f64,
    /// Uniform time nodes on `[0, T]`, both endpoints included.
    pub time_nodes: usize,
    /// Exponent in `[2, 3)`.
    pub alpha: f64,
}

impl GridSpec {
    /// Grid with the excision radius set to half a spacing.
    pub fn new(cutoff: f64, points_per_axis: usize, time_horizon: f64, time_nodes: usize, alpha: f64) -> Result<Self> {
        let spacing = if points_per_axis > 1 {
            2.0 * cutoff / (points_per_axis - 1) as f64
        } else {
            0.0
        };
        let g = GridSpec {
            cutoff,
            points_per_axis,
            singular_cutoff: 0.5 * spacing,
            time_horizon,
            time_nodes,
            alpha,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParam(m));
        if !(self.cutoff > 0.0 && self.cutoff.is_finite()) {
            return bad(format!("cutoff {} must be positive", self.cutoff));
        }
        if self.points_per_axis < 3 || self.points_per_axis % 2 == 0 {
            return bad(format!("points_per_axis {} must be odd and >= 3", self.points_per_axis));
        }
        if !(self.singular_cutoff > 0.0 && self.singular_cutoff < self.spacing()) {
            return bad(format!(
                "singular_cutoff {} must lie in (0, spacing = {})",
                self.singular_cutoff,
                self.spacing()
            ));
        }
        if !(self.time_horizon > 0.0 && self.time_horizon.is_finite()) {
            return bad(format!("time_horizon {} must be positive", self.time_horizon));
        }
        if self.time_nodes < 2 {
            return bad(format!("time_nodes {} must be >= 2", self.time_nodes));
        }
        if !(2.0..3.0).contains(&self.alpha) {
            return bad(format!("alpha {} not in [2, 3)", self.alpha));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.cutoff / (self.points_per_axis - 1) as f64
    }

    pub fn epsilon(&self) -> f64 {
        self.alpha - 2.0
    }

    pub fn node_count(&self) -> usize {
        self.points_per_axis.pow(3)
    }

    pub fn dt(&self) -> f64 {
        self.time_horizon / (self.time_nodes - 1) as f64
    }

    pub fn time(&self, j: usize) -> f64 {
        self.time_horizon * j as f64 / (self.time_nodes - 1) as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.time_nodes).map(|j| self.time(j)).collect()
    }

    /// Index of the time node closest to `t`.
    pub fn nearest_time_index(&self, t: f64) -> usize {
        ((t / self.dt()).round().max(0.0) as usize).min(self.time_nodes - 1)
    }

    /// SHA-256 of the JSON serialization, hex encoded.
    pub fn fingerprint(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("grid serializes");
        hex::encode(Sha256::digest(bytes))
    }
}

/// A validated [`GridSpec`] with the lattice precomputed. Cheap to clone.
///
/// Nodes are stored row-major: node `(ix, iy, iz)` has index
/// `(ix * M + iy) * M + iz` and wavevector `(-K + ix h, -K + iy h, -K + iz h)`.
#[derive(Debug, Clone)]
pub struct Grid(Arc<Lattice>);

#[derive(Debug)]
pub struct Lattice {
    pub spec: GridSpec,
    pub wavevectors: Vec<[f64; 3]>,
    pub norms: Vec<f64>,
    pub origin: usize,
    pub center: usize,
}

impl Grid {
    pub fn new(spec: GridSpec) -> Result<Grid> {
        spec.validate()?;
        let m = spec.points_per_axis;
        let h = spec.spacing();
        let center = (m - 1) / 2;
        let coord = |i: usize| (i as f64 - center as f64) * h;
        let mut wavevectors = Vec::with_capacity(m * m * m);
        for ix in 0..m {
            for iy in 0..m {
                for iz in 0..m {
                    wavevectors.push([coord(ix), coord(iy), coord(iz)]);
                }
            }
        }
        let norms = wavevectors.iter().map(|k| norm3(k)).collect();
        let origin = (center * m + center) * m + center;
        Ok(Grid(Arc::new(Lattice {
            spec,
            wavevectors,
            norms,
            origin,
            center,
        })))
    }

    pub fn spec(&self) -> &GridSpec {
        &self.0.spec
    }

    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        let m = self.0.spec.points_per_axis;
        (ix * m + iy) * m + iz
    }

    pub fn triple(&self, idx: usize) -> (usize, usize, usize) {
        let m = self.0.spec.points_per_axis;
        (idx / (m * m), (idx / m) % m, idx % m)
    }

    /// Same lattice, possibly different time grid or alpha, compares equal
    /// only when the full spec matches.
    pub fn same(&self, other: &Grid) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }

    /// Copy of the grid with a different exponent.
    pub fn with_alpha(&self, alpha: f64) -> Result<Grid> {
        let mut spec = self.spec().clone();
        spec.alpha = alpha;
        Grid::new(spec)
    }
}

impl Deref for Grid {
    type Target = Lattice;

    fn deref(&self) -> &Lattice {
        &self.0
    }
}

pub fn norm3(k: &[f64; 3]) -> f64 {
    (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt()
}
