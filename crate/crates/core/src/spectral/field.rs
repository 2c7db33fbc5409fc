use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::grid::Grid;
use crate::error::{Error, Result};

/// Complex 3-vector.
pub type Vec3c = [Complex64; 3];

pub const ZERO3: Vec3c = [Complex64::new(0.0, 0.0); 3];

/// Bilinear pairing `Σ k_i a_i` of a real wavevector with a complex vector,
/// without conjugation.
#[inline]
pub fn dot_k(k: &[f64; 3], a: &Vec3c) -> Complex64 {
    a[0] * k[0] + a[1] * k[1] + a[2] * k[2]
}

pub fn vnorm(a: &Vec3c) -> f64 {
    (a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr()).sqrt()
}

/// Orthogonal projection of `a` onto the plane normal to `k`:
/// `a - <k,a> k / |k|^2`. At `k = 0` the vector is returned unchanged and
/// the flag is set.
pub fn project_divfree(a: &Vec3c, k: &[f64; 3]) -> (Vec3c, bool) {
    let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if k2 == 0.0 {
        return (*a, true);
    }
    let s = dot_k(k, a) / k2;
    ([a[0] - s * k[0], a[1] - s * k[1], a[2] - s * k[2]], false)
}

/// A `c`-variable field: one complex 3-vector per grid node.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Grid,
    values: Vec<Vec3c>,
}

impl SpectralField {
    pub fn zeros(grid: &Grid) -> Self {
        SpectralField {
            grid: grid.clone(),
            values: vec![ZERO3; grid.spec().node_count()],
        }
    }

    /// Wrap raw node values. The length must match the grid.
    pub fn from_values(grid: &Grid, values: Vec<Vec3c>) -> Result<Self> {
        if values.len() != grid.spec().node_count() {
            return Err(Error::GridMismatch);
        }
        Ok(SpectralField {
            grid: grid.clone(),
            values,
        })
    }

    /// Project every node, zero the origin.
    pub fn from_values_projected(grid: &Grid, mut values: Vec<Vec3c>) -> Result<Self> {
        if values.len() != grid.spec().node_count() {
            return Err(Error::GridMismatch);
        }
        for (v, k) in values.iter_mut().zip(&grid.wavevectors) {
            *v = project_divfree(v, k).0;
        }
        values[grid.origin] = ZERO3;
        Ok(SpectralField {
            grid: grid.clone(),
            values,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Vec3c] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Vec3c] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Vec3c> {
        self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == ZERO3)
    }

    /// Largest `|<k, c(k)>|` over the grid.
    pub fn divergence_defect(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.grid.wavevectors)
            .map(|(v, k)| dot_k(k, v).norm())
            .fold(0.0, f64::max)
    }

    /// Origin value is zero and `|<k, c(k)>| <= tol * ||c||_0` everywhere.
    pub fn satisfies_invariants(&self, rel_tol: f64) -> bool {
        self.values[self.grid.origin] == ZERO3 && self.divergence_defect() <= rel_tol * sup_norm(self).max(f64::MIN_POSITIVE)
    }

    pub fn scaled(&self, s: f64) -> Self {
        self.map(|v| [v[0] * s, v[1] * s, v[2] * s])
    }

    pub fn map<F: Fn(&Vec3c) -> Vec3c>(&self, f: F) -> Self {
        SpectralField {
            grid: self.grid.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn zip_with<F: Fn(&Vec3c, &Vec3c) -> Vec3c>(&self, other: &Self, f: F) -> Result<Self> {
        if !self.grid.same(&other.grid) {
            return Err(Error::GridMismatch);
        }
        Ok(SpectralField {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]])
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| [a[0] - b[0], a[1] - b[1], a[2] - b[2]])
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: f64, other: &Self) -> Result<()> {
        if !self.grid.same(&other.grid) {
            return Err(Error::GridMismatch);
        }
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            for i in 0..3 {
                a[i] += b[i] * s;
            }
        }
        Ok(())
    }
}

/// `max_k |c(k)|`
pub fn sup_norm(c: &SpectralField) -> f64 {
    c.values.iter().map(vnorm).fold(0.0, f64::max)
}

/// Heat multiplier `e^{-|k|^2 t}` applied node by node.
pub fn semigroup_apply(h: &SpectralField, t: f64) -> Result<SpectralField> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    let grid = h.grid.clone();
    let values = h
        .values
        .iter()
        .zip(&grid.norms)
        .map(|(v, &kn)| {
            let m = (-kn * kn * t).exp();
            [v[0] * m, v[1] * m, v[2] * m]
        })
        .collect();
    Ok(SpectralField { grid, values })
}

/// `v(k) = |k|^{-alpha} c(k)`, zero at the origin.
pub fn to_velocity(c: &SpectralField) -> SpectralField {
    let alpha = c.grid.spec().alpha;
    let grid = c.grid.clone();
    let values = c
        .values
        .iter()
        .zip(&grid.norms)
        .map(|(v, &kn)| {
            if kn == 0.0 {
                ZERO3
            } else {
                let m = kn.powf(-alpha);
                [v[0] * m, v[1] * m, v[2] * m]
            }
        })
        .collect();
    SpectralField { grid, values }
}

/// `c(k) = |k|^{alpha} v(k)`, zero at the origin.
pub fn from_velocity(v: &SpectralField) -> SpectralField {
    let alpha = v.grid.spec().alpha;
    let grid = v.grid.clone();
    let values = v
        .values
        .iter()
        .zip(&grid.norms)
        .map(|(x, &kn)| {
            if kn == 0.0 {
                ZERO3
            } else {
                let m = kn.powf(alpha);
                [x[0] * m, x[1] * m, x[2] * m]
            }
        })
        .collect();
    SpectralField { grid, values }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    /// Random directions on the nodes of one lattice shell.
    SingleBump,
    /// Complex Gaussian draw at every node.
    RandomDivfree,
}

/// Lattice shell radius (in spacings) used by [`InitialKind::SingleBump`].
pub const BUMP_SHELL: f64 = 2.0;

/// Divergence-free initial datum with `||h||_0 = amplitude`, deterministic
/// in `seed`. Amplitude zero gives the zero field.
pub fn make_initial(grid: &Grid, kind: InitialKind, amplitude: f64, seed: u64) -> Result<SpectralField> {
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(Error::InvalidParam(format!("amplitude {amplitude} must be >= 0")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = grid.spec().spacing();
    let mut draw = || -> Vec3c {
        let mut v = ZERO3;
        for c in v.iter_mut() {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            *c = Complex64::new(re, im);
        }
        v
    };
    let values: Vec<Vec3c> = grid
        .norms
        .iter()
        .map(|&kn| {
            let v = draw();
            match kind {
                InitialKind::RandomDivfree => v,
                InitialKind::SingleBump if ((kn / h) - BUMP_SHELL).abs() < 0.5 => v,
                InitialKind::SingleBump => ZERO3,
            }
        })
        .collect();
    let mut f = SpectralField::from_values_projected(grid, values)?;
    let s = sup_norm(&f);
    if amplitude == 0.0 || s == 0.0 {
        return Ok(SpectralField::zeros(grid));
    }
    let scale = amplitude / s;
    for v in f.values.iter_mut() {
        for c in v.iter_mut() {
            *c *= scale;
        }
    }
    Ok(f)
}

/// Field sampled at the uniform time nodes of its grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    grid: Grid,
    frames: Vec<SpectralField>,
}

impl Trajectory {
    pub fn zeros(grid: &Grid) -> Self {
        let z = SpectralField::zeros(grid);
        Trajectory {
            grid: grid.clone(),
            frames: vec![z; grid.spec().time_nodes],
        }
    }

    pub fn from_frames(grid: &Grid, frames: Vec<SpectralField>) -> Result<Self> {
        if frames.len() != grid.spec().time_nodes || frames.iter().any(|f| !f.grid.same(grid)) {
            return Err(Error::GridMismatch);
        }
        Ok(Trajectory {
            grid: grid.clone(),
            frames,
        })
    }

    /// `t ↦ S_t h` on the time nodes.
    pub fn semigroup(h: &SpectralField) -> Self {
        let grid = h.grid.clone();
        let frames = grid
            .spec()
            .times()
            .into_iter()
            .map(|t| semigroup_apply(h, t).expect("nonnegative time"))
            .collect();
        Trajectory { grid, frames }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn frames(&self) -> &[SpectralField] {
        &self.frames
    }

    pub fn frame(&self, j: usize) -> &SpectralField {
        &self.frames[j]
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.frames.iter().all(SpectralField::is_zero)
    }

    /// `||c_t||_0` at every time node.
    pub fn sup_profile(&self) -> Vec<f64> {
        self.frames.iter().map(sup_norm).collect()
    }

    /// Sup over time and grid nodes.
    pub fn sup_norm(&self) -> f64 {
        self.sup_profile().into_iter().fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Trajectory {
            grid: self.grid.clone(),
            frames: self.frames.iter().map(|f| f.scaled(s)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_frames(other, SpectralField::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_frames(other, SpectralField::sub)
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: f64, other: &Self) -> Result<()> {
        if !self.grid.same(&other.grid) {
            return Err(Error::GridMismatch);
        }
        for (a, b) in self.frames.iter_mut().zip(&other.frames) {
            a.axpy(s, b)?;
        }
        Ok(())
    }

    fn zip_frames<F>(&self, other: &Self, f: F) -> Result<Self>
    where
        F: Fn(&SpectralField, &SpectralField) -> Result<SpectralField>,
    {
        if !self.grid.same(&other.grid) {
            return Err(Error::GridMismatch);
        }
        let frames = self
            .frames
            .iter()
            .zip(&other.frames)
            .map(|(a, b)| f(a, b))
            .collect::<Result<_>>()?;
        Ok(Trajectory {
            grid: self.grid.clone(),
            frames,
        })
    }

    /// `sup |self - other| / sup |reference|`, or the absolute sup
    /// difference when the reference vanishes.
    pub fn relative_distance(&self, other: &Self, reference: &Self) -> Result<f64> {
        let d = self.sub(other)?.sup_norm();
        let r = reference.sup_norm();
        Ok(if r > 0.0 { d / r } else { d })
    }
}
