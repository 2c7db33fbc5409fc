use num_complex::Complex64;
use rayon::prelude::*;

use super::convolve::time_convolve;
use super::field::{dot_k, project_divfree, to_velocity, SpectralField, Trajectory, Vec3c, ZERO3};
use crate::error::{Error, Result};

/// Symmetrised bilinear term
///
/// ```text
/// B(c,d)(k) = (B1(c,d) + B1(d,c)) / 2,
/// B1(c,d)(k) = i |k|^α ∫ dk' <k, c(k-k')> P_k d(k') / (|k-k'|^α |k'|^α)
/// ```
///
/// evaluated by the midpoint rule over the lattice cells. Lattice
/// differences `k - k'` are themselves nodes when they fall inside the
/// cube and are dropped otherwise. Cells within `singular_cutoff` of either
/// singularity are excised. Swapping the arguments gives a bitwise
/// identical result.
pub fn bilinear_b(c: &SpectralField, d: &SpectralField) -> Result<SpectralField> {
    if !c.grid().same(d.grid()) {
        return Err(Error::GridMismatch);
    }
    let grid = c.grid().clone();
    if c.is_zero() || d.is_zero() {
        return Ok(SpectralField::zeros(&grid));
    }
    let spec = grid.spec();
    let m = spec.points_per_axis;
    let c0 = grid.center;
    let alpha = spec.alpha;
    let delta = spec.singular_cutoff;
    let cell = spec.spacing().powi(3);
    // c / |k|^α
    let vc = to_velocity(c);
    let vd = to_velocity(d);
    let (vc, vd) = (vc.values(), vd.values());
    let norms = &grid.norms;
    let kv = &grid.wavevectors;

    let values: Vec<Vec3c> = (0..spec.node_count())
        .into_par_iter()
        .map(|idx| {
            let kn = norms[idx];
            if kn == 0.0 {
                return ZERO3;
            }
            let k = &kv[idx];
            let (i, j, l) = grid.triple(idx);
            let range = |x: usize| x.saturating_sub(c0)..=(x + c0).min(m - 1);
            let mut acc = ZERO3;
            for a in range(i) {
                let da = i + c0 - a;
                for b in range(j) {
                    let db = j + c0 - b;
                    let row_p = (a * m + b) * m;
                    let row_q = (da * m + db) * m;
                    for cc in range(l) {
                        let p = row_p + cc;
                        let q = row_q + (l + c0 - cc);
                        if norms[p] < delta || norms[q] < delta {
                            continue;
                        }
                        let s1 = dot_k(k, &vc[q]);
                        let s2 = dot_k(k, &vd[q]);
                        let (x, y) = (&vd[p], &vc[p]);
                        acc[0] += s1 * x[0] + s2 * y[0];
                        acc[1] += s1 * x[1] + s2 * y[1];
                        acc[2] += s1 * x[2] + s2 * y[2];
                    }
                }
            }
            let (pacc, _) = project_divfree(&acc, k);
            let pref = Complex64::new(0.0, 0.5 * kn.powf(alpha) * cell);
            [pref * pacc[0], pref * pacc[1], pref * pacc[2]]
        })
        .collect();
    SpectralField::from_values(&grid, values)
}

/// Frame-wise [`bilinear_b`] without the time integral.
pub fn bilinear_frames(c: &Trajectory, d: &Trajectory) -> Result<Trajectory> {
    if !c.grid().same(d.grid()) {
        return Err(Error::GridMismatch);
    }
    let frames = c
        .frames()
        .iter()
        .zip(d.frames())
        .map(|(x, y)| bilinear_b(x, y))
        .collect::<Result<Vec<_>>>()?;
    Trajectory::from_frames(c.grid(), frames)
}

/// `t ↦ ∫_0^t S_{t-s} B(c_s, d_s) ds` on the time nodes.
pub fn calb(c: &Trajectory, d: &Trajectory) -> Result<Trajectory> {
    Ok(time_convolve(&bilinear_frames(c, d)?))
}
