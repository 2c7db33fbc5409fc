use rayon::prelude::*;

use super::field::{SpectralField, Trajectory, Vec3c, ZERO3};

/// Weights `(a, b)` of the product rule on one step of length `dt` with
/// decay rate `lambda`:
///
/// ```text
/// ∫_0^dt e^{-λ(dt-r)} f(r) dr ≈ dt (a f(0) + b f(dt)),   z = λ dt,
/// a = ∫_0^1 x e^{-zx} dx,   b = ∫_0^1 (1-x) e^{-zx} dx
/// ```
///
/// exact when `f` is linear on the step.
pub fn product_weights(z: f64) -> (f64, f64) {
    if z < 0.5 {
        // a = Σ (-z)^m / (m! (m+2)),  b = Σ (-z)^m / (m! (m+1)(m+2))
        let (mut a, mut b) = (0.0, 0.0);
        let mut term = 1.0; // (-z)^m / m!
        for m in 0..24 {
            let mf = m as f64;
            a += term / (mf + 2.0);
            b += term / ((mf + 1.0) * (mf + 2.0));
            term *= -z / (mf + 1.0);
        }
        (a, b)
    } else {
        let e = (-z).exp();
        let z2 = z * z;
        ((1.0 - e * (1.0 + z)) / z2, (z - 1.0 + e) / z2)
    }
}

/// `t_j ↦ ∫_0^{t_j} e^{-|k|^2 (t_j - s)} f_s(k) ds` at every node, with `f`
/// piecewise linear between time nodes and the exponential integrated
/// exactly on each step.
pub fn time_convolve(f: &Trajectory) -> Trajectory {
    let grid = f.grid().clone();
    let spec = grid.spec();
    let nt = spec.time_nodes;
    let dt = spec.dt();
    if f.is_zero() {
        return Trajectory::zeros(&grid);
    }

    // per node: the whole time series at once
    let per_node: Vec<Vec<Vec3c>> = (0..spec.node_count())
        .into_par_iter()
        .map(|idx| {
            let kn = grid.norms[idx];
            let z = kn * kn * dt;
            let decay = (-z).exp();
            let (wa, wb) = product_weights(z);
            let mut out = Vec::with_capacity(nt);
            let mut acc = ZERO3;
            out.push(acc);
            for j in 0..nt - 1 {
                let lo = &f.frame(j).values()[idx];
                let hi = &f.frame(j + 1).values()[idx];
                for c in 0..3 {
                    acc[c] = acc[c] * decay + (lo[c] * wa + hi[c] * wb) * dt;
                }
                out.push(acc);
            }
            out
        })
        .collect();

    let frames = (0..nt)
        .map(|j| {
            let values = per_node.iter().map(|series| series[j]).collect();
            SpectralField::from_values(&grid, values).expect("node count")
        })
        .collect();
    Trajectory::from_frames(&grid, frames).expect("frame count")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::field::{make_initial, semigroup_apply, sup_norm, InitialKind};
    use crate::spectral::{Grid, GridSpec};
    use approx::assert_relative_eq;

    #[test]
    fn weights_are_continuous_at_switch() {
        let lo = product_weights(0.5 - 1e-12);
        let hi = product_weights(0.5);
        assert_relative_eq!(lo.0, hi.0, max_relative = 1e-10);
        assert_relative_eq!(lo.1, hi.1, max_relative = 1e-10);
        assert_eq!(product_weights(0.0), (0.5, 0.5));
    }

    #[test]
    fn weights_match_quadrature() {
        for z in [1e-6, 0.01, 0.3, 0.7, 3.0, 40.0] {
            let (a, b) = product_weights(z);
            let qa = crate::quad::gauss_kronrod(|x| x * (-z * x).exp(), 0.0, 1.0, 1e-15, 1e-14).value;
            let qb = crate::quad::gauss_kronrod(|x| (1.0 - x) * (-z * x).exp(), 0.0, 1.0, 1e-15, 1e-14).value;
            assert_relative_eq!(a, qa, max_relative = 1e-12);
            assert_relative_eq!(b, qb, max_relative = 1e-12);
        }
    }

    #[test]
    fn zero_in_zero_out() {
        let g = Grid::new(GridSpec::new(2.0, 5, 1.0, 9, 2.0).unwrap()).unwrap();
        assert!(time_convolve(&Trajectory::zeros(&g)).is_zero());
    }

    /// f_s = e^{-|k|^2 s} g has the closed form t e^{-|k|^2 t} g.
    fn manufactured_error(nt: usize) -> f64 {
        let g = Grid::new(GridSpec::new(2.0, 5, 1.0, nt, 2.0).unwrap()).unwrap();
        let h = make_initial(&g, InitialKind::RandomDivfree, 1.0, 3).unwrap();
        let f = Trajectory::semigroup(&h);
        let out = time_convolve(&f);
        let mut err: f64 = 0.0;
        for (j, t) in g.spec().times().into_iter().enumerate() {
            let exact = semigroup_apply(&h, t).unwrap().scaled(t);
            err = err.max(sup_norm(&out.frame(j).sub(&exact).unwrap()));
        }
        err
    }

    #[test]
    fn manufactured_solution_second_order() {
        let e1 = manufactured_error(17);
        let e2 = manufactured_error(33);
        let e3 = manufactured_error(65);
        assert!(e1 < 1e-2, "{e1}");
        let r1 = e1 / e2;
        let r2 = e2 / e3;
        assert!(r1 > 3.5 && r2 > 3.5, "ratios {r1} {r2}");
    }
}
