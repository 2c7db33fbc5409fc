use super::grid::{Grid, GridSpec};
use crate::bounds::appendix_i_radial;
use crate::error::{Error, Result};

/// Distinct nonzero `|k|` on the lattice with `I(|k|)` for `ψ = |k|^-α`.
fn shell_integrals(spec: &GridSpec) -> Result<Vec<(f64, f64)>> {
    let grid = Grid::new(spec.clone())?;
    let mut radii: Vec<f64> = grid.norms.iter().copied().filter(|&r| r > 0.0).collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * *b);
    radii
        .into_iter()
        .map(|r| appendix_i_radial(r, spec.alpha, spec.alpha).map(|i| (r, i)))
        .collect()
}

/// Operator-norm bound of the time-convolved bilinear term on the lattice,
/// `N_t = sup_{s<=t} sup_k |k|^(α-1) (1 - e^{-|k|^2 s}) I(k)`.
/// Each factor is nondecreasing in `s`, so the outer sup sits at `s = t`.
pub fn lemma1_nt(spec: &GridSpec, t: f64) -> Result<f64> {
    Ok(lemma1_nt_profile(spec, &[t])?[0])
}

/// [`lemma1_nt`] at several times, sharing the shell integrals.
pub fn lemma1_nt_profile(spec: &GridSpec, times: &[f64]) -> Result<Vec<f64>> {
    if let Some(&t) = times.iter().find(|&&t| !(t >= 0.0)) {
        return Err(Error::NegativeTime(t));
    }
    let shells = shell_integrals(spec)?;
    let a = spec.alpha;
    Ok(times
        .iter()
        .map(|&t| {
            shells
                .iter()
                .map(|&(r, i)| r.powf(a - 1.0) * (-(-r * r * t).exp_m1()) * i)
                .fold(0.0, f64::max)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn starts_at_zero_and_increases() {
        let spec = GridSpec::new(3.0, 7, 1.0, 3, 2.5).unwrap();
        let v = lemma1_nt_profile(&spec, &[0.0, 0.01, 0.1, 1.0, 10.0]).unwrap();
        assert_eq!(v[0], 0.0);
        assert!(v.windows(2).all(|w| w[1] >= w[0]), "{v:?}");
        assert!(lemma1_nt(&spec, -1.0).is_err());
    }

    #[test]
    fn critical_plateau_is_pi_cubed() {
        // I(k) = π^3/|k| for α = 2, so N_t -> π^3
        let spec = GridSpec::new(3.0, 7, 1.0, 3, 2.0).unwrap();
        let v = lemma1_nt(&spec, 100.0).unwrap();
        assert!((v - PI.powi(3)).abs() < 1e-8 * v);
    }
}
