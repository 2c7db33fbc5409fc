//! Fit the per-vertex constant of the tree envelope and test the k-profile.

use nstrees::series::{envelope_report, fit_envelope, profile_rates, PhiCache};
use nstrees::spectral::{make_initial, Grid, GridSpec, InitialKind};

fn main() -> nstrees::Result<()> {
    let times = [0.1, 1.0, 5.0];
    for alpha in [2.0, 2.5] {
        let grid = Grid::new(GridSpec::new(5.0, 11, 5.0, 51, alpha)?)?;
        let cache = PhiCache::new(&make_initial(&grid, InitialKind::RandomDivfree, 0.1, 7)?);
        let fit = fit_envelope(&cache, 5, &times)?;
        println!(
            "ε = {}: A_fit {:.4} (binding {}), least squares {:.4} rms {:.3}",
            fit.epsilon, fit.a_fit, fit.binding, fit.a_ls, fit.rms
        );
        println!("  {}", envelope_report(&cache, 5, &times, fit.a_fit)?);
        let rates = profile_rates(&cache, 5, &times)?;
        let (enc, slowest) = rates.iter().min_by(|a, b| a.1.ratio.total_cmp(&b.1.ratio)).expect("trees");
        println!(
            "  slowest k-profile: {enc} at t = {}, rate {:.3} vs t/(|τ|+1) = {:.3}",
            slowest.time, slowest.rate, slowest.envelope_rate
        );
    }
    Ok(())
}
