//! Per-size aggregates of the tree series, the tail majorant and the
//! convergence regime.

use nstrees::cli::{fitted_params, RunConfig};
use nstrees::series::{class_sum, ClassFilter, PhiCache};
use nstrees::spectral::{make_initial, Grid, InitialKind};

fn main() -> nstrees::Result<()> {
    let config = RunConfig::default();
    let grid = Grid::new(config.grid_spec()?)?;
    let h = make_initial(&grid, InitialKind::RandomDivfree, 0.1, 7)?;
    let cache = PhiCache::new(&h);
    let params = fitted_params(&cache, 5)?;
    let report = class_sum(&cache, ClassFilter::All, 6, params.as_ref())?;
    println!("regime: {}", report.regime);
    for s in &report.sizes {
        println!(
            "size {:>2}: {:>3} trees, aggregate {:.3e}, increment {:.3e}",
            s.size, s.count, s.aggregate_norm, s.increment_norm
        );
    }
    if let Some(last) = report.tail.last() {
        println!("tail majorant at t = {}: {:.3e} (ratio {:.3})", last.time, last.value, last.ratio);
    }
    Ok(())
}
