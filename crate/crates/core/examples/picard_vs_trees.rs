//! The depth-truncated tree sum reproduces the Picard iterates.

use nstrees::series::{picard, tree_sum, PhiCache};
use nstrees::spectral::{make_initial, Grid, GridSpec, InitialKind};

fn main() -> nstrees::Result<()> {
    for alpha in [2.0, 2.5] {
        let grid = Grid::new(GridSpec::new(5.0, 11, 1.0, 33, alpha)?)?;
        let h = make_initial(&grid, InitialKind::RandomDivfree, 0.1, 7)?;
        let cache = PhiCache::new(&h);
        for n in 1..=3 {
            let p = picard(&h, n)?;
            let s = tree_sum(&cache, n as i64 - 1)?;
            println!(
                "α = {alpha} n = {n}: relative discrepancy {:.3e}, memo holds {} trees",
                s.relative_distance(&p, &p)?,
                cache.len()
            );
        }
    }
    Ok(())
}
