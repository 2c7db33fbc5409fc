//! Simple-class and short-class sums side by side at ε = 0.5.

use nstrees::series::{class_sum, fit_simple_class, time_node, ClassFilter, PhiCache};
use nstrees::spectral::{make_initial, Grid, GridSpec, InitialKind};
use nstrees::treelib::TreeClassParams;

fn main() -> nstrees::Result<()> {
    let spec = GridSpec::new(5.0, 11, 10.0, 41, 2.5)?;
    let grid = Grid::new(spec.clone())?;
    let cache = PhiCache::new(&make_initial(&grid, InitialKind::RandomDivfree, 0.1, 7)?);
    let j = time_node(&spec, 10.0)?;

    let simple = class_sum(&cache, ClassFilter::Simple, 10, None)?;
    let fit = fit_simple_class(&cache, 10, 10.0)?;
    println!("simple class at t = 10, fitted B = {:.4}", fit.b);
    for (s, m) in simple.sizes.iter().zip(&fit.majorant) {
        println!("  size {:>2}: increment {:.3e}, majorant {:.3e}", s.size, s.increment_profile[j], m);
    }

    let short = class_sum(&cache, ClassFilter::short(&TreeClassParams::new(0.45, 0.06)?), 15, None)?;
    println!("short class at t = 10");
    for s in &short.sizes {
        println!("  size {:>2}: {} trees, term {:.3e}", s.size, s.count, s.aggregate_profile[j]);
    }
    Ok(())
}
