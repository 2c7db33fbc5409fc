//! Count trees by size, print their statistics and fit the growth constant.

use nstrees::bounds::zn_fit;
use nstrees::treelib::{counts, enumerate, stats_with_class, TreeClassParams};

fn main() -> nstrees::Result<()> {
    let class = TreeClassParams::new(0.45, 0.06)?;
    for t in enumerate(4)?.iter().flatten() {
        let s = stats_with_class(t, &class);
        println!(
            "{:<16} size {} γ {:>3} σ {} θ {} depth {} simple {} short {:?}",
            t.encode(),
            s.size,
            s.factorial,
            s.symmetry,
            s.homogeneity,
            s.depth,
            s.simple,
            s.short
        );
    }
    let z = counts(14)?;
    println!("Z_n = {z:?}");
    let fit = zn_fit(&z)?;
    println!("D = {:.6} (binding n = {})", fit.d, fit.binding_n);
    Ok(())
}
