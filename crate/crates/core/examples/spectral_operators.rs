//! Build a lattice, draw a divergence-free datum and apply the heat
//! semigroup and the bilinear operators.

use nstrees::spectral::io::{write_axis_slice, Axis};
use nstrees::spectral::{
    bilinear_b, calb, make_initial, semigroup_apply, sup_norm, Grid, GridSpec, InitialKind, Trajectory,
};

fn main() -> nstrees::Result<()> {
    let grid = Grid::new(GridSpec::new(3.0, 9, 1.0, 17, 2.0)?)?;
    let h = make_initial(&grid, InitialKind::RandomDivfree, 0.1, 7)?;
    println!("‖h‖ = {:.4}, divergence defect {:.2e}", sup_norm(&h), h.divergence_defect());

    let heat = semigroup_apply(&h, 1.0)?;
    println!("‖e^(tΔ) h‖ at t = 1: {:.4e}", sup_norm(&heat));

    let b = bilinear_b(&h, &h)?;
    println!("‖B(h, h)‖ = {:.4e}, divergence defect {:.2e}", sup_norm(&b), b.divergence_defect());

    let free = Trajectory::semigroup(&h);
    let duhamel = calb(&free, &free)?;
    let profile = duhamel.sup_profile();
    println!("sup_k |𝓑(Sh, Sh)(t)| at t = 0, T/2, T: {:.3e} {:.3e} {:.3e}", profile[0], profile[8], profile[16]);

    println!("slice of B(h, h) along the x axis:");
    write_axis_slice(std::io::stdout().lock(), &b, Axis::X)?;
    Ok(())
}
