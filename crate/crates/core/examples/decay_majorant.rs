//! The analytic majorant of the critical series: decay in |k| sqrt(t) and
//! in t at fixed k.

use nstrees::bounds::{laplace_rates, majorant, majorant_slope};

fn main() -> nstrees::Result<()> {
    let c1 = 0.84;
    let h = 0.8 / (c1 * c1);
    let rates = laplace_rates(c1, h)?;
    let s = majorant_slope(c1, h, 1.0, 5.0, 15.0, 41)?;
    println!(
        "L = {:.4}: fitted rate {:.4}, 2 sqrt(L) = {:.4}, 2/sqrt(L) = {:.4}, max residual {:.2e}",
        rates.log_gap, s.rate, rates.laplace, rates.stated, s.fit.max_residual
    );
    for t in [0.01, 0.1, 1.0, 10.0, 100.0, 1000.0] {
        println!("M(|k| = 2, t = {t:>6}) = {:.4e}", majorant(2.0, t, c1, h)?);
    }
    Ok(())
}
