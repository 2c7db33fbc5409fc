//! The convolution integral I(k) in its regimes, the constant A' and the
//! short-time weight bound.

use nstrees::bounds::{appendix_i_radial, estimate_a_prime, geomspace, lemma1_envelope, loglog_slope};
use nstrees::spectral::{lemma1_nt, GridSpec};

fn main() -> nstrees::Result<()> {
    for (alpha, omega, k0, k1) in [(2.0, 3.0, 0.05, 0.5), (2.5, 3.0, 0.05, 0.5), (2.0, 2.5, 2.0, 10.0), (2.0, 3.5, 10.0, 100.0)] {
        let k = geomspace(k0, k1, 12);
        let i = k.iter().map(|&x| appendix_i_radial(x, alpha, omega)).collect::<nstrees::Result<Vec<_>>>()?;
        println!("α = {alpha} ω = {omega}: log-log slope on [{k0}, {k1}] = {:.4}", loglog_slope(&k, &i)?.slope);
    }
    for alpha in [2.0, 2.5, 2.9] {
        let a = estimate_a_prime(alpha)?;
        println!("A'(α = {alpha}) = {:.6} (halving change {:.2e})", a.value, a.halving_change);
    }
    let spec = GridSpec::new(5.0, 11, 2.0, 33, 2.5)?;
    for t in [0.1, 1.0, 2.0] {
        println!("t = {t}: lattice N_t = {:.4e}, continuum bound {:.4e}", lemma1_nt(&spec, t)?, lemma1_envelope(2.5, t)?);
    }
    Ok(())
}
