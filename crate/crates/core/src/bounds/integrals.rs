//! Convolution integrals of the weight `psi` and the elementary
//! one-dimensional inequalities used by the per-tree estimate.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::report::BoundReport;
use crate::error::{Error, Result};
use crate::quad::{gauss_kronrod, tanh_sinh, tanh_sinh_tail};
use crate::spectral::norm3;

const REL_TOL: f64 = 1e-11;

/// `psi(r) = r^-alpha` for `r <= 1` and `r^-omega` beyond.
pub fn psi(r: f64, alpha: f64, omega: f64) -> f64 {
    if r <= 1.0 {
        r.powf(-alpha)
    } else {
        r.powf(-omega)
    }
}

/// `∫_{s0}^{s0+w} s^(p-1) ds`
fn power_segment(s0: f64, w: f64, p: f64) -> f64 {
    let l = (w / s0).ln_1p();
    if p == 0.0 {
        l
    } else {
        s0.powf(p) * (p * l).exp_m1() / p
    }
}

/// `Psi(lo + gap) - Psi(lo)` without cancellation. `lo_m1 = lo - 1` is
/// passed separately since it may be known more accurately than `lo`.
fn big_psi_diff(lo: f64, gap: f64, lo_m1: f64, alpha: f64, omega: f64) -> f64 {
    let hi = lo + gap;
    if hi <= 1.0 {
        power_segment(lo, gap, 2.0 - alpha)
    } else if lo >= 1.0 {
        power_segment(lo, gap, 2.0 - omega)
    } else {
        power_segment(lo, -lo_m1, 2.0 - alpha) + power_segment(1.0, lo_m1 + gap, 2.0 - omega)
    }
}

fn check_exponents(alpha: f64, omega: f64) -> Result<()> {
    if !(alpha < 3.0 && alpha.is_finite()) {
        return Err(Error::InvalidParam(format!("alpha {alpha} must be < 3 for convergence at the singularities")));
    }
    if !(omega > 1.5 && omega.is_finite()) {
        return Err(Error::InvalidParam(format!("omega {omega} must exceed 3/2 for convergence at infinity")));
    }
    Ok(())
}

/// Which part of the `k'` domain to integrate over. Radii are `r = |k'|`
/// and `rho = |k - k'|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Full,
    /// `r < rho`
    NearOrigin,
    /// `rho < r`
    NearK,
}

/// `∫ dk' psi(k - k') psi(k')` over `region`, with the balls of radius
/// `delta` around `0` and `k` removed (`delta = 0` keeps everything).
///
/// The angular integral is done in closed form,
/// `(2π / κ) ∫ r psi(r) [Psi(ρ_max) - Psi(ρ_min)] dr`, and the radial one by
/// tanh-sinh on pieces split at every kink of the integrand.
pub fn psi_convolution(kappa: f64, alpha: f64, omega: f64, delta: f64, region: Region) -> Result<f64> {
    check_exponents(alpha, omega)?;
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidParam(format!("|k| = {kappa} must be positive")));
    }
    if !(0.0..0.5 * kappa).contains(&delta) {
        return Err(Error::InvalidParam(format!("excision radius {delta} must lie in [0, |k|/2)")));
    }
    // rho range for fixed r, given s = κ - r exactly: (lo, gap, lo - 1).
    // Widths are formed from r and κ directly; κ + r may round to κ.
    let bounds = move |r: f64, s: f64| -> Option<(f64, f64, f64)> {
        let dk = s.abs();
        let lo_m1_dk = if s >= 0.0 { (kappa - 1.0) - r } else { (r - 1.0) - kappa };
        let (lo, lo_m1, full_gap) = if dk >= delta {
            (dk, lo_m1_dk, 2.0 * kappa.min(r))
        } else {
            (delta, delta - 1.0, kappa + r - delta)
        };
        let out = match region {
            Region::Full => (lo, full_gap, lo_m1),
            Region::NearOrigin if r >= lo => (r, kappa, r - 1.0),
            Region::NearOrigin => (lo, full_gap, lo_m1),
            Region::NearK => {
                let gap = if dk < delta {
                    r - delta
                } else if s >= 0.0 {
                    2.0 * r - kappa
                } else {
                    kappa
                };
                (lo, gap, lo_m1)
            }
        };
        (out.1 > 0.0).then_some(out)
    };
    let integrand = move |r: f64, s: f64| -> f64 {
        match bounds(r, s) {
            Some((lo, gap, lo_m1)) => r * psi(r, alpha, omega) * big_psi_diff(lo, gap, lo_m1, alpha, omega),
            None => 0.0,
        }
    };
    let plain = move |r: f64| integrand(r, kappa - r);

    let mut cuts = vec![kappa, 1.0, (kappa - 1.0).abs(), kappa + 1.0, 0.5 * kappa];
    if delta > 0.0 {
        cuts.extend([delta, kappa - delta, kappa + delta]);
    }
    cuts.retain(|&c| c > delta);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs());

    // pieces touching r = κ are integrated in u = |r - κ| so that the
    // singular factor sees u itself rather than a rounded difference
    let mut total = 0.0;
    let mut a = delta;
    for &b in &cuts {
        total += if b == kappa {
            tanh_sinh(|u| integrand(kappa - u, u), 0.0, kappa - a, REL_TOL).value
        } else if a == kappa {
            tanh_sinh(|u| integrand(kappa + u, -u), 0.0, b - kappa, REL_TOL).value
        } else {
            tanh_sinh(plain, a, b, REL_TOL).value
        };
        a = b;
    }
    total += tanh_sinh_tail(plain, a, REL_TOL).value;
    Ok(2.0 * PI / kappa * total)
}

/// `I(k) = ∫ dk' psi(k - k') psi(k')` for `k != 0`.
pub fn appendix_i(k: &[f64; 3], alpha: f64, omega: f64) -> Result<f64> {
    appendix_i_radial(norm3(k), alpha, omega)
}

pub fn appendix_i_radial(kappa: f64, alpha: f64, omega: f64) -> Result<f64> {
    psi_convolution(kappa, alpha, omega, 0.0, Region::Full)
}

#[derive(Debug, Clone, Serialize)]
pub struct APrimeEstimate {
    pub alpha: f64,
    /// Twice-extrapolated value of `2 ∫ dk' |e - k'|^-α |k'|^-α`.
    pub value: f64,
    /// Excision radii used, largest first.
    pub radii: Vec<f64>,
    /// Excised values at each radius.
    pub excised: Vec<f64>,
    /// First-level Richardson values from consecutive radius pairs.
    pub extrapolated: Vec<f64>,
    /// Relative change of the first-level value under the last halving.
    pub halving_change: f64,
    /// Both half-space integrals `r < rho` and `rho < r`, doubled.
    pub half_spaces: (f64, f64),
}

pub const A_PRIME_RADIUS: f64 = 0.1;

/// `A' = 2 ∫ dk' |e - k'|^-α |k'|^-α` for a unit vector `e`, from excised
/// integrals at radii `δ, δ/2, δ/4` extrapolated with the excised-mass
/// exponent `3 - α`.
pub fn estimate_a_prime(alpha: f64) -> Result<APrimeEstimate> {
    if !(2.0..3.0).contains(&alpha) {
        return Err(Error::InvalidParam(format!("alpha {alpha} not in [2, 3)")));
    }
    let radii: Vec<f64> = (0..3).map(|j| A_PRIME_RADIUS / f64::powi(2.0, j)).collect();
    let excised = radii
        .iter()
        .map(|&d| psi_convolution(1.0, alpha, alpha, d, Region::Full).map(|v| 2.0 * v))
        .collect::<Result<Vec<_>>>()?;
    let f = 2f64.powf(3.0 - alpha);
    let extrapolated: Vec<f64> = excised.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
    // the linear term of the integrand averages out on the excised spheres,
    // so the next correction is O(δ^(5-α))
    let f2 = 2f64.powf(5.0 - alpha);
    let value = (f2 * extrapolated[1] - extrapolated[0]) / (f2 - 1.0);
    let halving_change = (extrapolated[1] - extrapolated[0]).abs() / value;
    let near = 2.0 * psi_convolution(1.0, alpha, alpha, 0.0, Region::NearOrigin)?;
    let far = 2.0 * psi_convolution(1.0, alpha, alpha, 0.0, Region::NearK)?;
    Ok(APrimeEstimate {
        alpha,
        value,
        radii,
        excised,
        extrapolated,
        halving_change,
        half_spaces: (near, far),
    })
}

/// `sup_{x > 0} x^(2-α) (1 - e^{-x^2})`
pub fn lemma1_shape_max(alpha: f64) -> Result<f64> {
    if !(2.0..3.0).contains(&alpha) {
        return Err(Error::InvalidParam(format!("alpha {alpha} not in [2, 3)")));
    }
    if alpha == 2.0 {
        return Ok(1.0);
    }
    // stationary point in y = x^2: (2-α)(1 - e^-y) + 2y e^-y = 0
    let g = |y: f64| (2.0 - alpha) * (-(-y).exp_m1()) + 2.0 * y * (-y).exp();
    let (mut lo, mut hi) = (1e-6, 1.0);
    while g(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let y = 0.5 * (lo + hi);
    Ok(y.powf(1.0 - alpha / 2.0) * (-(-y).exp_m1()))
}

/// Continuum value of `sup_k |k|^(α-1) (1 - e^{-|k|^2 t}) I(k)` for
/// `ψ = |k|^-α`, namely `I(1) t^(ε/2) sup_x x^(2-α)(1 - e^{-x^2})`.
pub fn lemma1_envelope(alpha: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    Ok(appendix_i_radial(1.0, alpha, alpha)? * lemma1_shape_max(alpha)? * t.powf((alpha - 2.0) / 2.0))
}

/// `∫_0^1 e^{-a(1-u)} u^b du` against `1 ∧ (a+b)^-1`, the right side taken
/// as 1 when `a + b = 0`.
pub fn lemma4_check(a: f64, b: f64) -> BoundReport {
    let lhs = gauss_kronrod(|u| (-a * (1.0 - u)).exp() * u.powf(b), 0.0, 1.0, 1e-14, 1e-12);
    let s = a + b;
    let rhs = if s <= 1.0 { 1.0 } else { 1.0 / s };
    BoundReport::upper("lemma4", lhs.value, rhs, 1e-12 * rhs, format!("a = {a}, b = {b}"))
}

/// Lower bound `|k - k'|^2/(p+1) + |k'|^2/(q+1) >= |k|^2/(p+q+2)` over
/// `samples` random `k'` plus `0`, `k` and the minimizer
/// `k' = k (q+1)/(p+q+2)`, where equality must hold to `1e-12`.
pub fn exponent_min_check(k: &[f64; 3], p: u32, q: u32, samples: usize, seed: u64) -> Result<BoundReport> {
    if p < 1 || q < 1 {
        return Err(Error::InvalidParam(format!("p = {p}, q = {q} must be >= 1")));
    }
    let (pf, qf) = (p as f64 + 1.0, q as f64 + 1.0);
    let k2 = k.iter().map(|x| x * x).sum::<f64>();
    let target = k2 / (pf + qf);
    let expo = |kp: &[f64; 3]| -> f64 {
        let mut a = 0.0;
        let mut b = 0.0;
        for i in 0..3 {
            a += (k[i] - kp[i]).powi(2);
            b += kp[i] * kp[i];
        }
        a / pf + b / qf
    };
    let s = qf / (pf + qf);
    let at_min = expo(&[k[0] * s, k[1] * s, k[2] * s]);
    let scale = norm3(k).max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut least = expo(&[0.0; 3]).min(expo(k));
    for _ in 0..samples {
        let kp = [
            rng.random_range(-2.0..2.0) * scale,
            rng.random_range(-2.0..2.0) * scale,
            rng.random_range(-2.0..2.0) * scale,
        ];
        least = least.min(expo(&kp));
    }
    let equality = (at_min - target).abs() <= 1e-12 * target.max(f64::MIN_POSITIVE);
    let mut rep = BoundReport::upper(
        "exponent_min",
        target,
        least.min(at_min),
        1e-12 * target,
        format!("k = {k:?}, p = {p}, q = {q}, minimizer value {at_min:e}"),
    );
    rep.pass &= equality;
    Ok(rep)
}
