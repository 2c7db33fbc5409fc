//! Long-time and large-wavevector behaviour of solutions in the critical
//! case, through the majorant
//! `M(k, t) = Σ_{n>=1} C1^n (n+1)^(-3/2) e^{-|k|^2 t/(n+1)} ‖h‖^((n+1)/2)`.

use serde::Serialize;

use super::fit::{linear_fit, LinearFit};
use crate::error::{Error, Result};
use crate::spectral::SpectralField;

/// `C1 ‖h‖^(1/2)`, the per-term ratio of the majorant.
pub fn majorant_ratio(c1: f64, h_norm: f64) -> f64 {
    c1 * h_norm.sqrt()
}

fn check_ratio(c1: f64, h_norm: f64) -> Result<f64> {
    let r = majorant_ratio(c1, h_norm);
    if !(r < 1.0) || !(h_norm > 0.0) {
        return Err(Error::Divergent(format!(
            "majorant ratio C1 ‖h‖^1/2 = {r} must lie in (0, 1)"
        )));
    }
    Ok(r)
}

/// `ln M(k, t)`, summed in log space so that large `|k|^2 t` does not
/// underflow.
pub fn log_majorant(kappa: f64, t: f64, c1: f64, h_norm: f64) -> Result<f64> {
    let r = check_ratio(c1, h_norm)?;
    let (lc, lh) = (c1.ln(), h_norm.ln());
    let x2 = kappa * kappa * t;
    let log_term = |n: f64| n * lc - 1.5 * (n + 1.0).ln() - x2 / (n + 1.0) + 0.5 * (n + 1.0) * lh;
    // the exponent is concave in n with its peak near |k| sqrt(t / L)
    let peak = (kappa * t.sqrt() / (-r.ln()).sqrt()).max(1.0);
    let mut best = f64::NEG_INFINITY;
    let mut terms = Vec::new();
    let mut n = 1.0;
    loop {
        let v = log_term(n);
        terms.push(v);
        best = best.max(v);
        if n > peak && v < best - 50.0 {
            break;
        }
        n += 1.0;
    }
    let s: f64 = terms.iter().map(|v| (v - best).exp()).sum();
    Ok(best + s.ln())
}

pub fn majorant(kappa: f64, t: f64, c1: f64, h_norm: f64) -> Result<f64> {
    log_majorant(kappa, t, c1, h_norm).map(f64::exp)
}

/// Decay rates of `M` in `x = |k| sqrt(t)`. With `L = |ln(C1 ‖h‖^(1/2))|`
/// the exponent `-x^2/m - (m-1) L` peaks at `m = x / sqrt(L)` with value
/// `-2 x sqrt(L) + L`, so the Laplace rate is `2 sqrt(L)`. The rate
/// `2 / sqrt(L)` is kept for comparison with the stated constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaplaceRates {
    pub log_gap: f64,
    /// `2 sqrt(L)`
    pub laplace: f64,
    /// `2 / sqrt(L)`
    pub stated: f64,
}

pub fn laplace_rates(c1: f64, h_norm: f64) -> Result<LaplaceRates> {
    let r = check_ratio(c1, h_norm)?;
    let l = -r.ln();
    Ok(LaplaceRates {
        log_gap: l,
        laplace: 2.0 * l.sqrt(),
        stated: 2.0 / l.sqrt(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MajorantSlope {
    pub fit: LinearFit,
    /// `-slope`
    pub rate: f64,
    pub rates: LaplaceRates,
    pub x: Vec<f64>,
    pub log_m: Vec<f64>,
}

/// Least-squares slope of `ln M` against `x = |k| sqrt(t)` on `[x0, x1]`.
pub fn majorant_slope(c1: f64, h_norm: f64, t: f64, x0: f64, x1: f64, points: usize) -> Result<MajorantSlope> {
    if !(t > 0.0) {
        return Err(Error::InvalidParam(format!("time {t} must be positive")));
    }
    let rates = laplace_rates(c1, h_norm)?;
    let x: Vec<f64> = (0..points)
        .map(|j| x0 + (x1 - x0) * j as f64 / (points - 1) as f64)
        .collect();
    let log_m = x
        .iter()
        .map(|&xi| log_majorant(xi / t.sqrt(), t, c1, h_norm))
        .collect::<Result<Vec<_>>>()?;
    let fit = linear_fit(&x, &log_m)?;
    Ok(MajorantSlope {
        rate: -fit.slope,
        fit,
        rates,
        x,
        log_m,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayFit {
    pub c3: f64,
    pub c4: f64,
    pub fit: LinearFit,
    pub rates: LaplaceRates,
    /// Shell radii and the largest `ln |v|` on each.
    pub shells: Vec<(f64, f64)>,
    /// Second differences of the shell profile are all nonpositive
    /// (up to `1e-9`).
    pub concave: bool,
}

pub const DEFAULT_MIN_SPAN: f64 = 4.0;

/// Fit `|v_t(k)| <= C3 e^{-C4 |k| sqrt(t)}` on the shell maxima of a
/// velocity field at time `t`, ignoring values below `floor`.
pub fn decay_fit(v: &SpectralField, t: f64, c1: f64, h_norm: f64, floor: f64, min_span: f64) -> Result<DecayFit> {
    if !(t > 0.0) {
        return Err(Error::InvalidParam(format!("time {t} must be positive")));
    }
    let rates = laplace_rates(c1, h_norm)?;
    let grid = v.grid();
    let mut shells: Vec<(f64, f64)> = Vec::new();
    for (idx, val) in v.values().iter().enumerate() {
        let kn = grid.norms[idx];
        let a = crate::spectral::vnorm(val);
        if kn == 0.0 || !(a > floor) {
            continue;
        }
        match shells.iter_mut().find(|s| (s.0 - kn).abs() <= 1e-9 * kn) {
            Some(s) => s.1 = s.1.max(a.ln()),
            None => shells.push((kn, a.ln())),
        }
    }
    shells.sort_by(|a, b| a.0.total_cmp(&b.0));
    if shells.len() < 3 || shells.last().unwrap().0 < min_span * shells[0].0 {
        return Err(Error::InsufficientData(format!(
            "{} resolved shells, |k| span {:.3}; need 3 shells and span {min_span}",
            shells.len(),
            shells.last().map_or(0.0, |s| s.0) / shells.first().map_or(1.0, |s| s.0)
        )));
    }
    let x: Vec<f64> = shells.iter().map(|s| s.0 * t.sqrt()).collect();
    let y: Vec<f64> = shells.iter().map(|s| s.1).collect();
    let fit = linear_fit(&x, &y)?;
    let c4 = -fit.slope;
    let c3 = x.iter().zip(&y).map(|(xi, yi)| yi + c4 * xi).fold(f64::NEG_INFINITY, f64::max).exp();
    let concave = shells.windows(3).all(|w| {
        let (h1, h2) = (w[1].0 - w[0].0, w[2].0 - w[1].0);
        let d = (w[2].1 - w[1].1) / h2 - (w[1].1 - w[0].1) / h1;
        d <= 1e-9
    });
    Ok(DecayFit {
        c3,
        c4,
        fit,
        rates,
        shells,
        concave,
    })
}
