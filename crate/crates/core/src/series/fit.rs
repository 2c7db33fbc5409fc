use serde::Serialize;

use super::phi::PhiCache;
use crate::bounds::{envelope_at, linear_fit, simple_class_summand, BoundParams, BoundReport};
use crate::error::{Error, Result};
use crate::spectral::{sup_norm, vnorm, GridSpec, SpectralField, Trajectory};
use crate::treelib::{enumerate, Tree};

/// Time node at `t`, or an error when `t` is not on the grid.
pub fn time_node(spec: &GridSpec, t: f64) -> Result<usize> {
    let j = spec.nearest_time_index(t);
    if (spec.time(j) - t).abs() > 1e-9 * t.abs().max(1.0) {
        return Err(Error::InvalidParam(format!(
            "t = {t} is not a time node (nearest {})",
            spec.time(j)
        )));
    }
    Ok(j)
}

/// Largest `ln(|phi_t(τ)(k)| / envelope)` of one tree, with `A = 1`.
#[derive(Debug, Clone, Serialize)]
pub struct TreeRatio {
    pub encoding: String,
    pub size: usize,
    pub log_ratio: f64,
    pub time: f64,
    pub k: [f64; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeFit {
    pub epsilon: f64,
    /// Smallest `A` with the envelope holding at every sample.
    pub a_fit: f64,
    /// Least squares `ln A = Σ n L_τ / Σ n^2` over sizes 2..=max.
    pub a_ls: f64,
    /// `L_τ - |τ| ln A_ls`
    pub residuals: Vec<f64>,
    pub rms: f64,
    pub trees: Vec<TreeRatio>,
    pub binding: String,
}

fn unit_params(alpha: f64, h_norm: f64) -> Result<BoundParams> {
    BoundParams::new(alpha, 1.0, 1.0, 1.0, 1.0, h_norm)
}

fn tree_ratio(t: &Tree, traj: &Trajectory, nodes: &[usize], p: &BoundParams) -> TreeRatio {
    let grid = traj.grid();
    let spec = grid.spec();
    let mut best = TreeRatio {
        encoding: t.encode().to_string(),
        size: t.size(),
        log_ratio: f64::NEG_INFINITY,
        time: f64::NAN,
        k: [0.0; 3],
    };
    for &j in nodes {
        let time = spec.time(j);
        for (idx, v) in traj.frame(j).values().iter().enumerate() {
            let a = vnorm(v);
            if a == 0.0 {
                continue;
            }
            let r = a.ln() - envelope_at(t, time, grid.norms[idx], p).ln();
            if r > best.log_ratio {
                best.log_ratio = r;
                best.time = time;
                best.k = grid.wavevectors[idx];
            }
        }
    }
    best
}

/// Fit the per-vertex constant of the tree estimate on all trees with
/// `|τ| <= max_size` at the given times.
pub fn fit_envelope(cache: &PhiCache, max_size: usize, times: &[f64]) -> Result<EnvelopeFit> {
    let h = cache.h();
    let spec = h.grid().spec().clone();
    let h_norm = sup_norm(h);
    if h_norm == 0.0 {
        return Err(Error::InsufficientData("zero datum carries no envelope information".into()));
    }
    let nodes = times.iter().map(|&t| time_node(&spec, t)).collect::<Result<Vec<_>>>()?;
    let p = unit_params(spec.alpha, h_norm)?;
    let mut trees = Vec::new();
    for group in enumerate(max_size)? {
        for t in group {
            let traj = cache.phi(&t)?;
            trees.push(tree_ratio(&t, &traj, &nodes, &p));
        }
    }
    let (ln_a, binding) = trees
        .iter()
        .map(|r| (r.log_ratio / r.size as f64, r.encoding.clone()))
        .fold((f64::NEG_INFINITY, String::new()), |b, c| if c.0 > b.0 { c } else { b });
    let fitted: Vec<&TreeRatio> = trees.iter().filter(|r| r.size >= 2 && r.log_ratio.is_finite()).collect();
    let num: f64 = fitted.iter().map(|r| r.size as f64 * r.log_ratio).sum();
    let den: f64 = fitted.iter().map(|r| (r.size * r.size) as f64).sum();
    let ln_ls = if den > 0.0 { num / den } else { ln_a };
    let residuals: Vec<f64> = fitted.iter().map(|r| r.log_ratio - r.size as f64 * ln_ls).collect();
    let rms = (residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len().max(1) as f64).sqrt();
    Ok(EnvelopeFit {
        epsilon: spec.epsilon(),
        a_fit: ln_a.exp(),
        a_ls: ln_ls.exp(),
        residuals,
        rms,
        trees,
        binding,
    })
}

/// Largest `|phi| / envelope` over all trees, times and wavevectors, for a
/// given `A`. The report passes when it is at most 1.
pub fn envelope_report(cache: &PhiCache, max_size: usize, times: &[f64], a_fit: f64) -> Result<BoundReport> {
    let h = cache.h();
    let spec = h.grid().spec().clone();
    let nodes = times.iter().map(|&t| time_node(&spec, t)).collect::<Result<Vec<_>>>()?;
    let p = BoundParams::new(spec.alpha, a_fit, 1.0, 1.0, 1.0, sup_norm(h))?;
    let mut worst: Option<TreeRatio> = None;
    for group in enumerate(max_size)? {
        for t in group {
            let r = tree_ratio(&t, cache.phi(&t)?.as_ref(), &nodes, &p);
            if worst.as_ref().is_none_or(|w| r.log_ratio > w.log_ratio) {
                worst = Some(r);
            }
        }
    }
    let w = worst.ok_or_else(|| Error::InsufficientData("no trees".into()))?;
    Ok(BoundReport::upper(
        "theorem1.envelope",
        w.log_ratio.exp(),
        1.0,
        1e-12,
        format!("tree {} t = {} k = {:?} A = {a_fit:.6}", w.encoding, w.time, w.k),
    ))
}

/// Decay rate of the shell maxima of `ln |f(k)|` in `|k|^2`, fitted on the
/// outer half of the shells.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileRate {
    pub time: f64,
    pub size: usize,
    pub rate: f64,
    /// `t / (|τ| + 1)`
    pub envelope_rate: f64,
    pub ratio: f64,
    pub shells: usize,
}

pub fn profile_rate(f: &SpectralField, time: f64, size: usize) -> Result<ProfileRate> {
    let grid = f.grid();
    let mut shells: Vec<(f64, f64)> = Vec::new();
    for (idx, v) in f.values().iter().enumerate() {
        let k2 = grid.norms[idx] * grid.norms[idx];
        let a = vnorm(v);
        if k2 == 0.0 || a == 0.0 {
            continue;
        }
        match shells.iter_mut().find(|s| (s.0 - k2).abs() <= 1e-9 * k2) {
            Some(s) => s.1 = s.1.max(a.ln()),
            None => shells.push((k2, a.ln())),
        }
    }
    shells.sort_by(|a, b| a.0.total_cmp(&b.0));
    let outer = &shells[shells.len() / 2..];
    if outer.len() < 3 {
        return Err(Error::InsufficientData(format!("{} shells", shells.len())));
    }
    let x: Vec<f64> = outer.iter().map(|s| s.0).collect();
    let y: Vec<f64> = outer.iter().map(|s| s.1).collect();
    let rate = -linear_fit(&x, &y)?.slope;
    let envelope_rate = time / (size as f64 + 1.0);
    Ok(ProfileRate {
        time,
        size,
        rate,
        envelope_rate,
        ratio: rate / envelope_rate,
        shells: outer.len(),
    })
}

/// [`profile_rate`] for every tree up to `max_size` at every given time.
pub fn profile_rates(cache: &PhiCache, max_size: usize, times: &[f64]) -> Result<Vec<(String, ProfileRate)>> {
    let spec = cache.h().grid().spec().clone();
    let mut out = Vec::new();
    for group in enumerate(max_size)? {
        for t in group {
            let traj = cache.phi(&t)?;
            for &time in times {
                let j = time_node(&spec, time)?;
                out.push((t.encode().to_string(), profile_rate(traj.frame(j), time, t.size())?));
            }
        }
    }
    Ok(out)
}

/// Fitted constant of the simple-tree majorant and the measured sizes.
#[derive(Debug, Clone, Serialize)]
pub struct SimpleClassFit {
    pub time: f64,
    pub b: f64,
    pub sizes: Vec<usize>,
    /// `|phi_t([...[o]...])(k)|` sup over `k`, per size.
    pub measured: Vec<f64>,
    /// Majorant summand at the fitted `B`, sup over `k`.
    pub majorant: Vec<f64>,
}

/// Smallest `B` with `|phi_t(τ)(k)| <= summand(|τ|, t, |k|)` for the path
/// trees `τ` of sizes `1..=max_size`.
pub fn fit_simple_class(cache: &PhiCache, max_size: usize, time: f64) -> Result<SimpleClassFit> {
    let h = cache.h();
    let grid = h.grid().clone();
    let spec = grid.spec();
    let j = time_node(spec, time)?;
    let (eps, h_norm) = (spec.epsilon(), sup_norm(h));
    let mut ln_b = f64::NEG_INFINITY;
    let mut sizes = Vec::new();
    let mut measured = Vec::new();
    for n in 1..=max_size {
        let f = cache.phi(&Tree::path(n))?;
        let frame = f.frame(j);
        for (idx, v) in frame.values().iter().enumerate() {
            let a = vnorm(v);
            if a > 0.0 {
                let unit = simple_class_summand(n, time, grid.norms[idx], 1.0, eps, h_norm);
                ln_b = ln_b.max((a.ln() - unit.ln()) / n as f64);
            }
        }
        sizes.push(n);
        measured.push(sup_norm(frame));
    }
    let b = ln_b.exp();
    let majorant = sizes
        .iter()
        .map(|&n| {
            grid.norms
                .iter()
                .map(|&kn| simple_class_summand(n, time, kn, b, eps, h_norm))
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(SimpleClassFit {
        time,
        b,
        sizes,
        measured,
        majorant,
    })
}
