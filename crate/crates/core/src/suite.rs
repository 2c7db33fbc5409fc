//! The verification suite: every estimate as a list of [`BoundReport`]s.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounds::{
    appendix_i_radial, estimate_a_prime, exponent_min_check, gamma_class_fit, geomspace, lemma1_envelope,
    lemma4_check, loglog_slope, zn_fit, BoundReport,
};
use crate::error::{Error, Result};
use crate::series::{envelope_report, fit_envelope, picard, profile_rates, tree_sum, Mutation, PhiCache};
use crate::spectral::{lemma1_nt_profile, make_initial, Grid, GridSpec, InitialKind};
use crate::treelib::{classify, counts, enumerate, Tree, TreeClassParams};

/// Report families of the suite, in run order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Lemma2,
    Theorem1,
    Lemma4,
    ExponentMin,
    AppendixA,
    ZnFit,
    Lemma3,
    APrime,
    Lemma1,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Lemma2,
        Family::Theorem1,
        Family::Lemma4,
        Family::ExponentMin,
        Family::AppendixA,
        Family::ZnFit,
        Family::Lemma3,
        Family::APrime,
        Family::Lemma1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Lemma2 => "lemma2",
            Family::Theorem1 => "theorem1",
            Family::Lemma4 => "lemma4",
            Family::ExponentMin => "exponent_min",
            Family::AppendixA => "appendix_a",
            Family::ZnFit => "zn_fit",
            Family::Lemma3 => "lemma3",
            Family::APrime => "a_prime",
            Family::Lemma1 => "lemma1",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParam(format!("unknown report family {s:?}")))
    }
}

/// Inputs of a suite run.
#[derive(Debug, Clone)]
pub struct SuiteInput {
    pub spec: GridSpec,
    pub kind: InitialKind,
    pub amplitude: f64,
    pub seed: u64,
    pub size_cap: usize,
    pub class: TreeClassParams,
    pub mutation: Mutation,
}

/// Relative sup distance between the depth-truncated tree sum and the
/// Picard iterate, for `n = 1..=max_n`.
pub fn lemma2_reports(cache: &PhiCache, max_n: usize, tol: f64) -> Result<Vec<BoundReport>> {
    (1..=max_n)
        .map(|n| {
            let p = picard(cache.h(), n)?;
            let s = tree_sum(cache, n as i64 - 1)?;
            let scale = p.sup_norm();
            let rel = if scale == 0.0 { s.sup_norm() } else { s.sub(&p)?.sup_norm() / scale };
            Ok(BoundReport::upper(
                "lemma2",
                rel,
                tol,
                0.0,
                format!("depth {} vs picard {n}", n as i64 - 1),
            ))
        })
        .collect()
}

/// `|slope - target| / |target|` of `ln I` against `ln |k|` on `[k0, k1]`.
pub fn appendix_a_slope(alpha: f64, omega: f64, k0: f64, k1: f64, target: f64, tol: f64) -> Result<BoundReport> {
    let ks = geomspace(k0, k1, 12);
    let is = ks
        .iter()
        .map(|&k| appendix_i_radial(k, alpha, omega))
        .collect::<Result<Vec<_>>>()?;
    let fit = loglog_slope(&ks, &is)?;
    Ok(BoundReport::upper(
        "appendix_a",
        (fit.slope - target).abs() / target.abs(),
        tol,
        0.0,
        format!(
            "alpha = {alpha}, omega = {omega}, |k| in [{k0}, {k1}]: slope {:.4} vs {target}",
            fit.slope
        ),
    ))
}

/// The four regime checks: small `|k|` for `α = 2, 2.5` and large `|k|`
/// for `ω = 2.5, 3.5`.
pub fn appendix_a_reports() -> Result<Vec<BoundReport>> {
    Ok(vec![
        appendix_a_slope(2.0, 3.0, 0.05, 0.5, 3.0 - 2.0 * 2.0, 0.10)?,
        appendix_a_slope(2.5, 3.0, 0.05, 0.5, 3.0 - 2.0 * 2.5, 0.10)?,
        appendix_a_slope(2.0, 2.5, 2.0, 10.0, 3.0 - 2.0 * 2.5, 0.10)?,
        appendix_a_slope(2.0, 3.5, 10.0, 100.0, -3.5, 0.10)?,
    ])
}

pub fn lemma4_reports() -> Vec<BoundReport> {
    let grid = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0];
    grid.iter()
        .flat_map(|&a| grid.iter().map(move |&b| lemma4_check(a, b)))
        .collect()
}

pub fn exponent_min_reports(seed: u64) -> Result<Vec<BoundReport>> {
    let k = [1.3, -0.4, 0.7];
    let mut out = Vec::new();
    for p in 1..=5 {
        for q in 1..=5 {
            out.push(exponent_min_check(&k, p, q, 2000, seed)?);
        }
    }
    Ok(out)
}

/// `Z_n <= D^n (n+1)^-3/2` at the fitted `D`, and the counting recursion.
pub fn zn_reports(max_size: usize) -> Result<Vec<BoundReport>> {
    let z = counts(max_size)?;
    let fit = zn_fit(&z)?;
    let worst = fit.ratios.iter().copied().fold(0.0, f64::max);
    let mut out = vec![BoundReport::upper(
        "zn_fit",
        worst,
        1.0,
        1e-12,
        format!("D = {:.6}, binding n = {}", fit.d, fit.binding_n),
    )];
    // Z_{n+1} <= Z_n + Σ_{n1 + n2 = n} Z_n1 Z_n2
    let mut ok = true;
    let mut detail = String::new();
    for n in 1..z.len() {
        let pairs: usize = (1..n).map(|a| z[a - 1] * z[n - a - 1]).sum();
        if z[n] > z[n - 1] + pairs {
            ok = false;
            detail = format!("fails at n = {n}");
        }
    }
    out.push(BoundReport::flag(
        "zn_fit",
        ok,
        if ok { format!("recursion holds for n < {}", z.len()) } else { detail },
    ));
    Ok(out)
}

/// Simple trees grow super-exponentially in `γ`; short trees admit the
/// two-sided exponential envelope.
pub fn lemma3_reports(class: &TreeClassParams, simple_max: usize, short_max: usize) -> Result<Vec<BoundReport>> {
    let simple: Vec<Tree> = (1..=simple_max).map(Tree::path).collect();
    let all = enumerate(short_max)?;
    let short: Vec<Tree> = all.into_iter().flatten().filter(|t| classify(t, class).1).collect();
    let fs = gamma_class_fit(&simple, class)?;
    let fh = gamma_class_fit(&short, class)?;
    Ok(vec![
        BoundReport::flag(
            "lemma3",
            fs.super_exponential,
            format!("simple trees: local rates {:?}", round(&fs.local_rates)),
        ),
        BoundReport::flag(
            "lemma3",
            !fh.super_exponential,
            format!(
                "short trees ({} members, sizes {:?}): D1 = {:.4}, D2 = {:.4}, D3 = {:.4}, D4 = {:.4}",
                short.len(),
                fh.sizes,
                fh.d1,
                fh.d2,
                fh.d3,
                fh.d4
            ),
        ),
    ])
}

fn round(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| (x * 1e4).round() / 1e4).collect()
}

/// Finite positive values and half-space agreement for `α = 2, 2.5, 2.9`,
/// and stability under halving the excision radius at `α = 2.5`.
pub fn a_prime_reports() -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for a in [2.0, 2.5, 2.9] {
        let e = estimate_a_prime(a)?;
        out.push(BoundReport::flag(
            "a_prime",
            e.value.is_finite() && e.value > 0.0,
            format!("alpha = {a}: A' = {:.8}", e.value),
        ));
        let (near, far) = e.half_spaces;
        out.push(BoundReport::upper(
            "a_prime",
            (near - far).abs() / near.abs().max(far.abs()),
            1e-8,
            0.0,
            format!("alpha = {a}: half spaces {near:.12} and {far:.12}"),
        ));
        if a == 2.5 {
            out.push(BoundReport::upper(
                "a_prime",
                e.halving_change,
                0.01,
                0.0,
                format!("alpha = {a}: relative change under halving the excision radius"),
            ));
        }
    }
    Ok(out)
}

/// Lattice `N_t` against its continuum value at every time node.
pub fn lemma1_reports(spec: &GridSpec) -> Result<Vec<BoundReport>> {
    let times = spec.times();
    let nt = lemma1_nt_profile(spec, &times)?;
    let mut worst = (f64::NEG_INFINITY, 0.0, 0.0, 0.0);
    for (&t, &v) in times.iter().zip(&nt) {
        let b = lemma1_envelope(spec.alpha, t)?;
        if v - b > worst.0 {
            worst = (v - b, t, v, b);
        }
    }
    let (_, t, v, b) = worst;
    Ok(vec![BoundReport::upper(
        "lemma1",
        v,
        b,
        1e-9 * b,
        format!("alpha = {}, t = {t}", spec.alpha),
    )])
}

/// Fitted envelope on all positive time nodes, then the shape check at the
/// mid and final time: the outer-shell decay rate must reach `1 - tol` of
/// `t/(|τ|+1)`.
pub fn theorem1_reports(cache: &PhiCache, max_size: usize, tol: f64) -> Result<Vec<BoundReport>> {
    let spec = cache.h().grid().spec().clone();
    let times: Vec<f64> = spec.times().into_iter().skip(1).collect();
    let fit = fit_envelope(cache, max_size, &times)?;
    let mut out = vec![envelope_report(cache, max_size, &times, fit.a_fit)?];
    let sample = [spec.time(spec.time_nodes / 2), spec.time_horizon];
    let rates = profile_rates(cache, max_size, &sample)?;
    let worst = rates
        .iter()
        .min_by(|a, b| a.1.ratio.total_cmp(&b.1.ratio))
        .ok_or_else(|| Error::InsufficientData("no profile rates".into()))?;
    out.push(BoundReport::upper(
        "theorem1",
        1.0 - tol,
        worst.1.ratio,
        0.0,
        format!(
            "slowest decay: tree {} at t = {}, rate {:.4} vs t/(|τ|+1) = {:.4}; A_fit = {:.5}, A_ls = {:.5} (rms {:.3})",
            worst.0, worst.1.time, worst.1.rate, worst.1.envelope_rate, fit.a_fit, fit.a_ls, fit.rms
        ),
    ));
    Ok(out)
}

/// Run the selected families (all when `only` is empty).
pub fn run_suite(input: &SuiteInput, only: &[Family]) -> Result<Vec<BoundReport>> {
    input.spec.validate()?;
    let selected: Vec<Family> = if only.is_empty() {
        Family::ALL.to_vec()
    } else {
        Family::ALL.into_iter().filter(|f| only.contains(f)).collect()
    };
    let needs_field = selected.iter().any(|f| matches!(f, Family::Lemma2 | Family::Theorem1));
    let cache = if needs_field {
        let grid = Grid::new(input.spec.clone())?;
        let h = make_initial(&grid, input.kind, input.amplitude, input.seed)?;
        Some(PhiCache::with_mutation(&h, input.mutation))
    } else {
        None
    };
    let mut out = Vec::new();
    for f in selected {
        log::info!("running {f}");
        let reports = match f {
            Family::Lemma2 => lemma2_reports(cache.as_ref().expect("field"), 3, 1e-10)?,
            Family::Theorem1 => theorem1_reports(cache.as_ref().expect("field"), input.size_cap, 0.15)?,
            Family::Lemma4 => lemma4_reports(),
            Family::ExponentMin => exponent_min_reports(input.seed)?,
            Family::AppendixA => appendix_a_reports()?,
            Family::ZnFit => zn_reports(12)?,
            Family::Lemma3 => lemma3_reports(&input.class, 12, 15)?,
            Family::APrime => a_prime_reports()?,
            Family::Lemma1 => lemma1_reports(&input.spec)?,
        };
        out.extend(reports);
    }
    Ok(out)
}
