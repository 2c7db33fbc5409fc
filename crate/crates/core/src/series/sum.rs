use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::phi::PhiCache;
use crate::bounds::{convergence_threshold, tail_bound, BoundParams, ThresholdMode};
use crate::error::{Error, Result};
use crate::spectral::{calb, SpectralField, Trajectory};
use crate::treelib::{classify, enumerate, enumerate_depth_class, factorial, homogeneity, symmetry, Tree, TreeClassParams};

/// `u^(0) = S h`, `u^(n+1) = S h + 𝓑(u^(n), u^(n))`.
pub fn picard(h: &SpectralField, n: usize) -> Result<Trajectory> {
    let free = Trajectory::semigroup(h);
    let mut u = free.clone();
    for _ in 0..n {
        u = free.add(&calb(&u, &u)?)?;
    }
    Ok(u)
}

/// `S h + Σ_{depth(τ) <= depth_cap} phi(τ; h) / σ(τ)`.
pub fn tree_sum(cache: &PhiCache, depth_cap: i64) -> Result<Trajectory> {
    let mut u = cache.free().as_ref().clone();
    for t in enumerate_depth_class(depth_cap)? {
        let sigma = symmetry(&t).to_f64().expect("finite symmetry factor");
        u.axpy(cache.weight(sigma), cache.phi(&t)?.as_ref())?;
    }
    Ok(u)
}

/// `sup_{t, k} |u_t - S_t h - 𝓑_t(u, u)|`
pub fn residual(u: &Trajectory, h: &SpectralField) -> Result<f64> {
    if !u.grid().same(h.grid()) {
        return Err(Error::GridMismatch);
    }
    let rhs = Trajectory::semigroup(h).add(&calb(u, u)?)?;
    Ok(u.sub(&rhs)?.sup_norm())
}

/// Which trees a partial sum runs over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ClassFilter {
    All,
    Simple,
    Short { ratio: f64, tolerance: f64 },
}

impl ClassFilter {
    pub fn short(p: &TreeClassParams) -> Self {
        ClassFilter::Short {
            ratio: p.ratio,
            tolerance: p.tolerance,
        }
    }

    pub fn admits(&self, t: &Tree) -> Result<bool> {
        Ok(match *self {
            ClassFilter::All => true,
            ClassFilter::Simple => classify(t, &TreeClassParams::new(0.25, 0.1)?).0,
            ClassFilter::Short { ratio, tolerance } => classify(t, &TreeClassParams::new(ratio, tolerance)?).1,
        })
    }

    pub fn label(&self) -> String {
        match *self {
            ClassFilter::All => "all".into(),
            ClassFilter::Simple => "simple".into(),
            ClassFilter::Short { ratio, tolerance } => format!("short({ratio},{tolerance})"),
        }
    }
}

/// One tree of the series with its trajectory and weight.
#[derive(Debug, Clone)]
pub struct SeriesTerm {
    pub tree: Tree,
    pub trajectory: Arc<Trajectory>,
    /// `1/σ(τ)`
    pub weight: Ratio<BigUint>,
    pub sup_profile: Vec<f64>,
}

/// Trees of one size in a partial sum.
#[derive(Debug, Clone, Serialize)]
pub struct SizeAggregate {
    pub size: usize,
    pub count: usize,
    /// `Σ_{|τ| = n} ‖phi(τ)‖ / σ(τ)`, sup over time.
    pub aggregate_norm: f64,
    /// The same sum per time node.
    pub aggregate_profile: Vec<f64>,
    /// `‖Σ_{|τ| = n} phi(τ) / σ(τ)‖`, sup over time.
    pub increment_norm: f64,
    pub increment_profile: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TailRecord {
    pub time: f64,
    pub ratio: f64,
    pub value: f64,
    pub divergent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesReport {
    pub filter: String,
    pub size_cap: usize,
    pub grid_fingerprint: String,
    pub session: String,
    pub times: Vec<f64>,
    pub h_norm: f64,
    #[serde(skip)]
    pub terms: Vec<SeriesTerm>,
    pub sizes: Vec<SizeAggregate>,
    /// Majorant of the omitted sizes at every time node.
    pub tail: Vec<TailRecord>,
    pub regime: String,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub partial_sum: Trajectory,
    pub partial_sum_profile: Vec<f64>,
}

fn profile_sum(acc: &mut [f64], p: &[f64], w: f64) {
    for (a, b) in acc.iter_mut().zip(p) {
        *a += w * b;
    }
}

/// Partial sum of the tree series over all trees with `|τ| <= size_cap`,
/// with the analytic tail attached when `params` is given.
pub fn series_sum(cache: &PhiCache, size_cap: usize, params: Option<&BoundParams>) -> Result<SeriesReport> {
    class_sum(cache, ClassFilter::All, size_cap, params)
}

/// [`series_sum`] restricted to one class of trees.
pub fn class_sum(
    cache: &PhiCache,
    filter: ClassFilter,
    size_cap: usize,
    params: Option<&BoundParams>,
) -> Result<SeriesReport> {
    let h = cache.h();
    let grid = h.grid().clone();
    let spec = grid.spec();
    let nt = spec.time_nodes;
    let h_norm = crate::spectral::sup_norm(h);
    let mut partial = cache.free().as_ref().clone();
    let mut terms = Vec::new();
    let mut sizes = Vec::new();
    let groups = if size_cap == 0 || h.is_zero() { Vec::new() } else { enumerate(size_cap)? };
    for group in groups {
        let members: Vec<Tree> = group
            .into_iter()
            .filter_map(|t| match filter.admits(&t) {
                Ok(true) => Some(Ok(t)),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            })
            .collect::<Result<_>>()?;
        let Some(n) = members.first().map(Tree::size) else {
            continue;
        };
        let mut increment = Trajectory::zeros(&grid);
        let mut aggregate_profile = vec![0.0; nt];
        for t in members.iter() {
            let sigma = symmetry(t);
            let w = cache.weight(sigma.to_f64().expect("finite symmetry factor"));
            let traj = cache.phi(t)?;
            let sup_profile = traj.sup_profile();
            profile_sum(&mut aggregate_profile, &sup_profile, w);
            increment.axpy(w, &traj)?;
            terms.push(SeriesTerm {
                tree: t.clone(),
                trajectory: traj,
                weight: Ratio::new(BigUint::one(), sigma),
                sup_profile,
            });
        }
        partial = partial.add(&increment)?;
        let increment_profile = increment.sup_profile();
        sizes.push(SizeAggregate {
            size: n,
            count: members.len(),
            aggregate_norm: aggregate_profile.iter().copied().fold(0.0, f64::max),
            aggregate_profile,
            increment_norm: increment_profile.iter().copied().fold(0.0, f64::max),
            increment_profile,
        });
    }

    let mut warnings = Vec::new();
    let (tail, regime) = match params {
        Some(p) => {
            let p = p.with_h_norm(h_norm);
            let tail: Vec<TailRecord> = spec
                .times()
                .into_iter()
                .map(|time| {
                    let tb = tail_bound(size_cap, time, &p);
                    TailRecord {
                        time,
                        ratio: tb.ratio,
                        value: tb.value,
                        divergent: tb.divergent,
                    }
                })
                .collect();
            if let Some(first) = tail.iter().find(|r| r.divergent) {
                let msg = format!(
                    "tail majorant diverges from t = {} (ratio {:.4} >= 1)",
                    first.time, first.ratio
                );
                log::warn!("{msg}");
                warnings.push(msg);
            }
            (tail, regime_label(&p, spec.time_horizon)?)
        }
        None if h_norm == 0.0 => (Vec::new(), "trivial".into()),
        None => (Vec::new(), "unbounded".into()),
    };

    Ok(SeriesReport {
        filter: filter.label(),
        size_cap,
        grid_fingerprint: spec.fingerprint(),
        session: cache.session_key().to_string(),
        times: spec.times(),
        h_norm,
        terms,
        sizes,
        tail,
        regime,
        warnings,
        partial_sum_profile: partial.sup_profile(),
        partial_sum: partial,
    })
}

/// `trivial`, `global` (ε = 0 below the critical threshold), `local`
/// (ε > 0 and `T` below `t*`), or `outside` with the violated threshold.
pub fn regime_label(p: &BoundParams, horizon: f64) -> Result<String> {
    if p.h_norm == 0.0 {
        return Ok("trivial".into());
    }
    Ok(if p.epsilon == 0.0 {
        let crit = convergence_threshold(p, ThresholdMode::Critical)?;
        if p.h_norm < crit {
            "global".into()
        } else {
            format!("outside: ‖h‖ = {:.4e} >= critical {:.4e}", p.h_norm, crit)
        }
    } else {
        let t_star = convergence_threshold(p, ThresholdMode::FixedH)?;
        if horizon < t_star {
            "local".into()
        } else {
            format!("outside: T = {horizon} >= t* = {t_star:.4e}")
        }
    })
}

#[derive(Debug, Serialize)]
struct TermRecord<'a> {
    encoding: &'a str,
    size: usize,
    gamma: String,
    sigma: String,
    theta: usize,
    weight: String,
    sup_profile: &'a [f64],
}

#[derive(Debug, Serialize)]
struct ReportFile<'a> {
    #[serde(flatten)]
    report: &'a SeriesReport,
    trees: Vec<TermRecord<'a>>,
}

#[derive(Debug, Serialize)]
struct SummaryRow {
    size: usize,
    count: usize,
    aggregate_norm: f64,
    increment_norm: f64,
    tail_bound: f64,
}

impl SeriesReport {
    pub fn write_json<W: std::io::Write>(&self, w: W) -> Result<()> {
        let trees = self
            .terms
            .iter()
            .map(|t| TermRecord {
                encoding: t.tree.encode(),
                size: t.tree.size(),
                gamma: factorial(&t.tree).to_string(),
                sigma: symmetry(&t.tree).to_string(),
                theta: homogeneity(&t.tree),
                weight: t.weight.to_string(),
                sup_profile: &t.sup_profile,
            })
            .collect();
        serde_json::to_writer_pretty(w, &ReportFile { report: self, trees })?;
        Ok(())
    }

    /// `size,count,aggregate_norm,increment_norm,tail_bound`, the tail
    /// being the majorant of all larger sizes at the horizon.
    pub fn write_csv<W: std::io::Write>(&self, w: W, params: Option<&BoundParams>) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let horizon = *self.times.last().expect("time grid");
        for s in &self.sizes {
            let tail_bound = params
                .map(|p| tail_bound(s.size, horizon, &p.with_h_norm(self.h_norm)).value)
                .unwrap_or(f64::NAN);
            out.serialize(SummaryRow {
                size: s.size,
                count: s.count,
                aggregate_norm: s.aggregate_norm,
                increment_norm: s.increment_norm,
                tail_bound,
            })?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn aggregate(&self, size: usize) -> Option<&SizeAggregate> {
        self.sizes.iter().find(|s| s.size == size)
    }
}
