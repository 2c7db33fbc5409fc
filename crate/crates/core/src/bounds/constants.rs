use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::fit::linear_fit;
use crate::error::{Error, Result};
use crate::spectral::norm3;
use crate::treelib::{counts, factorial, homogeneity, Tree, TreeClassParams};

/// Constants entering the per-tree estimate and the series majorants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub alpha: f64,
    pub epsilon: f64,
    /// Per-vertex constant `A` of the tree estimate.
    pub a_fit: f64,
    /// `2 ∫ dk' |e - k'|^-α |k'|^-α`
    pub a_prime: f64,
    /// Growth constant in `Z_n <= D^n (n+1)^-3/2`.
    pub d_fit: f64,
    /// Per-vertex constant `B` of the series majorant.
    pub b_fit: f64,
    /// Sup norm of the initial datum.
    pub h_norm: f64,
}

impl BoundParams {
    pub fn new(alpha: f64, a_fit: f64, a_prime: f64, d_fit: f64, b_fit: f64, h_norm: f64) -> Result<Self> {
        let p = BoundParams {
            alpha,
            epsilon: alpha - 2.0,
            a_fit,
            a_prime,
            d_fit,
            b_fit,
            h_norm,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(2.0..3.0).contains(&self.alpha) {
            return Err(Error::InvalidParam(format!("alpha {} not in [2, 3)", self.alpha)));
        }
        if (self.epsilon - (self.alpha - 2.0)).abs() > 1e-15 {
            return Err(Error::InvalidParam("epsilon must equal alpha - 2".into()));
        }
        for (name, v) in [("a_fit", self.a_fit), ("a_prime", self.a_prime), ("d_fit", self.d_fit), ("b_fit", self.b_fit)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParam(format!("{name} = {v} must be positive")));
            }
        }
        if !(self.h_norm >= 0.0 && self.h_norm.is_finite()) {
            return Err(Error::InvalidParam(format!("h_norm = {} must be nonnegative", self.h_norm)));
        }
        Ok(())
    }

    /// `D * B`
    pub fn combined(&self) -> f64 {
        self.d_fit * self.b_fit
    }

    pub fn with_h_norm(&self, h_norm: f64) -> Self {
        BoundParams { h_norm, ..self.clone() }
    }
}

/// `ln γ(τ)`, the sum of the logs of all subtree sizes.
pub fn log_factorial(t: &Tree) -> f64 {
    let mut s = 0.0;
    t.for_each_subtree(&mut |u| s += (u.size() as f64).ln());
    s
}

/// `C_τ = A^|τ| γ(τ)^(-ε/2)`
pub fn c_tau(t: &Tree, p: &BoundParams) -> f64 {
    (t.size() as f64 * p.a_fit.ln() - 0.5 * p.epsilon * log_factorial(t)).exp()
}

/// `C_τ` from the vertex recursion `C_o = A`,
/// `C_[τ1 τ2] = A |[τ1 τ2]|^(-ε/2) C_τ1 C_τ2`, `C_[τ] = A |[τ]|^(-ε/2) C_τ`.
pub fn c_tau_recursive(t: &Tree, p: &BoundParams) -> f64 {
    if t.is_leaf() {
        return p.a_fit;
    }
    let head = p.a_fit * (t.size() as f64).powf(-0.5 * p.epsilon);
    t.children().iter().fold(head, |acc, c| acc * c_tau_recursive(c, p))
}

/// Relative gap between [`c_tau`] and [`c_tau_recursive`].
pub fn c_tau_recursion_defect(t: &Tree, p: &BoundParams) -> f64 {
    let a = c_tau(t, p);
    let b = c_tau_recursive(t, p);
    (a - b).abs() / a.abs().max(b.abs())
}

/// `C_τ e^{-|k|^2 t/(|τ|+1)} t^{|τ| ε/2} ‖h‖^θ(τ)`
pub fn theorem_envelope(t: &Tree, time: f64, k: &[f64; 3], p: &BoundParams) -> f64 {
    envelope_at(t, time, norm3(k), p)
}

pub fn envelope_at(t: &Tree, time: f64, kappa: f64, p: &BoundParams) -> f64 {
    let n = t.size() as f64;
    c_tau(t, p) * (-kappa * kappa * time / (n + 1.0)).exp() * time.powf(n * p.epsilon / 2.0) * p.h_norm.powi(homogeneity(t) as i32)
}

/// `B^n n^(-3/2) (n!)^(-ε/2) e^{-|k|^2 t/(n+1)} t^(n ε/2) (1 + ‖h‖)^(n+1)`,
/// the size-`n` summand of the simple-tree majorant.
pub fn simple_class_summand(n: usize, time: f64, kappa: f64, b: f64, epsilon: f64, h_norm: f64) -> f64 {
    let nf = n as f64;
    let log_fact: f64 = (2..=n).map(|j| (j as f64).ln()).sum();
    (nf * b.ln() - 1.5 * nf.ln() - 0.5 * epsilon * log_fact - kappa * kappa * time / (nf + 1.0)
        + 0.5 * nf * epsilon * time.ln()
        + (nf + 1.0) * h_norm.ln_1p())
    .exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailBound {
    /// `D B t^(ε/2) ‖h‖^(1/2)`
    pub ratio: f64,
    /// `+inf` when `ratio >= 1`.
    pub value: f64,
    pub divergent: bool,
}

/// `Σ_{n > size_cap} (D B t^(ε/2))^n (n+1)^(-3/2) ‖h‖^((n+1)/2) (1 ∧ ‖h‖^((n+1)/2))`.
pub fn tail_bound(size_cap: usize, time: f64, p: &BoundParams) -> TailBound {
    let h = p.h_norm;
    let g = p.combined() * time.powf(p.epsilon / 2.0);
    let ratio = g * h.sqrt();
    if h == 0.0 {
        return TailBound { ratio, value: 0.0, divergent: false };
    }
    if ratio >= 1.0 {
        return TailBound {
            ratio,
            value: f64::INFINITY,
            divergent: true,
        };
    }
    let term = |n: usize| -> f64 {
        let m = (n + 1) as f64;
        let half = h.powf(m / 2.0);
        g.powi(n as i32) * m.powf(-1.5) * half * half.min(1.0)
    };
    let mut sum = 0.0;
    let mut n = size_cap + 1;
    loop {
        let x = term(n);
        sum += x;
        // remaining terms are below a geometric series of ratio `ratio`
        if x == 0.0 || x * ratio / (1.0 - ratio) <= 1e-16 * sum {
            break;
        }
        n += 1;
    }
    TailBound {
        ratio,
        value: sum,
        divergent: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMode {
    /// Largest time horizon at the given `h_norm` (requires ε > 0).
    FixedH,
    /// Largest `‖h‖` on the given horizon (requires ε > 0).
    FixedT(f64),
    /// Largest `‖h‖` for all times (requires ε = 0).
    Critical,
}

/// Boundary where the majorant ratio `D B t^(ε/2) ‖h‖^(1/2)` equals 1.
pub fn convergence_threshold(p: &BoundParams, mode: ThresholdMode) -> Result<f64> {
    let db = p.combined();
    let eps = p.epsilon;
    match mode {
        ThresholdMode::Critical => {
            if eps != 0.0 {
                return Err(Error::InvalidParam(format!("critical mode needs epsilon = 0, got {eps}")));
            }
            Ok(db.powi(-2))
        }
        ThresholdMode::FixedT(t) => {
            if eps == 0.0 {
                return Err(Error::InvalidParam("fixed_T mode needs epsilon > 0".into()));
            }
            if !(t >= 0.0) {
                return Err(Error::NegativeTime(t));
            }
            Ok(db.powi(-2) * t.powf(-eps))
        }
        ThresholdMode::FixedH => {
            if eps == 0.0 {
                return Err(Error::InvalidParam("fixed_h mode needs epsilon > 0".into()));
            }
            if p.h_norm == 0.0 {
                return Ok(f64::INFINITY);
            }
            Ok((db * p.h_norm.sqrt()).powf(-2.0 / eps))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZnFit {
    /// Smallest `D` with `Z_n <= D^n (n+1)^-3/2` on the range.
    pub d: f64,
    /// Index attaining the maximum.
    pub binding_n: usize,
    /// `Z_n / (D^n (n+1)^-3/2)` per `n`.
    pub ratios: Vec<f64>,
    /// `Z_{n+1} / Z_n`
    pub growth: Vec<f64>,
}

/// Fit `D` to counts `Z_1, Z_2, ...`.
pub fn zn_fit(counts: &[usize]) -> Result<ZnFit> {
    if counts.is_empty() || counts.contains(&0) {
        return Err(Error::InsufficientData("counts must be nonempty and positive".into()));
    }
    let need = |n: usize, z: usize| ((z as f64).ln() + 1.5 * ((n + 1) as f64).ln()) / n as f64;
    let (binding_n, log_d) = counts
        .iter()
        .enumerate()
        .map(|(i, &z)| (i + 1, need(i + 1, z)))
        .fold((1, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
    let d = log_d.exp();
    let ratios = counts
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let n = (i + 1) as f64;
            (z as f64).ln() - n * log_d + 1.5 * (n + 1.0).ln()
        })
        .map(f64::exp)
        .collect();
    let growth = counts.windows(2).map(|w| w[1] as f64 / w[0] as f64).collect();
    Ok(ZnFit {
        d,
        binding_n,
        ratios,
        growth,
    })
}

/// [`zn_fit`] on the enumerated counts for sizes `1..=max_size`.
pub fn zn_fit_enumerated(max_size: usize) -> Result<ZnFit> {
    zn_fit(&counts(max_size)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaClassFit {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    pub sizes: Vec<usize>,
    /// Per size, the largest `ln(|τ| γ(τ))` in the family.
    pub log_n_gamma: Vec<f64>,
    /// Slopes of `ln(|τ| γ(τ))` between consecutive sizes.
    pub local_rates: Vec<f64>,
    /// `γ(τ)^(1/|τ|)` of the largest-γ member per size.
    pub gamma_root: Vec<f64>,
    /// Local rates keep increasing: no exponential envelope fits.
    pub super_exponential: bool,
}

/// Fit `D3 |τ|^-1 D4^|τ| <= γ(τ) <= D1 |τ|^-1 D2^|τ|` on a tree family.
///
/// `D2` and `D4` come from separate envelopes: `D2` is the largest local
/// growth rate of the per-size maxima and `D4` the smallest of the
/// per-size minima; `D1` and `D3` then make every member fit.
pub fn gamma_class_fit(trees: &[Tree], _params: &TreeClassParams) -> Result<GammaClassFit> {
    if trees.is_empty() {
        return Err(Error::InsufficientData("empty tree family".into()));
    }
    let mut by_size: std::collections::BTreeMap<usize, (f64, f64, f64)> = Default::default();
    for t in trees {
        let n = t.size();
        let y = (n as f64).ln() + log_factorial(t);
        let e = by_size.entry(n).or_insert((f64::INFINITY, f64::NEG_INFINITY, 0.0));
        e.0 = e.0.min(y);
        if y > e.1 {
            e.1 = y;
            e.2 = factorial(t).to_f64().unwrap_or(f64::INFINITY).powf(1.0 / n as f64);
        }
    }
    let sizes: Vec<usize> = by_size.keys().copied().collect();
    let lo: Vec<f64> = by_size.values().map(|v| v.0).collect();
    let hi: Vec<f64> = by_size.values().map(|v| v.1).collect();
    let gamma_root: Vec<f64> = by_size.values().map(|v| v.2).collect();
    let xs: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    let rate = |ys: &[f64]| -> Vec<f64> {
        xs.windows(2)
            .zip(ys.windows(2))
            .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
            .collect()
    };
    let local_rates = rate(&hi);
    let (ln_d2, ln_d4) = if sizes.len() == 1 {
        let s = hi[0] / xs[0];
        (s, s)
    } else if sizes.len() == 2 {
        (local_rates[0], rate(&lo)[0])
    } else {
        // least squares through all sizes, then widen to the envelopes
        let up = linear_fit(&xs, &hi)?.slope.max(0.0);
        let down = linear_fit(&xs, &lo)?.slope.max(0.0);
        (up.max(down), up.min(down))
    };
    let ln_d1 = xs.iter().zip(&hi).map(|(x, y)| y - x * ln_d2).fold(f64::NEG_INFINITY, f64::max);
    let ln_d3 = xs.iter().zip(&lo).map(|(x, y)| y - x * ln_d4).fold(f64::INFINITY, f64::min);
    let super_exponential = local_rates.len() >= 3
        && local_rates.windows(2).all(|w| w[1] > w[0])
        && local_rates.last().unwrap() - local_rates[0] > std::f64::consts::LN_2;
    Ok(GammaClassFit {
        d1: ln_d1.exp(),
        d2: ln_d2.exp(),
        d3: ln_d3.exp(),
        d4: ln_d4.exp(),
        sizes,
        log_n_gamma: hi,
        local_rates,
        gamma_root,
        super_exponential,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treelib::{enumerate, graft2, leaf};

    fn params(alpha: f64) -> BoundParams {
        BoundParams::new(alpha, 1.7, 1.0, 2.9, 1.7, 0.05).unwrap()
    }

    #[test]
    fn c_tau_examples() {
        let p = params(2.5);
        assert!((c_tau(&leaf(), &p) - 1.7).abs() < 1e-15);
        let cherry = graft2(&leaf(), &leaf());
        let expect = 1.7f64.powi(3) * 3f64.powf(-0.25);
        assert!((c_tau(&cherry, &p) - expect).abs() < 1e-13);
        let p0 = params(2.0);
        for group in enumerate(8).unwrap() {
            for t in &group {
                assert!((c_tau(t, &p0) - 1.7f64.powi(t.size() as i32)).abs() < 1e-12 * c_tau(t, &p0));
                assert!(c_tau_recursion_defect(t, &p) < 1e-12);
            }
        }
    }

    #[test]
    fn envelope_limits() {
        let p = params(2.5);
        let t = Tree::path(3);
        assert_eq!(theorem_envelope(&t, 0.0, &[1.0, 0.0, 0.0], &p), 0.0);
        let at_zero = theorem_envelope(&t, 2.0, &[0.0; 3], &p);
        let expect = c_tau(&t, &p) * 2f64.powf(0.75) * 0.05f64.powi(4);
        assert!((at_zero - expect).abs() < 1e-14 * expect);
    }

    #[test]
    fn tail_geometric_majorant() {
        let p = params(2.0).with_h_norm(0.02);
        let tb = tail_bound(4, 3.0, &p);
        assert!(!tb.divergent);
        assert!(tb.value <= tb.ratio.powi(5) / (1.0 - tb.ratio));
        assert_eq!(tb.value, tail_bound(4, 30.0, &p).value);
        assert_eq!(tail_bound(3, 1.0, &p.with_h_norm(0.0)).value, 0.0);
        assert!(tail_bound(3, 1.0, &p.with_h_norm(1.0)).divergent);
    }

    #[test]
    fn thresholds() {
        let p = params(2.0);
        let crit = convergence_threshold(&p, ThresholdMode::Critical).unwrap();
        assert!((crit - (2.9 * 1.7f64).powi(-2)).abs() < 1e-15);
        assert!(convergence_threshold(&p, ThresholdMode::FixedH).is_err());
        let q = params(2.5);
        assert!(convergence_threshold(&q, ThresholdMode::Critical).is_err());
        let t1 = convergence_threshold(&q, ThresholdMode::FixedH).unwrap();
        let t2 = convergence_threshold(&q.with_h_norm(0.1), ThresholdMode::FixedH).unwrap();
        assert!(t2 < t1);
        let just_below = tail_bound(0, t1 * 0.999, &q);
        let just_above = tail_bound(0, t1 * 1.001, &q);
        assert!(!just_below.divergent && just_above.divergent);
        let tiny = convergence_threshold(&q, ThresholdMode::FixedT(1e-12)).unwrap();
        assert!(tiny > 1e3);
    }

    #[test]
    fn zn_fit_small_range() {
        let f = zn_fit(&[1]).unwrap();
        assert!((f.d - 2f64.powf(1.5)).abs() < 1e-12);
        let f = zn_fit_enumerated(12).unwrap();
        assert!(f.ratios.iter().all(|&r| r <= 1.0 + 1e-12));
    }
}
