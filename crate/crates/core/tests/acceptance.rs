//! Acceptance criteria 1 to 11, one PASS/FAIL line each.

use std::collections::BTreeSet;
use std::process::ExitCode;

use num_bigint::BigUint;
use num_traits::One;

use nstrees::bounds::{laplace_rates, log_majorant, majorant_slope, zn_fit_enumerated};
use nstrees::series::{
    class_sum, envelope_report, fit_envelope, fit_simple_class, picard, profile_rates, time_node, tree_sum, ClassFilter, Mutation,
    PhiCache,
};
use nstrees::spectral::{make_initial, Grid, GridSpec, InitialKind, SpectralField};
use nstrees::suite::{appendix_a_reports, exponent_min_reports, lemma4_reports};
use nstrees::treelib::{
    counts, enumerate, factorial, graft1, graft2, homogeneity, symmetry, Tree, TreeClassParams,
};

const SEED: u64 = 7;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

// brute force: a tree is the list of its children, canonical when the
// children are sorted by their printed form
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Bt(Vec<Bt>);

impl Bt {
    fn canon(&self) -> Bt {
        let mut kids: Vec<Bt> = self.0.iter().map(Bt::canon).collect();
        kids.sort_by_key(|k| k.print());
        Bt(kids)
    }

    fn print(&self) -> String {
        format!("({})", self.0.iter().map(Bt::print).collect::<String>())
    }

    fn grow(&self) -> Vec<Bt> {
        let mut out = Vec::new();
        if self.0.len() < 2 {
            let mut kids = self.0.clone();
            kids.push(Bt(Vec::new()));
            out.push(Bt(kids));
        }
        for (i, c) in self.0.iter().enumerate() {
            for g in c.grow() {
                let mut kids = self.0.clone();
                kids[i] = g;
                out.push(Bt(kids));
            }
        }
        out
    }

    fn from_tree(t: &Tree) -> Bt {
        Bt(t.children().iter().map(Bt::from_tree).collect())
    }
}

fn brute_force(max: usize) -> Vec<BTreeSet<String>> {
    let mut levels = vec![BTreeSet::from([Bt(Vec::new()).print()])];
    let mut trees = vec![Bt(Vec::new())];
    for _ in 1..max {
        let mut next: Vec<Bt> = Vec::new();
        let mut seen = BTreeSet::new();
        for t in &trees {
            for g in t.grow() {
                let c = g.canon();
                if seen.insert(c.print()) {
                    next.push(c);
                }
            }
        }
        levels.push(seen);
        trees = next;
    }
    levels
}

fn criterion_1() -> Outcome {
    let expected = [1usize, 1, 2, 3, 6, 11, 23];
    let first = counts(7).unwrap();
    let oracle = brute_force(7);
    let same_sets = enumerate(7).unwrap().iter().zip(&oracle).all(|(g, o)| {
        let ours: BTreeSet<String> = g.iter().map(|t| Bt::from_tree(t).canon().print()).collect();
        &ours == o
    });
    let oracle_counts: Vec<usize> = oracle.iter().map(BTreeSet::len).collect();
    let z12 = counts(12).unwrap();
    let z = |n: usize| z12[n - 1];
    let recursion = (1..12).all(|n| {
        let unequal: usize = (1..n).filter(|&a| 2 * a < n).map(|a| z(a) * z(n - a)).sum();
        let equal = if n % 2 == 0 { z(n / 2) * (z(n / 2) + 1) / 2 } else { 0 };
        let ordered: usize = (1..n).map(|a| z(a) * z(n - a)).sum();
        z(n + 1) == z(n) + unequal + equal && z(n + 1) <= z(n) + ordered
    });
    outcome(
        first == expected && oracle_counts == expected && same_sets && recursion,
        format!("Z_1..Z_7 = {first:?}, brute force {oracle_counts:?}, same tree sets {same_sets}, recursion to n = 11 {recursion}"),
    )
}

fn factorial_int(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |a, k| a * BigUint::from(k))
}

fn criterion_2() -> Outcome {
    let all: Vec<Tree> = enumerate(12).unwrap().into_iter().flatten().collect();
    let two = BigUint::from(2u32);
    let mut bad = Vec::new();
    for t in &all {
        let n = t.size();
        if 2 * n + 1 <= 12 {
            let s = symmetry(t);
            if symmetry(&graft2(t, t)) != &two * &s * &s {
                bad.push(format!("σ([τ,τ]) at {}", t.encode()));
            }
        }
        if n < 12 && symmetry(&graft1(t)) != symmetry(t) {
            bad.push(format!("σ([τ]) at {}", t.encode()));
        }
        let rec = t.children().iter().fold(BigUint::from(n), |a, c| a * factorial(c));
        if factorial(t) != rec {
            bad.push(format!("γ recursion at {}", t.encode()));
        }
        let th = homogeneity(t);
        if !(n + 1 <= 2 * th && th <= n + 1) {
            bad.push(format!("θ bounds at {}", t.encode()));
        }
    }
    for n in 1..=12 {
        if factorial(&Tree::path(n)) != factorial_int(n) {
            bad.push(format!("γ = n! at n = {n}"));
        }
    }
    outcome(
        bad.is_empty(),
        format!("{} trees of size <= 12, violations {:?}", all.len(), bad),
    )
}

fn datum(spec: GridSpec, amplitude: f64, seed: u64) -> SpectralField {
    let grid = Grid::new(spec).unwrap();
    make_initial(&grid, InitialKind::RandomDivfree, amplitude, seed).unwrap()
}

fn lemma2_discrepancy(cache: &PhiCache, n: usize) -> f64 {
    let p = picard(cache.h(), n).unwrap();
    let s = tree_sum(cache, n as i64 - 1).unwrap();
    s.relative_distance(&p, &p).unwrap()
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for alpha in [2.0, 2.5] {
        let h = datum(GridSpec::new(5.0, 11, 1.0, 33, alpha).unwrap(), 0.1, SEED);
        let cache = PhiCache::new(&h);
        for n in 1..=3 {
            let d = lemma2_discrepancy(&cache, n);
            worst = worst.max(d);
            parts.push(format!("α={alpha} n={n}: {d:.2e}"));
        }
    }
    outcome(worst <= 1e-10, format!("max relative discrepancy {worst:.3e} ({})", parts.join(", ")))
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    for alpha in [2.0, 2.5] {
        let h = datum(GridSpec::new(5.0, 11, 2.0, 33, alpha).unwrap(), 0.1, SEED);
        let c1 = PhiCache::new(&h);
        let c2 = PhiCache::new(&h.scaled(2.0));
        for t in enumerate(4).unwrap().into_iter().flatten() {
            let a = c1.phi(&t).unwrap().scaled(2f64.powi(homogeneity(&t) as i32));
            let b = c2.phi(&t).unwrap();
            worst = worst.max(b.relative_distance(&a, &a).unwrap());
        }
    }
    outcome(worst <= 1e-12, format!("max relative deviation {worst:.3e} over |τ| <= 4, α = 2 and 2.5"))
}

fn criterion_5() -> (Outcome, f64) {
    let times = [0.1, 1.0, 5.0];
    let mut pass = true;
    let mut parts = Vec::new();
    let mut a_single: f64 = 0.0;
    let mut a_eps0 = 0.0;
    let mut caches = Vec::new();
    for alpha in [2.0, 2.5] {
        let h = datum(GridSpec::new(5.0, 11, 5.0, 51, alpha).unwrap(), 0.1, SEED);
        let cache = PhiCache::new(&h);
        let fit = fit_envelope(&cache, 5, &times).unwrap();
        a_single = a_single.max(fit.a_fit);
        if alpha == 2.0 {
            a_eps0 = fit.a_fit;
        }
        parts.push(format!("ε={}: A_fit {:.4}, A_ls {:.4} (rms {:.3})", alpha - 2.0, fit.a_fit, fit.a_ls, fit.rms));
        caches.push(cache);
    }
    let mut worst_ratio: f64 = 0.0;
    for cache in &caches {
        let r = envelope_report(cache, 5, &times, a_single).unwrap();
        worst_ratio = worst_ratio.max(r.measured);
    }
    pass &= worst_ratio <= 1.0 + 1e-12;
    let mut slowest = (f64::INFINITY, String::new());
    for cache in &caches {
        for (enc, r) in profile_rates(cache, 5, &times).unwrap() {
            if r.ratio < slowest.0 {
                slowest = (r.ratio, format!("{enc} at t = {} (α = {})", r.time, cache.h().grid().spec().alpha));
            }
        }
    }
    pass &= slowest.0 >= 0.85;
    let o = outcome(
        pass,
        format!(
            "single A_fit {a_single:.4}, worst |φ|/envelope {worst_ratio:.6}; slowest outer-shell rate {:.3} x t/(|τ|+1) at {}; {}",
            slowest.0,
            slowest.1,
            parts.join("; ")
        ),
    );
    (o, a_eps0)
}

fn drift(profile: &[f64]) -> f64 {
    let half = profile.len() / 2;
    let first = profile[..=half].iter().copied().fold(0.0, f64::max);
    let second = profile[half..].iter().copied().fold(0.0, f64::max);
    second / first - 1.0
}

fn criterion_6(a: f64) -> (Outcome, f64) {
    let d = zn_fit_enumerated(12).unwrap().d;
    let critical = (d * a).powi(-2);
    let amp = 0.8 * critical;
    let mut drifts = Vec::new();
    for alpha in [2.0, 2.5] {
        let spec = GridSpec::new(5.0, 11, 50.0, 101, alpha).unwrap();
        let cache = PhiCache::new(&datum(spec, amp, SEED));
        let rep = class_sum(&cache, ClassFilter::All, 5, None).unwrap();
        drifts.push(rep.sizes.iter().map(|s| drift(&s.aggregate_profile)).collect::<Vec<f64>>());
    }
    let bounded = drifts[0].iter().all(|&x| x <= 0.05);
    let grows = drifts[1].iter().all(|&x| x > 0.05);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:+.3}")).collect::<Vec<_>>().join(" ");
    (
        outcome(
            bounded && grows,
            format!(
                "A_fit {a:.4}, D {d:.4}, ‖h‖ = {amp:.4} (critical {critical:.4}); late/early sup drift per size: ε=0 [{}] bounded {bounded}; ε=0.5 [{}] growing {grows}",
                fmt(&drifts[0]),
                fmt(&drifts[1])
            ),
        ),
        d * a,
    )
}

fn criterion_7(c1: f64) -> (Outcome, bool) {
    let h = 0.8 * c1.powi(-2);
    let s = majorant_slope(c1, h, 1.0, 5.0, 15.0, 41).unwrap();
    let rates = laplace_rates(c1, h).unwrap();
    let rel_stated = (s.rate - rates.stated).abs() / rates.stated;
    let rel_laplace = (s.rate - rates.laplace).abs() / rates.laplace;
    let linear = s.fit.max_residual <= 0.02 * (s.log_m[0] - s.log_m[s.log_m.len() - 1]).abs();
    // fixed k: increasing, then decreasing to 0 after the crossover
    let ts: Vec<f64> = (0..=400).map(|j| 10f64.powf(-3.0 + 7.0 * j as f64 / 400.0)).collect();
    let m: Vec<f64> = ts.iter().map(|&t| log_majorant(2.0, t, c1, h).unwrap()).collect();
    let peak = m.iter().enumerate().fold((0, f64::NEG_INFINITY), |b, (i, &v)| if v > b.1 { (i, v) } else { b }).0;
    let monotone = m[peak..].windows(2).all(|w| w[1] < w[0]);
    let vanishes = m[m.len() - 1] < m[peak] + (1e-6f64).ln();
    let pass = rel_stated <= 0.20 && linear && monotone && vanishes;
    (
        outcome(
            pass,
            format!(
                "C1 = {c1:.4}, ‖h‖ = {h:.4}, L = {:.4}: fitted rate {:.4}; stated 2/sqrt(L) = {:.4} (off {:.1}%), Laplace 2 sqrt(L) = {:.4} (off {:.1}%); linear {linear}; crossover t = {:.3}, monotone after {monotone}, vanishes {vanishes}",
                rates.log_gap,
                s.rate,
                rates.stated,
                100.0 * rel_stated,
                rates.laplace,
                100.0 * rel_laplace,
                ts[peak]
            ),
        ),
        rel_laplace <= 0.20 && linear && monotone && vanishes,
    )
}

fn criterion_8() -> Outcome {
    let l4 = lemma4_reports();
    let em = exponent_min_reports(17).unwrap();
    let bad: Vec<String> = l4.iter().chain(&em).filter(|r| !r.pass).map(|r| r.context.clone()).collect();
    outcome(
        bad.is_empty(),
        format!("{} lemma-4 points, {} exponent minima, failures {bad:?}", l4.len(), em.len()),
    )
}

fn criterion_9() -> Outcome {
    let reps = appendix_a_reports().unwrap();
    let detail = reps
        .iter()
        .map(|r| format!("{} ({:.1}%)", r.context, 100.0 * r.measured))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(reps.iter().all(|r| r.pass), detail)
}

fn criterion_10() -> (Outcome, bool) {
    let spec = GridSpec::new(5.0, 11, 10.0, 41, 2.5).unwrap();
    let cache = PhiCache::new(&datum(spec.clone(), 0.1, SEED));
    let j = time_node(&spec, 10.0).unwrap();
    let simple = class_sum(&cache, ClassFilter::Simple, 10, None).unwrap();
    let inc: Vec<f64> = simple.sizes.iter().map(|s| s.increment_profile[j]).collect();
    let cauchy = inc.windows(2).all(|w| w[1] < w[0]);
    let fit = fit_simple_class(&cache, 10, 10.0).unwrap();
    let majorized = fit.measured.iter().zip(&fit.majorant).all(|(m, b)| *m <= b * (1.0 + 1e-12));
    let params = TreeClassParams::new(0.45, 0.06).unwrap();
    let short = class_sum(&cache, ClassFilter::short(&params), 15, None).unwrap();
    let agg: Vec<(usize, f64)> = short.sizes.iter().map(|s| (s.size, s.aggregate_profile[j])).collect();
    let nondecreasing = agg.windows(2).all(|w| w[1].1 >= w[0].1);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(" ");
    (
        outcome(
            cauchy && majorized && nondecreasing,
            format!(
                "t = 10, ε = 0.5: simple increments [{}] shrinking {cauchy}, under fitted B = {:.4} {majorized}; short sizes/terms {:?} non-decreasing {nondecreasing}",
                fmt(&inc),
                fit.b,
                agg.iter().map(|(n, v)| format!("{n}:{v:.2e}")).collect::<Vec<_>>()
            ),
        ),
        cauchy && majorized,
    )
}

fn criterion_11() -> (Outcome, bool) {
    let h = datum(GridSpec::new(5.0, 11, 1.0, 33, 2.0).unwrap(), 0.1, SEED);
    let mut parts = Vec::new();
    let mut pass = true;
    let mut detected = true;
    for (name, m) in [("factor 2", Mutation::DropGraftFactor), ("1/σ weight", Mutation::DropSymmetryWeight)] {
        let cache = PhiCache::with_mutation(&h, m);
        let d = lemma2_discrepancy(&cache, 3);
        pass &= d > 1e-3;
        detected &= d > 1e-10;
        parts.push(format!("without {name}: {d:.3e}"));
    }
    (
        outcome(
            pass,
            format!("depth 2 relative discrepancy {} (threshold 1e-3; criterion-3 tolerance 1e-10)", parts.join(", ")),
        ),
        detected,
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, Outcome, bool)> = Vec::new();
    let mut push = |n: u32, o: Outcome, required: bool| {
        println!("criterion {n:>2}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((n, o, required));
    };
    push(1, criterion_1(), true);
    push(2, criterion_2(), true);
    push(3, criterion_3(), true);
    push(4, criterion_4(), true);
    let (c5, a_fit) = criterion_5();
    push(5, c5, true);
    let (c6, c1) = criterion_6(a_fit);
    push(6, c6, false);
    let (c7, c7_aux) = criterion_7(c1);
    push(7, c7, false);
    push(8, criterion_8(), true);
    push(9, criterion_9(), true);
    let (c10, c10_aux) = criterion_10();
    push(10, c10, false);
    let (c11, c11_aux) = criterion_11();
    push(11, c11, false);

    let aux = [
        ("criterion 7 against 2 sqrt(L)", c7_aux),
        ("criterion 10 simple-class half", c10_aux),
        ("criterion 11 detection at 1e-10", c11_aux),
    ];
    for (name, ok) in aux {
        println!("auxiliary: {} {name}", if ok { "PASS" } else { "FAIL" });
    }
    let required_failed: Vec<u32> = results.iter().filter(|r| r.2 && !r.1.pass).map(|r| r.0).collect();
    let aux_failed = aux.iter().any(|a| !a.1);
    let passed = results.iter().filter(|r| r.1.pass).count();
    println!("{passed}/{} criteria pass", results.len());
    if required_failed.is_empty() && !aux_failed {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {required_failed:?}");
        ExitCode::FAILURE
    }
}
