use std::f64::consts::PI;

use approx::assert_relative_eq;
use statrs::function::gamma::gamma;

use nstrees::bounds::{appendix_i_radial, estimate_a_prime, lemma4_check};

// ∫ d^3k' |k - k'|^-a |k'|^-b for a, b < 3 < a + b
fn riesz(a: f64, b: f64, kappa: f64) -> f64 {
    PI.powf(1.5) * gamma((3.0 - a) / 2.0) * gamma((3.0 - b) / 2.0) * gamma((a + b - 3.0) / 2.0)
        / (gamma(a / 2.0) * gamma(b / 2.0) * gamma((6.0 - a - b) / 2.0))
        * kappa.powf(3.0 - a - b)
}

#[test]
fn pure_power_convolution_matches_gamma_formula() {
    for s in [1.8, 2.0, 2.3, 2.5, 2.9] {
        for kappa in [0.1, 0.7, 1.0, 2.5, 40.0] {
            let got = appendix_i_radial(kappa, s, s).unwrap();
            assert_relative_eq!(got, riesz(s, s, kappa), max_relative = 1e-8);
        }
    }
}

#[test]
fn a_prime_at_two_is_twice_pi_cubed() {
    let est = estimate_a_prime(2.0).unwrap();
    assert_relative_eq!(est.value, 2.0 * riesz(2.0, 2.0, 1.0), max_relative = 1e-6);
    assert_relative_eq!(est.value, 2.0 * PI.powi(3), max_relative = 1e-6);
}

#[test]
fn lemma4_left_side_closed_forms() {
    for a in [0.5, 1.0, 5.0, 50.0] {
        assert_relative_eq!(lemma4_check(a, 0.0).measured, -(-a).exp_m1() / a, max_relative = 1e-10);
    }
    for b in [0.5, 2.0, 10.0] {
        assert_relative_eq!(lemma4_check(0.0, b).measured, 1.0 / (b + 1.0), max_relative = 1e-10);
    }
}
