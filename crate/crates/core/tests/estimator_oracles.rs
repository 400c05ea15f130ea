//! Estimator constants and special functions checked against independent routes.

use kmvc_core::{gamma_cdf, log_gamma, xi_moment, EstimatorId};
use proptest::prelude::*;

/// Composite Simpson quadrature of `f` over `[a, b]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `E[X^alpha]` for `X ~ Gamma(k, 1)` by quadrature, with `Γ(k) = (k-1)!`.
/// Substituting `x = u²` keeps the integrand smooth at the origin.
fn gamma_moment_by_quadrature(k: u32, alpha: f64) -> f64 {
    let density = |u: f64| {
        if u == 0.0 {
            return 0.0;
        }
        let x = u * u;
        2.0 * u * x.powf(alpha + k as f64 - 1.0) * (-x).exp() / factorial(k - 1)
    };
    simpson(density, 0.0, 12.0, 200_000)
}

#[test]
fn moment_constants_match_quadrature() {
    for (k, alpha) in [
        (2u32, -1.0),
        (3, -1.0),
        (3, 0.5),
        (5, 0.5),
        (3, -1.0 / 64.0),
        (8, 1.5),
    ] {
        let closed = (log_gamma(k as f64 + alpha).unwrap() - log_gamma(k as f64).unwrap()).exp();
        let quad = gamma_moment_by_quadrature(k, alpha);
        assert!(
            (closed - quad).abs() <= 1e-9 * closed.max(1.0),
            "k = {k}, alpha = {alpha}: {closed} vs {quad}"
        );
    }
}

#[test]
fn inverse_moment_estimator_is_k_minus_one_over_x() {
    for k in 2..10u32 {
        let x = 0.037;
        let got = xi_moment(&[x], k, -1.0).unwrap().value;
        let want = (k - 1) as f64 / x;
        assert!((got - want).abs() <= 1e-12 * want);
    }
}

#[test]
fn log_gamma_matches_statrs() {
    let mut x = 0.05;
    while x < 1e4 {
        let ours = log_gamma(x).unwrap();
        let theirs = statrs::function::gamma::ln_gamma(x);
        assert!(
            (ours - theirs).abs() <= 1e-10 * theirs.abs().max(1.0),
            "x = {x}"
        );
        x *= 1.07;
    }
}

#[test]
fn incomplete_gamma_matches_statrs() {
    for a in [0.5, 1.0, 2.0, 3.0, 7.5, 20.0] {
        for i in 1..200 {
            let t = i as f64 * 0.2;
            let ours = gamma_cdf(a, t);
            let theirs = statrs::function::gamma::gamma_lr(a, t);
            assert!(
                (ours - theirs).abs() <= 1e-12,
                "a = {a}, t = {t}: {ours} vs {theirs}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn log_gamma_recurrence(x in 1e-4f64..=100.0) {
        let d = log_gamma(x + 1.0).unwrap() - log_gamma(x).unwrap();
        prop_assert!((d - x.ln()).abs() <= 1e-10);
    }

    #[test]
    fn estimators_are_permutation_invariant(
        xs in prop::collection::vec(1e-6f64..1.0, 2..40).prop_shuffle(),
        k in 2u32..8,
    ) {
        let mut sorted = xs.clone();
        sorted.sort_by(f64::total_cmp);
        for id in [EstimatorId::XiHat, EstimatorId::Xi3Log, EstimatorId::INVERSE, EstimatorId::SQRT] {
            let a = id.estimate(&xs, k).unwrap().value;
            let b = id.estimate(&sorted, k).unwrap().value;
            prop_assert!((a - b).abs() <= 1e-12 * a, "{id}: {a} vs {b}");
        }
    }

    #[test]
    fn scaling_entries_divides_estimates(
        xs in prop::collection::vec(1e-6f64..1.0, 2..40),
        c in 0.01f64..100.0,
        k in 2u32..8,
    ) {
        let scaled: Vec<f64> = xs.iter().map(|x| x * c).collect();
        for id in [EstimatorId::XiHat, EstimatorId::Xi3Log, EstimatorId::INVERSE, EstimatorId::SQRT] {
            let a = id.estimate(&xs, k).unwrap().value;
            let b = id.estimate(&scaled, k).unwrap().value;
            prop_assert!((a / b - c).abs() <= 1e-10 * c, "{id}");
        }
    }
}
