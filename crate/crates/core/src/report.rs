//! Simulation output rows and pass/fail checks with their pinned tolerances.

use serde::Serialize;

use crate::estimators::EstimatorId;
use crate::sim::{CoverageReport, Model, ModelSpec};
use crate::stats::{ks_critical_value_1pct, MseComparison, Summary, TrialStats};

/// Mean checks under the independent model use this many standard errors.
pub const MEAN_BAND_SE: f64 = 3.0;
/// Largest accepted `|mean / θ - 1|` under the exact model.
pub const EXACT_MEAN_REL_BAND: f64 = 0.01;
/// Accepted relative deviation of `variance (km - 2) / θ²` from 1.
pub const INDEPENDENT_VAR_BAND: f64 = 0.10;
pub const EXACT_VAR_BAND: f64 = 0.20;
/// Required MSE advantage of xi-hat, in paired standard errors.
pub const DOMINANCE_MARGIN_SE: f64 = 3.0;

/// One CSV row per (model, estimator, θ, k, m).
#[derive(Debug, Clone, Serialize)]
pub struct SimRow {
    pub model: Model,
    pub estimator: EstimatorId,
    pub theta: u64,
    pub k: u32,
    pub m: u32,
    pub trials: u64,
    pub mean: f64,
    pub variance: f64,
    pub se: f64,
    pub rel_bias: f64,
    pub rel_var_ratio: f64,
    pub seed: u64,
}

impl SimRow {
    pub fn new(spec: &ModelSpec, stats: &TrialStats) -> SimRow {
        SimRow {
            model: spec.model,
            estimator: stats.estimator,
            theta: spec.theta,
            k: spec.k,
            m: spec.m,
            trials: stats.trials,
            mean: stats.sample_mean,
            variance: stats.sample_variance,
            se: stats.standard_error_of_mean,
            rel_bias: stats.rel_bias(),
            rel_var_ratio: stats.rel_var_ratio(spec.k, spec.m),
            seed: spec.rng_seed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, passed: bool, detail: String) -> Self {
        CheckOutcome {
            name: name.into(),
            passed,
            detail,
        }
    }
}

/// Unbiasedness: 3 SE under the independent model, 1% under the exact one.
pub fn check_mean(model: Model, stats: &TrialStats) -> CheckOutcome {
    let name = format!("mean[{}]", stats.estimator);
    match model {
        Model::Independent => {
            let dev = (stats.sample_mean - stats.theta as f64).abs();
            let band = MEAN_BAND_SE * stats.standard_error_of_mean;
            CheckOutcome::new(
                name,
                dev <= band,
                format!("|mean - theta| = {dev:.6}, allowed {band:.6}"),
            )
        }
        Model::Exact => {
            let bias = stats.rel_bias();
            CheckOutcome::new(
                name,
                bias.abs() <= EXACT_MEAN_REL_BAND,
                format!("relative bias {bias:+.6}, allowed ±{EXACT_MEAN_REL_BAND}"),
            )
        }
    }
}

/// Variance of xi-hat against `θ² / (km - 2)`.
pub fn check_variance(model: Model, k: u32, m: u32, stats: &TrialStats) -> CheckOutcome {
    let band = match model {
        Model::Independent => INDEPENDENT_VAR_BAND,
        Model::Exact => EXACT_VAR_BAND,
    };
    let ratio = stats.rel_var_ratio(k, m);
    CheckOutcome::new(
        format!("variance[{}]", stats.estimator),
        (ratio - 1.0).abs() <= band,
        format!("variance * (km - 2) / theta^2 = {ratio:.6}, allowed 1 ± {band}"),
    )
}

pub fn check_dominance(competitor: EstimatorId, cmp: &MseComparison) -> CheckOutcome {
    let margin = cmp.margin_in_se();
    CheckOutcome::new(
        format!("dominance[xi-hat vs {competitor}]"),
        margin >= DOMINANCE_MARGIN_SE,
        format!(
            "MSE xi-hat {:.6e} vs {:.6e}, margin {margin:.2} paired SE, need {DOMINANCE_MARGIN_SE}",
            cmp.mse_a, cmp.mse_b
        ),
    )
}

pub fn check_coverage(report: &CoverageReport) -> CheckOutcome {
    let floor = report.bound - 3.0 * (0.25 / report.trials as f64).sqrt();
    CheckOutcome::new(
        "coverage",
        report.empirical_p >= floor,
        format!(
            "empirical {:.6}, bound {:.6}, floor {floor:.6}",
            report.empirical_p, report.bound
        ),
    )
}

pub fn check_ks(statistic: f64, n: usize) -> CheckOutcome {
    let crit = ks_critical_value_1pct(n);
    CheckOutcome::new(
        "limit-law-ks",
        statistic < crit,
        format!("KS {statistic:.6} vs 1% critical value {crit:.6} (n = {n})"),
    )
}

pub fn check_naive(theta: u64, summary: &Summary) -> CheckOutcome {
    let want = 1.0 / (theta as f64 + 1.0);
    let dev = (summary.mean - want).abs();
    let band = MEAN_BAND_SE * summary.standard_error;
    CheckOutcome::new(
        "naive-min",
        dev <= band,
        format!(
            "mean {:.6e}, target {want:.6e}, allowed ±{band:.3e}",
            summary.mean
        ),
    )
}
