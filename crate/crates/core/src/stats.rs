//! Sample summaries and goodness-of-fit statistics used by the simulation harness.

use serde::Serialize;

use crate::estimators::EstimatorId;

/// Mean, unbiased sample variance and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub n: u64,
    pub mean: f64,
    pub variance: f64,
    pub standard_error: f64,
}

impl Summary {
    /// Two-pass summary in index order. A single sample has zero variance.
    pub fn of(samples: &[f64]) -> Summary {
        let n = samples.len();
        if n == 0 {
            return Summary {
                n: 0,
                mean: f64::NAN,
                variance: f64::NAN,
                standard_error: f64::NAN,
            };
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let variance = if n > 1 {
            samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Summary {
            n: n as u64,
            mean,
            variance,
            standard_error: (variance / n as f64).sqrt(),
        }
    }
}

/// Monte-Carlo summary of one estimator at one true cardinality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialStats {
    pub estimator: EstimatorId,
    pub theta: u64,
    pub trials: u64,
    pub sample_mean: f64,
    pub sample_variance: f64,
    pub standard_error_of_mean: f64,
}

impl TrialStats {
    pub fn from_samples(estimator: EstimatorId, theta: u64, samples: &[f64]) -> TrialStats {
        let s = Summary::of(samples);
        TrialStats {
            estimator,
            theta,
            trials: s.n,
            sample_mean: s.mean,
            sample_variance: s.variance,
            standard_error_of_mean: s.standard_error,
        }
    }

    /// `mean / θ - 1`
    pub fn rel_bias(&self) -> f64 {
        self.sample_mean / self.theta as f64 - 1.0
    }

    /// `variance · (k m - 2) / θ²`; equals 1 when the variance hits `θ² / (k m - 2)`.
    pub fn rel_var_ratio(&self, k: u32, m: u32) -> f64 {
        let theta = self.theta as f64;
        self.sample_variance * (k as f64 * m as f64 - 2.0) / (theta * theta)
    }

    /// Distance of the mean from `θ` in standard errors.
    pub fn mean_z(&self) -> f64 {
        (self.sample_mean - self.theta as f64) / self.standard_error_of_mean
    }
}

/// Mean squared error of two estimators evaluated on the same trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MseComparison {
    pub mse_a: f64,
    pub mse_b: f64,
    /// Mean of the per-trial differences `(a - θ)² - (b - θ)²`.
    pub mean_difference: f64,
    /// Standard error of `mean_difference` from the paired differences.
    pub paired_se: f64,
    /// `sqrt(se(mse_a)² + se(mse_b)²)`, ignoring the pairing.
    pub unpaired_se: f64,
}

impl MseComparison {
    pub fn new(theta: f64, a: &[f64], b: &[f64]) -> MseComparison {
        assert_eq!(a.len(), b.len(), "paired samples must have equal length");
        let sq = |xs: &[f64]| {
            xs.iter()
                .map(|x| (x - theta) * (x - theta))
                .collect::<Vec<_>>()
        };
        let (sa, sb) = (sq(a), sq(b));
        let diffs: Vec<f64> = sa.iter().zip(&sb).map(|(x, y)| x - y).collect();
        let (ta, tb, td) = (Summary::of(&sa), Summary::of(&sb), Summary::of(&diffs));
        MseComparison {
            mse_a: ta.mean,
            mse_b: tb.mean,
            mean_difference: td.mean,
            paired_se: td.standard_error,
            unpaired_se: ta.standard_error.hypot(tb.standard_error),
        }
    }

    /// How many paired standard errors `a` beats `b` by (positive when `a` is better).
    pub fn margin_in_se(&self) -> f64 {
        -self.mean_difference / self.paired_se
    }
}

/// One-sample Kolmogorov–Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic 1% critical value of the one-sample KS statistic, `1.63 / √n`.
pub fn ks_critical_value_1pct(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}
