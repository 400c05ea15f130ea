//! Monte-Carlo harness for the estimators.
//!
//! Two models produce the per-trial k-th minima:
//!
//! * **independent**: the `m` minima are drawn directly as i.i.d.
//!   `Gamma(k, θ)` variables;
//! * **exact**: `θ` i.i.d. uniforms are pushed through a real [`Sketch`] and
//!   its k-th minima are read back, so every run also exercises the sketch.
//!
//! Trial `t` draws from its own ChaCha8 stream seeded with
//! `xxh64(t as little-endian u64, rng_seed)`. Trials may run in parallel;
//! results are gathered in trial order, so summaries are bit-reproducible.

use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use xxhash_rust::xxh64::xxh64;

use crate::error::{Error, Result};
use crate::estimators::EstimatorId;
use crate::sketch::{KthValues, Sketch, SketchConfig};
use crate::special::gamma_cdf;
use crate::stats::{ks_statistic, Summary, TrialStats};

const TWO_POW_NEG_53: f64 = 1.0 / 9_007_199_254_740_992.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Independent,
    Exact,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Independent => "independent",
            Model::Exact => "exact",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "independent" => Ok(Model::Independent),
            "exact" => Ok(Model::Exact),
            other => Err(Error::InvalidModel(format!(
                "unknown model {other:?} (expected independent or exact)"
            ))),
        }
    }
}

/// Parameters of one simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model: Model,
    /// True number of distinct elements.
    pub theta: u64,
    pub k: u32,
    pub m: u32,
    pub trials: u64,
    pub rng_seed: u64,
}

impl ModelSpec {
    fn validate_shape(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidModel("trials must be at least 1".into()));
        }
        if self.theta == 0 {
            return Err(Error::InvalidModel("theta must be at least 1".into()));
        }
        if self.k == 0 || self.m == 0 {
            return Err(Error::InvalidModel("k and m must be at least 1".into()));
        }
        Ok(())
    }

    /// Checks the spec for runs that feed estimators, which need `k m >= 3`.
    pub fn validate(&self) -> Result<()> {
        self.validate_shape()?;
        SketchConfig::new(self.k, self.m, 0)?;
        Ok(())
    }

    fn require(&self, model: Model) -> Result<()> {
        if self.model != model {
            return Err(Error::InvalidModel(format!(
                "this run needs the {model} model, got {}",
                self.model
            )));
        }
        Ok(())
    }
}

/// Deterministic RNG for trial `trial` of a run seeded with `rng_seed`.
pub fn trial_rng(rng_seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(xxh64(&trial.to_le_bytes(), rng_seed))
}

/// Uniform on `(0, 1]` with 53 bits of resolution.
#[inline]
pub fn uniform_open_closed<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * TWO_POW_NEG_53
}

/// Exponential variate with the given rate, by inverse CDF.
#[inline]
pub fn sample_exponential<R: RngCore + ?Sized>(rate: f64, rng: &mut R) -> f64 {
    -uniform_open_closed(rng).ln() / rate
}

/// `Gamma(k, θ)` variate (shape `k`, rate `θ`) as a sum of `k` exponentials.
pub fn sample_gamma<R: RngCore + ?Sized>(k: u32, theta: f64, rng: &mut R) -> f64 {
    (0..k).map(|_| sample_exponential(theta, rng)).sum()
}

/// Sketch for a simulated stream. Hashing is bypassed, so the seed is irrelevant;
/// `k m >= 3` is not required because no estimator may be involved.
fn exact_sketch<R: RngCore + ?Sized>(theta: u64, k: u32, m: u32, rng: &mut R) -> Sketch {
    let config = SketchConfig::unchecked(k, m);
    let mut sketch = Sketch::new(config);
    for _ in 0..theta {
        sketch.insert_unit(uniform_open_closed(rng));
    }
    sketch
}

/// k-th minima of trial `trial` on the bucket-offset scale.
pub fn trial_minima(spec: &ModelSpec, trial: u64) -> Vec<f64> {
    let mut rng = trial_rng(spec.rng_seed, trial);
    match spec.model {
        Model::Independent => (0..spec.m)
            .map(|_| sample_gamma(spec.k, spec.theta as f64, &mut rng))
            .collect(),
        Model::Exact => exact_sketch(spec.theta, spec.k, spec.m, &mut rng)
            .kth_values()
            .bucket_offsets(),
    }
}

/// Runs every trial and applies each estimator to the same minima.
/// Returns `samples[e][t]`, the estimate of estimator `e` in trial `t`.
pub fn collect_estimates(spec: &ModelSpec, estimators: &[EstimatorId]) -> Result<Vec<Vec<f64>>> {
    spec.validate()?;
    let per_trial: Vec<Vec<f64>> = (0..spec.trials)
        .into_par_iter()
        .map(|t| {
            let minima = trial_minima(spec, t);
            estimators
                .iter()
                .map(|e| e.estimate(&minima, spec.k).map(|est| est.value))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    Ok((0..estimators.len())
        .map(|e| per_trial.iter().map(|row| row[e]).collect())
        .collect())
}

/// Summaries for several estimators over one shared set of trials.
pub fn run(spec: &ModelSpec, estimators: &[EstimatorId]) -> Result<Vec<TrialStats>> {
    let samples = collect_estimates(spec, estimators)?;
    Ok(estimators
        .iter()
        .zip(&samples)
        .map(|(e, xs)| TrialStats::from_samples(*e, spec.theta, xs))
        .collect())
}

pub fn run_independent(spec: &ModelSpec, estimator: EstimatorId) -> Result<TrialStats> {
    spec.require(Model::Independent)?;
    Ok(run(spec, &[estimator])?.remove(0))
}

pub fn run_exact(spec: &ModelSpec, estimator: EstimatorId) -> Result<TrialStats> {
    spec.require(Model::Exact)?;
    Ok(run(spec, &[estimator])?.remove(0))
}

/// Empirical probability that every bucket holds at least `k` values,
/// with the bound `1 - 2m exp(-θ / (2m²))` alongside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageReport {
    pub empirical_p: f64,
    pub bound: f64,
    pub trials: u64,
}

pub fn coverage_bound(theta: u64, m: u32) -> f64 {
    let m = m as f64;
    1.0 - 2.0 * m * (-(theta as f64) / (2.0 * m * m)).exp()
}

pub fn coverage_probability(spec: &ModelSpec) -> Result<CoverageReport> {
    spec.require(Model::Exact)?;
    spec.validate_shape()?;
    let hits: u64 = (0..spec.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(spec.rng_seed, t);
            let kv: KthValues = exact_sketch(spec.theta, spec.k, spec.m, &mut rng).kth_values();
            u64::from(kv.all_buckets_full())
        })
        .sum();
    Ok(CoverageReport {
        empirical_p: hits as f64 / spec.trials as f64,
        bound: coverage_bound(spec.theta, spec.m),
        trials: spec.trials,
    })
}

/// Pooled values `θ · X_(k),i` from exact-model trials, in trial then bucket order.
pub fn limit_law_samples(
    theta: u64,
    k: u32,
    m: u32,
    trials: u64,
    rng_seed: u64,
) -> Result<Vec<f64>> {
    let spec = ModelSpec {
        model: Model::Exact,
        theta,
        k,
        m,
        trials,
        rng_seed,
    };
    spec.validate_shape()?;
    let per_trial: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| trial_minima(&spec, t))
        .collect();
    Ok(per_trial
        .into_iter()
        .flatten()
        .map(|x| x * theta as f64)
        .collect())
}

/// KS statistic of the pooled `θ · X_(k),i` against the unit-rate `Gamma(k)` CDF.
pub fn limit_law_ks(theta: u64, k: u32, m: u32, trials: u64, rng_seed: u64) -> Result<f64> {
    let pooled = limit_law_samples(theta, k, m, trials, rng_seed)?;
    Ok(ks_statistic(&pooled, |t| gamma_cdf(k as f64, t)))
}

fn min_of_uniforms(theta: u64, rng: &mut ChaCha8Rng) -> f64 {
    (0..theta)
        .map(|_| uniform_open_closed(rng))
        .fold(f64::INFINITY, f64::min)
}

/// Monte-Carlo summary of the minimum of `θ` uniforms.
pub fn naive_min_expectation(theta: u64, trials: u64, rng_seed: u64) -> Result<Summary> {
    if theta == 0 || trials == 0 {
        return Err(Error::InvalidModel(
            "theta and trials must be at least 1".into(),
        ));
    }
    let mins: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| min_of_uniforms(theta, &mut trial_rng(rng_seed, t)))
        .collect();
    Ok(Summary::of(&mins))
}

/// Running mean of `1 / X_(1)` at each checkpoint (a trial count), which has
/// no finite expectation and keeps drifting upward.
pub fn naive_reciprocal_running_means(
    theta: u64,
    checkpoints: &[u64],
    rng_seed: u64,
) -> Result<Vec<(u64, f64)>> {
    if theta == 0 {
        return Err(Error::InvalidModel("theta must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut sum = 0.0;
    let mut done = 0u64;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    for &cp in checkpoints {
        while done < cp {
            sum += 1.0 / min_of_uniforms(theta, &mut rng);
            done += 1;
        }
        out.push((cp, sum / cp.max(1) as f64));
    }
    Ok(out)
}

/// Draws a `Gamma(k, 1)` sample of size `n`; used to self-test the KS path.
pub fn gamma_sample(k: u32, n: usize, rng_seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    (0..n).map(|_| sample_gamma(k, 1.0, &mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_range() {
        let mut rng = trial_rng(1, 0);
        for _ in 0..100_000 {
            let u = uniform_open_closed(&mut rng);
            assert!(u > 0.0 && u <= 1.0);
        }
    }

    #[test]
    fn trial_streams_differ_and_repeat() {
        let a = trial_rng(5, 0).next_u64();
        let b = trial_rng(5, 1).next_u64();
        assert_ne!(a, b);
        assert_eq!(a, trial_rng(5, 0).next_u64());
    }

    #[test]
    fn exponential_matches_inverse_cdf() {
        let mut r1 = trial_rng(9, 3);
        let mut r2 = trial_rng(9, 3);
        let u = uniform_open_closed(&mut r1);
        assert_eq!(sample_exponential(2.0, &mut r2), -u.ln() / 2.0);
    }

    #[test]
    fn validation() {
        let mut spec = ModelSpec {
            model: Model::Independent,
            theta: 10,
            k: 3,
            m: 4,
            trials: 1,
            rng_seed: 0,
        };
        assert!(spec.validate().is_ok());
        spec.trials = 0;
        assert!(spec.validate().is_err());
        spec.trials = 1;
        spec.theta = 0;
        assert!(spec.validate().is_err());
        spec.theta = 1;
        spec.k = 1;
        spec.m = 1;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn wrong_model_rejected() {
        let spec = ModelSpec {
            model: Model::Independent,
            theta: 10,
            k: 3,
            m: 4,
            trials: 2,
            rng_seed: 0,
        };
        assert!(run_exact(&spec, EstimatorId::XiHat).is_err());
        assert!(coverage_probability(&spec).is_err());
    }

    #[test]
    fn coverage_bound_values() {
        // 20 e^{-50} is far below one ulp of 1.0
        let deficit = 20.0 * (-50.0f64).exp();
        assert!(deficit > 3.85e-21 && deficit < 3.87e-21);
        assert_eq!(coverage_bound(10_000, 10), 1.0 - deficit);
        assert!(coverage_bound(1, 10) < 0.0);
    }

    #[test]
    fn model_parse() {
        assert_eq!("exact".parse::<Model>().unwrap(), Model::Exact);
        assert!("other".parse::<Model>().is_err());
    }
}
