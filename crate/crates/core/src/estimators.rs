//! Cardinality estimators over the `m` bucket k-th minima.
//!
//! Every estimator takes the k-th minima on the bucket-offset scale, i.e.
//! the distance of each bucket's k-th smallest value from the bucket's left
//! edge. When the stream has `θ` distinct elements these behave like
//! independent `Gamma(k, θ)` variables, which is where all unbiasing
//! constants below come from.
//!
//! Only the k-th minima are accepted: the other `k - 1` values per bucket
//! carry no information about `θ` once the k-th one is known.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::sketch::Sketch;
use crate::special::ln_gamma;

/// Which estimator to apply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimatorId {
    /// `(k m - 1) / S`, the minimum-variance unbiased estimator.
    XiHat,
    /// Geometric-mean estimator.
    Xi3Log,
    /// Power-mean family with exponent `alpha`; `-1` is the inverse
    /// estimator and `1/2` the square-root one.
    Moment(f64),
}

impl EstimatorId {
    pub const INVERSE: EstimatorId = EstimatorId::Moment(-1.0);
    pub const SQRT: EstimatorId = EstimatorId::Moment(0.5);

    pub fn estimate(&self, minima: &[f64], k: u32) -> Result<Estimate> {
        match *self {
            EstimatorId::XiHat => xi_hat(minima, k),
            EstimatorId::Xi3Log => xi3_log(minima, k),
            EstimatorId::Moment(alpha) => xi_moment(minima, k, alpha),
        }
    }
}

impl fmt::Display for EstimatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimatorId::XiHat => f.write_str("xi-hat"),
            EstimatorId::Xi3Log => f.write_str("xi3"),
            EstimatorId::Moment(alpha) => write!(f, "moment:{alpha}"),
        }
    }
}

impl FromStr for EstimatorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownEstimator(s.to_string());
        match s.trim().to_ascii_lowercase().as_str() {
            "xi-hat" | "xi_hat" | "xihat" => Ok(EstimatorId::XiHat),
            "xi3" | "xi3-log" | "xi3_log" => Ok(EstimatorId::Xi3Log),
            "xi1" => Ok(EstimatorId::INVERSE),
            "xi2" => Ok(EstimatorId::SQRT),
            other => {
                let alpha: f64 = other
                    .strip_prefix("moment:")
                    .ok_or_else(unknown)?
                    .parse()
                    .map_err(|_| unknown())?;
                if alpha == 0.0 || !alpha.is_finite() {
                    return Err(unknown());
                }
                Ok(EstimatorId::Moment(alpha))
            }
        }
    }
}

impl Serialize for EstimatorId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EstimatorId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A point estimate of the number of distinct elements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub estimator: EstimatorId,
    pub value: f64,
    pub k: u32,
    pub m: u32,
}

fn check_minima(minima: &[f64]) -> Result<u32> {
    if minima.is_empty() {
        return Err(Error::Domain("no k-th minima given".into()));
    }
    if let Some(v) = minima.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::Domain(format!("k-th minimum {v} is not positive")));
    }
    u32::try_from(minima.len()).map_err(|_| Error::Domain("too many buckets".into()))
}

fn finish(estimator: EstimatorId, value: f64, k: u32, m: u32) -> Result<Estimate> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::Domain(format!("{estimator} produced {value}")));
    }
    Ok(Estimate {
        estimator,
        value,
        k,
        m,
    })
}

/// `(k m - 1) / Σ minima`, summed left to right.
pub fn xi_hat(minima: &[f64], k: u32) -> Result<Estimate> {
    let m = check_minima(minima)?;
    let km = k as u64 * m as u64;
    if km < 3 {
        return Err(Error::Domain(format!("xi-hat needs k * m >= 3, got {km}")));
    }
    let sum = minima.iter().fold(0.0, |acc, v| acc + v);
    finish(EstimatorId::XiHat, (km - 1) as f64 / sum, k, m)
}

/// `(Γ(k - 1/m) / Γ(k))^{-m} · exp(-(1/m) Σ ln minima)`, evaluated in log space.
pub fn xi3_log(minima: &[f64], k: u32) -> Result<Estimate> {
    let m = check_minima(minima)?;
    let shifted = k as f64 - 1.0 / m as f64;
    if shifted <= 0.0 {
        return Err(Error::Domain(format!(
            "xi3 needs k - 1/m > 0, got k = {k}, m = {m}"
        )));
    }
    let mf = m as f64;
    let log_ratio = ln_gamma(shifted) - ln_gamma(k as f64);
    let mean_log = minima.iter().map(|v| v.ln()).sum::<f64>() / mf;
    finish(
        EstimatorId::Xi3Log,
        (-mf * log_ratio - mean_log).exp(),
        k,
        m,
    )
}

/// `[c / ((1/m) Σ minima^α)]^{1/α}` with `c = Γ(k + α) / Γ(k)`, the
/// `α`-th moment of a unit-rate `Gamma(k)` variable.
pub fn xi_moment(minima: &[f64], k: u32, alpha: f64) -> Result<Estimate> {
    let m = check_minima(minima)?;
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::Domain(format!(
            "moment exponent must be finite and non-zero, got {alpha}"
        )));
    }
    if k as f64 + alpha <= 0.0 {
        return Err(Error::Domain(format!(
            "moment estimator needs k + alpha > 0, got k = {k}, alpha = {alpha}"
        )));
    }
    let c = (ln_gamma(k as f64 + alpha) - ln_gamma(k as f64)).exp();
    let mean_pow = minima.iter().map(|v| v.powf(alpha)).sum::<f64>() / m as f64;
    finish(
        EstimatorId::Moment(alpha),
        (c / mean_pow).powf(1.0 / alpha),
        k,
        m,
    )
}

impl Sketch {
    /// Applies `estimator` to this sketch's k-th minima.
    pub fn estimate(&self, estimator: EstimatorId) -> Result<Estimate> {
        let offsets = self.kth_values().bucket_offsets();
        estimator.estimate(&offsets, self.config().k())
    }
}
