//! Bucketed k-minimum-values sketch.
//!
//! The unit interval is cut into `m` half-open buckets `[i/m, (i+1)/m)`
//! (zero-based `i`). Each bucket keeps the `k` smallest distinct hashed
//! values routed to it, as raw values in ascending order. Renormalization
//! to the unit interval happens only when [`Sketch::kth_values`] is called.
//!
//! An empty slot plays the role of the `i/m` initial value: it renormalizes
//! to exactly `1`, so a bucket that has seen fewer than `k` distinct values
//! reports a k-th minimum of `1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hash::{HashAlgorithm, UnitHash};

/// Parameters of a sketch: `k` minima per bucket, `m` buckets, hash seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SketchConfig {
    k: u32,
    m: u32,
    seed: u64,
    hash: HashAlgorithm,
}

impl SketchConfig {
    pub fn new(k: u32, m: u32, seed: u64) -> Result<Self> {
        Self::with_hash(k, m, seed, HashAlgorithm::default())
    }

    pub fn with_hash(k: u32, m: u32, seed: u64, hash: HashAlgorithm) -> Result<Self> {
        let invalid = |reason| Error::InvalidConfig { k, m, reason };
        if k == 0 {
            return Err(invalid("k must be at least 1"));
        }
        if m == 0 {
            return Err(invalid("m must be at least 1"));
        }
        if (k as u64) * (m as u64) < 3 {
            return Err(invalid("k * m must be at least 3"));
        }
        Ok(SketchConfig { k, m, seed, hash })
    }

    /// Skips the `k * m >= 3` check; for simulations that never run an estimator.
    pub(crate) fn unchecked(k: u32, m: u32) -> Self {
        assert!(k >= 1 && m >= 1);
        SketchConfig {
            k,
            m,
            seed: 0,
            hash: HashAlgorithm::default(),
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn hash(&self) -> HashAlgorithm {
        self.hash
    }

    /// Number of stored values when every bucket is full, `k * m`.
    pub fn memory_budget(&self) -> usize {
        self.k as usize * self.m as usize
    }

    pub fn hasher(&self) -> UnitHash {
        UnitHash::with_algorithm(self.seed, self.hash)
    }

    /// Zero-based bucket index of a value in `(0, 1]`. `1.0` goes to the last bucket.
    #[inline]
    pub fn bucket_of(&self, x: f64) -> usize {
        ((x * self.m as f64) as usize).min(self.m as usize - 1)
    }
}

impl fmt::Display for SketchConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={} m={} seed={} hash={}",
            self.k, self.m, self.seed, self.hash
        )
    }
}

/// One-pass distinct counting sketch holding at most `k * m` values.
#[derive(Debug, Clone)]
pub struct Sketch {
    config: SketchConfig,
    hasher: UnitHash,
    // each bucket sorted ascending, pairwise distinct, len <= k
    buckets: Vec<Vec<f64>>,
    items_seen: u64,
}

impl PartialEq for Sketch {
    // items_seen is a diagnostic counter and does not take part in equality
    fn eq(&self, other: &Self) -> bool {
        self.config == other.config && self.buckets == other.buckets
    }
}

impl Sketch {
    pub fn new(config: SketchConfig) -> Self {
        Sketch {
            config,
            hasher: config.hasher(),
            buckets: vec![Vec::new(); config.m as usize],
            items_seen: 0,
        }
    }

    /// Rebuilds a sketch from raw bucket contents, checking every invariant.
    pub fn from_buckets(config: SketchConfig, buckets: Vec<Vec<f64>>) -> Result<Self> {
        let invalid = |msg: String| Error::Decode(crate::error::DecodeError::InvalidPayload(msg));
        if buckets.len() != config.m as usize {
            return Err(invalid(format!(
                "expected {} buckets, got {}",
                config.m,
                buckets.len()
            )));
        }
        for (i, bucket) in buckets.iter().enumerate() {
            if bucket.len() > config.k as usize {
                return Err(invalid(format!(
                    "bucket {i} holds {} values, more than k = {}",
                    bucket.len(),
                    config.k
                )));
            }
            for &v in bucket {
                if !(v > 0.0 && v <= 1.0) {
                    return Err(invalid(format!("bucket {i} holds {v}, outside (0, 1]")));
                }
                if config.bucket_of(v) != i {
                    return Err(invalid(format!(
                        "value {v} recorded in bucket {i} belongs to bucket {}",
                        config.bucket_of(v)
                    )));
                }
            }
            for pair in bucket.windows(2) {
                if pair[0] == pair[1] {
                    return Err(invalid(format!("bucket {i} repeats value {}", pair[0])));
                }
                if pair[0] > pair[1] {
                    return Err(invalid(format!("bucket {i} is not in ascending order")));
                }
            }
        }
        Ok(Sketch {
            config,
            hasher: config.hasher(),
            buckets,
            items_seen: 0,
        })
    }

    pub fn config(&self) -> &SketchConfig {
        &self.config
    }

    /// Number of insertions into this instance (duplicates included).
    pub fn items_seen(&self) -> u64 {
        self.items_seen
    }

    /// Total number of stored values, never more than `k * m`.
    pub fn stored_len(&self) -> usize {
        self.buckets.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.iter().all(Vec::is_empty)
    }

    /// Raw stored values of bucket `i` (zero-based), ascending.
    pub fn bucket(&self, i: usize) -> &[f64] {
        &self.buckets[i]
    }

    pub fn buckets(&self) -> impl ExactSizeIterator<Item = &[f64]> {
        self.buckets.iter().map(Vec::as_slice)
    }

    pub fn insert(&mut self, word: &[u8]) {
        let x = self.hasher.hash_to_unit(word);
        self.insert_unit(x);
    }

    /// Inserts an already-hashed value, bypassing the word hash.
    ///
    /// Panics if `x` is not in `(0, 1]`.
    pub fn insert_unit(&mut self, x: f64) {
        assert!(x > 0.0 && x <= 1.0, "hashed value {x} outside (0, 1]");
        self.items_seen += 1;
        let k = self.config.k as usize;
        let bucket = &mut self.buckets[self.config.bucket_of(x)];
        if bucket.len() == k && x >= bucket[k - 1] {
            return;
        }
        if let Err(pos) = bucket.binary_search_by(|v| v.total_cmp(&x)) {
            if bucket.len() == k {
                bucket.pop();
            }
            bucket.insert(pos, x);
        }
    }

    /// Renormalized k-th minimum of every bucket.
    pub fn kth_values(&self) -> KthValues {
        let k = self.config.k as usize;
        let m = self.config.m as f64;
        let values = self
            .buckets
            .iter()
            .enumerate()
            .map(|(i, bucket)| {
                if bucket.len() < k {
                    1.0
                } else {
                    // a value sitting exactly on the left edge would renormalize to 0
                    (m * bucket[k - 1] - i as f64).max(f64::MIN_POSITIVE)
                }
            })
            .collect();
        KthValues::from_parts(values)
    }

    /// Merges `other` into `self`. Both sketches must share the same config.
    pub fn merge_from(&mut self, other: &Sketch) -> Result<()> {
        if self.config != other.config {
            return Err(Error::ConfigMismatch {
                left: self.config,
                right: other.config,
            });
        }
        let k = self.config.k as usize;
        for (mine, theirs) in self.buckets.iter_mut().zip(&other.buckets) {
            if !theirs.is_empty() {
                *mine = merge_sorted_distinct(mine, theirs, k);
            }
        }
        self.items_seen += other.items_seen;
        Ok(())
    }

    pub fn merge(&self, other: &Sketch) -> Result<Sketch> {
        let mut out = self.clone();
        out.merge_from(other)?;
        Ok(out)
    }
}

fn merge_sorted_distinct(a: &[f64], b: &[f64], k: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(k);
    let (mut i, mut j) = (0, 0);
    while out.len() < k && (i < a.len() || j < b.len()) {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(&x), Some(&y)) if y < x => {
                j += 1;
                y
            }
            (Some(&x), Some(_)) => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    out
}

/// The `m` renormalized k-th minima of a sketch, each in `(0, 1]`.
///
/// Entry `i` is `m * (X_(k),i - i/m)` for a full bucket and `1` otherwise.
/// The estimators work on the within-bucket offsets `X_(k),i - i/m`, which
/// are the entries divided by `m`; see [`KthValues::bucket_offsets`].
#[derive(Debug, Clone, PartialEq)]
pub struct KthValues {
    values: Vec<f64>,
    sum: f64,
}

impl KthValues {
    /// Builds from explicit entries; each must lie in `(0, 1]`.
    pub fn from_entries(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("k-th values need at least one bucket".into()));
        }
        if let Some(bad) = values.iter().find(|v| !(**v > 0.0 && **v <= 1.0)) {
            return Err(Error::Domain(format!("k-th value {bad} outside (0, 1]")));
        }
        Ok(Self::from_parts(values))
    }

    fn from_parts(values: Vec<f64>) -> Self {
        let sum = values.iter().fold(0.0, |acc, v| acc + v);
        KthValues { values, sum }
    }

    pub fn entries(&self) -> &[f64] {
        &self.values
    }

    /// Left-to-right sum of the entries.
    pub fn sum(&self) -> f64 {
        self.sum
    }

    pub fn m(&self) -> usize {
        self.values.len()
    }

    /// Entries scaled back to the bucket width: the k-th minimum's offset
    /// from its bucket's left edge, in `(0, 1/m]`. This is the estimator input.
    pub fn bucket_offsets(&self) -> Vec<f64> {
        let m = self.values.len() as f64;
        self.values.iter().map(|v| v / m).collect()
    }

    /// True when every bucket is full, i.e. every k-th minimum lies strictly
    /// inside its bucket.
    pub fn all_buckets_full(&self) -> bool {
        self.values.iter().all(|&v| v < 1.0)
    }
}
