//! Seeded mapping from byte-string words to the unit interval.
//!
//! Words go through 64-bit XXH64 and the result `v` is mapped to
//! `(v + 1) / 2^64`, which lands in `(0, 1]`. Zero is excluded so that
//! downstream estimators can always take logs and reciprocals.

use std::fmt;

use serde::{Deserialize, Serialize};
use xxhash_rust::xxh64::xxh64;

use crate::error::DecodeError;

const TWO_POW_NEG_64: f64 = 1.0 / 18_446_744_073_709_551_616.0;

/// Hash algorithm identifier, recorded as one byte in the sketch file header.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HashAlgorithm {
    #[default]
    Xxh64,
}

impl HashAlgorithm {
    pub const fn id(self) -> u8 {
        match self {
            HashAlgorithm::Xxh64 => 1,
        }
    }

    pub fn from_id(id: u8) -> Result<Self, DecodeError> {
        match id {
            1 => Ok(HashAlgorithm::Xxh64),
            other => Err(DecodeError::UnknownHash(other)),
        }
    }

    fn hash64(self, seed: u64, word: &[u8]) -> u64 {
        match self {
            HashAlgorithm::Xxh64 => xxh64(word, seed),
        }
    }
}

impl fmt::Display for HashAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HashAlgorithm::Xxh64 => f.write_str("xxh64"),
        }
    }
}

/// A seeded hash from words to `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnitHash {
    seed: u64,
    algorithm: HashAlgorithm,
}

impl UnitHash {
    pub fn new(seed: u64) -> Self {
        Self::with_algorithm(seed, HashAlgorithm::default())
    }

    pub fn with_algorithm(seed: u64, algorithm: HashAlgorithm) -> Self {
        UnitHash { seed, algorithm }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn algorithm(&self) -> HashAlgorithm {
        self.algorithm
    }

    /// Raw 64-bit hash of `word`.
    pub fn hash64(&self, word: &[u8]) -> u64 {
        self.algorithm.hash64(self.seed, word)
    }

    /// Maps `word` into `(0, 1]`.
    pub fn hash_to_unit(&self, word: &[u8]) -> f64 {
        u64_to_unit(self.hash64(word))
    }
}

/// `(v + 1) / 2^64`, rounded to the nearest binary64.
#[inline]
pub fn u64_to_unit(v: u64) -> f64 {
    ((v as u128 + 1) as f64) * TWO_POW_NEG_64
}
