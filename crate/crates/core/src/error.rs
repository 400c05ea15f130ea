use thiserror::Error;

use crate::sketch::SketchConfig;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid sketch config (k = {k}, m = {m}): {reason}")]
    InvalidConfig {
        k: u32,
        m: u32,
        reason: &'static str,
    },

    #[error("sketch configs differ: {left} vs {right}")]
    ConfigMismatch {
        left: SketchConfig,
        right: SketchConfig,
    },

    #[error("malformed sketch bytes: {0}")]
    Decode(#[from] DecodeError),

    #[error("unknown estimator {0:?} (expected xi-hat, xi3, xi1, xi2 or moment:ALPHA)")]
    UnknownEstimator(String),

    #[error("{0}")]
    Domain(String),

    #[error("invalid simulation parameters: {0}")]
    InvalidModel(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("bad magic bytes")]
    BadMagic,
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u8),
    #[error("unknown hash algorithm id {0}")]
    UnknownHash(u8),
    #[error("unexpected end of input")]
    Truncated,
    #[error("{0} trailing bytes after last bucket")]
    TrailingBytes(usize),
    #[error("{0}")]
    InvalidPayload(String),
}
