//! One-pass, constant-memory distinct counting with a bucketed
//! k-minimum-values sketch.
//!
//! Words are hashed into `(0, 1]`, routed to one of `m` equal sub-intervals,
//! and each sub-interval keeps its `k` smallest distinct hashed values. The
//! number of distinct words is then estimated from the `m` k-th minima,
//! by default with `(k m - 1) / Σ X_(k),i`.
//!
//! ```
//! use kmvc_core::{EstimatorId, Sketch, SketchConfig};
//!
//! let mut sketch = Sketch::new(SketchConfig::new(8, 128, 0).unwrap());
//! for i in 0..50_000u32 {
//!     sketch.insert(i.to_string().as_bytes());
//! }
//! let est = sketch.estimate(EstimatorId::XiHat).unwrap();
//! assert!((est.value / 50_000.0 - 1.0).abs() < 0.15);
//! ```

mod codec;
pub mod error;
pub mod estimators;
pub mod hash;
pub mod report;
pub mod sim;
pub mod sketch;
pub mod special;
pub mod stats;

pub use codec::{FORMAT_VERSION, MAGIC};
pub use error::{DecodeError, Error, Result};
pub use estimators::{xi3_log, xi_hat, xi_moment, Estimate, EstimatorId};
pub use hash::{HashAlgorithm, UnitHash};
pub use sketch::{KthValues, Sketch, SketchConfig};
pub use special::{gamma_cdf, log_gamma, regularized_gamma_p};
