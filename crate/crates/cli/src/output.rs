use std::io::{self, Write};

use anyhow::Result;
use kmvc_core::{Estimate, EstimatorId, Sketch};
use serde::Serialize;

use crate::OutputFormat;

/// Estimators reported by `--all-estimators` and `inspect`.
pub const ALL_ESTIMATORS: [EstimatorId; 4] = [
    EstimatorId::XiHat,
    EstimatorId::Xi3Log,
    EstimatorId::INVERSE,
    EstimatorId::SQRT,
];

#[derive(Debug, Serialize)]
pub struct CountReport {
    pub k: u32,
    pub m: u32,
    pub seed: u64,
    pub hash: String,
    /// Tokens read in this invocation; not stored in sketch files.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub items_seen: Option<u64>,
    pub estimates: Vec<Estimate>,
}

impl CountReport {
    pub fn new(sketch: &Sketch, estimates: Vec<Estimate>) -> CountReport {
        let cfg = sketch.config();
        CountReport {
            k: cfg.k(),
            m: cfg.m(),
            seed: cfg.seed(),
            hash: cfg.hash().to_string(),
            items_seen: Some(sketch.items_seen()),
            estimates,
        }
    }

    pub fn write(&self, format: OutputFormat) -> Result<()> {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        match format {
            OutputFormat::Text => {
                for e in &self.estimates {
                    writeln!(out, "{:<12} {:.3}", e.estimator.to_string(), e.value)?;
                }
                write!(
                    out,
                    "k={} m={} seed={} hash={}",
                    self.k, self.m, self.seed, self.hash
                )?;
                match self.items_seen {
                    Some(n) => writeln!(out, " items_seen={n}")?,
                    None => writeln!(out)?,
                }
            }
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut out, self)?;
                writeln!(out)?;
            }
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["estimator", "estimate", "k", "m", "seed"])?;
                for e in &self.estimates {
                    w.write_record([
                        e.estimator.to_string(),
                        e.value.to_string(),
                        self.k.to_string(),
                        self.m.to_string(),
                        self.seed.to_string(),
                    ])?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

/// Primary estimate first, then (optionally) every other estimator whose
/// domain admits this configuration.
pub fn estimates(sketch: &Sketch, primary: EstimatorId, all: bool) -> Result<Vec<Estimate>> {
    let mut out = vec![sketch.estimate(primary)?];
    if all {
        out.extend(
            ALL_ESTIMATORS
                .iter()
                .filter(|id| **id != primary)
                .filter_map(|id| sketch.estimate(*id).ok()),
        );
    }
    Ok(out)
}
