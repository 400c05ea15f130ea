use std::io::{self, Write};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::count::{load, save};
use crate::output::{estimates, CountReport, ALL_ESTIMATORS};
use crate::{InspectArgs, MergeArgs, Outcome, OutputFormat};

pub fn merge(args: MergeArgs) -> Result<Outcome> {
    let (first, rest) = args
        .sketches
        .split_first()
        .expect("clap requires two sketches");
    let mut merged = load(first)?;
    for path in rest {
        let other = load(path)?;
        merged
            .merge_from(&other)
            .with_context(|| format!("merging {}", path.display()))?;
    }
    save(&merged, &args.sketch_out)?;
    CountReport::new(&merged, estimates(&merged, args.estimator, false)?).write(args.out)?;
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct Inspection {
    #[serde(flatten)]
    report: CountReport,
    stored: usize,
    full_buckets: usize,
    kth_values: Vec<f64>,
}

pub fn inspect(args: InspectArgs) -> Result<Outcome> {
    let sketch = load(&args.sketch)?;
    let k = sketch.config().k() as usize;
    let ests = ALL_ESTIMATORS
        .iter()
        .filter_map(|id| sketch.estimate(*id).ok())
        .collect();
    let mut report = CountReport::new(&sketch, ests);
    report.items_seen = None;
    let inspection = Inspection {
        report,
        stored: sketch.stored_len(),
        full_buckets: sketch.buckets().filter(|b| b.len() == k).count(),
        kth_values: sketch.kth_values().entries().to_vec(),
    };
    match args.out {
        OutputFormat::Json => {
            let mut out = io::stdout().lock();
            serde_json::to_writer_pretty(&mut out, &inspection)?;
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(["bucket", "stored", "kth_value"])?;
            for (i, (bucket, kv)) in sketch.buckets().zip(&inspection.kth_values).enumerate() {
                w.write_record([i.to_string(), bucket.len().to_string(), kv.to_string()])?;
            }
            w.flush()?;
        }
        OutputFormat::Text => {
            inspection.report.write(OutputFormat::Text)?;
            let mut out = io::stdout().lock();
            writeln!(
                out,
                "stored={} full_buckets={}/{}",
                inspection.stored,
                inspection.full_buckets,
                sketch.config().m()
            )?;
            for (i, kv) in inspection.kth_values.iter().enumerate() {
                writeln!(out, "{i:>6} {kv:.6e}")?;
            }
        }
    }
    Ok(Outcome::Ok)
}
