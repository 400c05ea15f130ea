use std::io::{self, Write};

use anyhow::Result;
use kmvc_core::report::{self, CheckOutcome, SimRow};
use kmvc_core::sim::{self, CoverageReport, Model, ModelSpec};
use kmvc_core::stats::{MseComparison, TrialStats};
use kmvc_core::EstimatorId;
use serde::Serialize;

use crate::{CheckArg, ModelArg, Outcome, OutputFormat, SimulateArgs};

#[derive(Serialize)]
struct SimulationReport {
    spec: ModelSpec,
    rows: Vec<SimRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coverage: Option<CoverageReport>,
    checks: Vec<CheckOutcome>,
    passed: bool,
}

pub fn run(args: SimulateArgs) -> Result<Outcome> {
    let spec = ModelSpec {
        model: match args.model {
            ModelArg::Independent => Model::Independent,
            ModelArg::Exact => Model::Exact,
        },
        theta: args.theta,
        k: args.k,
        m: args.m,
        trials: args.trials,
        rng_seed: args.rng_seed,
    };
    spec.validate()?;

    // dominance compares everything against xi-hat, so make sure it is run
    let mut ids = args.estimator.clone();
    if args.check.contains(&CheckArg::Dominance) && !ids.contains(&EstimatorId::XiHat) {
        ids.insert(0, EstimatorId::XiHat);
    }
    let samples = sim::collect_estimates(&spec, &ids)?;
    let stats: Vec<TrialStats> = ids
        .iter()
        .zip(&samples)
        .map(|(id, xs)| TrialStats::from_samples(*id, spec.theta, xs))
        .collect();
    let rows: Vec<SimRow> = stats.iter().map(|s| SimRow::new(&spec, s)).collect();

    let mut checks = Vec::new();
    for check in &args.check {
        match check {
            CheckArg::Mean => {
                checks.extend(stats.iter().map(|s| report::check_mean(spec.model, s)))
            }
            CheckArg::Variance => checks.extend(
                stats
                    .iter()
                    .filter(|s| s.estimator == EstimatorId::XiHat)
                    .map(|s| report::check_variance(spec.model, spec.k, spec.m, s)),
            ),
            CheckArg::Dominance => {
                let base = ids
                    .iter()
                    .position(|id| *id == EstimatorId::XiHat)
                    .expect("xi-hat added above");
                for (i, id) in ids.iter().enumerate().filter(|(i, _)| *i != base) {
                    let cmp = MseComparison::new(spec.theta as f64, &samples[base], &samples[i]);
                    checks.push(report::check_dominance(*id, &cmp));
                }
            }
        }
    }

    let exact = ModelSpec {
        model: Model::Exact,
        ..spec
    };
    let coverage = if args.coverage {
        let rep = sim::coverage_probability(&exact)?;
        checks.push(report::check_coverage(&rep));
        Some(rep)
    } else {
        None
    };
    if args.ks {
        let d = sim::limit_law_ks(spec.theta, spec.k, spec.m, spec.trials, spec.rng_seed)?;
        let n = spec.trials as usize * spec.m as usize;
        checks.push(report::check_ks(d, n));
    }
    if args.naive {
        let summary = sim::naive_min_expectation(spec.theta, spec.trials, spec.rng_seed)?;
        checks.push(report::check_naive(spec.theta, &summary));
    }

    let passed = checks.iter().all(|c| c.passed);
    let rep = SimulationReport {
        spec,
        rows,
        coverage,
        checks,
        passed,
    };
    write(&rep, args.out.unwrap_or(OutputFormat::Csv))?;
    Ok(if passed {
        Outcome::Ok
    } else {
        Outcome::ChecksFailed
    })
}

fn write(rep: &SimulationReport, format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            for row in &rep.rows {
                w.serialize(row)?;
            }
            w.flush()?;
            // checks go to stderr so stdout stays a clean table
            let mut err = io::stderr().lock();
            for c in &rep.checks {
                writeln!(err, "{}", check_line(c))?;
            }
        }
        OutputFormat::Json => {
            let mut out = io::stdout().lock();
            serde_json::to_writer_pretty(&mut out, rep)?;
            writeln!(out)?;
        }
        OutputFormat::Text => {
            let mut out = io::stdout().lock();
            writeln!(
                out,
                "{} model, theta={} k={} m={} trials={} seed={}",
                rep.spec.model,
                rep.spec.theta,
                rep.spec.k,
                rep.spec.m,
                rep.spec.trials,
                rep.spec.rng_seed
            )?;
            for r in &rep.rows {
                writeln!(
                    out,
                    "{:<12} mean={:.3} se={:.3} rel_bias={:+.5} rel_var_ratio={:.4}",
                    r.estimator.to_string(),
                    r.mean,
                    r.se,
                    r.rel_bias,
                    r.rel_var_ratio
                )?;
            }
            for c in &rep.checks {
                writeln!(out, "{}", check_line(c))?;
            }
        }
    }
    Ok(())
}

fn check_line(c: &CheckOutcome) -> String {
    format!(
        "[{}] {}: {}",
        if c.passed { "PASS" } else { "FAIL" },
        c.name,
        c.detail
    )
}
