use std::fs::{self, File};
use std::io::{self, BufReader};
use std::path::Path;

use anyhow::{bail, Context, Result};
use kmvc_core::{Sketch, SketchConfig};

use crate::output::{estimates, CountReport};
use crate::tokens::for_each_token;
use crate::{CountArgs, Outcome, DEFAULT_K, DEFAULT_M, DEFAULT_SEED};

pub fn run(args: CountArgs) -> Result<Outcome> {
    let mut sketch = initial_sketch(&args)?;
    let mut sink = |t: &[u8]| sketch.insert(t);
    if args.inputs.is_empty() {
        for_each_token(io::stdin().lock(), args.tokens, &mut sink)
            .context("reading standard input")?;
    }
    for path in &args.inputs {
        if path.as_os_str() == "-" {
            for_each_token(io::stdin().lock(), args.tokens, &mut sink)
                .context("reading standard input")?;
        } else {
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            for_each_token(BufReader::new(file), args.tokens, &mut sink)
                .with_context(|| format!("reading {}", path.display()))?;
        }
    }

    if let Some(path) = &args.sketch_out {
        save(&sketch, path)?;
    }
    let report = CountReport::new(
        &sketch,
        estimates(&sketch, args.estimator, args.all_estimators)?,
    );
    report.write(args.out)?;
    Ok(Outcome::Ok)
}

fn initial_sketch(args: &CountArgs) -> Result<Sketch> {
    let Some(path) = &args.sketch_in else {
        let config = SketchConfig::new(
            args.k.unwrap_or(DEFAULT_K),
            args.m.unwrap_or(DEFAULT_M),
            args.seed.unwrap_or(DEFAULT_SEED),
        )?;
        return Ok(Sketch::new(config));
    };
    let sketch = load(path)?;
    let cfg = sketch.config();
    let given = [
        ("k", args.k.map(u64::from), u64::from(cfg.k())),
        ("m", args.m.map(u64::from), u64::from(cfg.m())),
        ("seed", args.seed, cfg.seed()),
    ];
    for (name, want, have) in given {
        if let Some(want) = want {
            if want != have {
                bail!(
                    "--{name} {want} does not match {} ({name} = {have})",
                    path.display()
                );
            }
        }
    }
    Ok(sketch)
}

pub fn load(path: &Path) -> Result<Sketch> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Sketch::from_bytes(&bytes).with_context(|| format!("decoding {}", path.display()))
}

pub fn save(sketch: &Sketch, path: &Path) -> Result<()> {
    fs::write(path, sketch.to_bytes()).with_context(|| format!("writing {}", path.display()))
}
