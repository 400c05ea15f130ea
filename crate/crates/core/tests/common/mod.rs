//! Stream strategies and sketch property checks shared by the property and
//! acceptance suites.

#![allow(dead_code)]

use kmvc_core::{Sketch, SketchConfig};
use proptest::prelude::*;
use proptest::test_runner::{TestCaseError, TestRunner};

pub fn config() -> impl Strategy<Value = SketchConfig> {
    (1u32..=6, 1u32..=12, any::<u64>())
        .prop_filter("k * m >= 3", |(k, m, _)| k * m >= 3)
        .prop_map(|(k, m, seed)| SketchConfig::new(k, m, seed).unwrap())
}

/// Streams over a small alphabet so repeats are frequent.
pub fn stream(max_len: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..300, 0..max_len)
}

pub fn sketch_of<'a>(config: SketchConfig, words: impl IntoIterator<Item = &'a u32>) -> Sketch {
    let mut sk = Sketch::new(config);
    for w in words {
        sk.insert(&w.to_le_bytes());
    }
    sk
}

fn run<S: Strategy>(
    runner: &mut TestRunner,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

/// A property suite driven by a caller-supplied runner.
pub type Suite = fn(&mut TestRunner) -> Result<(), String>;

pub fn run_permutation(runner: &mut TestRunner) -> Result<(), String> {
    let strategy = (config(), stream(400)).prop_flat_map(|(cfg, words)| {
        let shuffled = Just(words.clone()).prop_shuffle();
        (Just(cfg), Just(words), shuffled)
    });
    run(runner, strategy, |(cfg, words, shuffled)| {
        prop_assert_eq!(sketch_of(cfg, &words), sketch_of(cfg, &shuffled));
        Ok(())
    })
}

pub fn run_duplicates(runner: &mut TestRunner) -> Result<(), String> {
    run(runner, (config(), stream(400)), |(cfg, words)| {
        let mut distinct = Vec::new();
        for w in &words {
            if !distinct.contains(w) {
                distinct.push(*w);
            }
        }
        let full = sketch_of(cfg, &words);
        let dedup = sketch_of(cfg, &distinct);
        prop_assert_eq!(&full, &dedup);
        prop_assert_eq!(full.kth_values(), dedup.kth_values());
        Ok(())
    })
}

pub fn run_merge_concat(runner: &mut TestRunner) -> Result<(), String> {
    let strategy = (config(), stream(400), any::<prop::sample::Index>());
    run(runner, strategy, |(cfg, words, split)| {
        let at = split.index(words.len() + 1);
        let (a, b) = words.split_at(at);
        let (sa, sb) = (sketch_of(cfg, a), sketch_of(cfg, b));
        let whole = sketch_of(cfg, &words);
        let ab = sa.merge(&sb).unwrap();
        prop_assert_eq!(&ab, &whole);
        prop_assert_eq!(ab.to_bytes(), whole.to_bytes());
        prop_assert_eq!(sb.merge(&sa).unwrap(), ab);
        Ok(())
    })
}

pub fn run_roundtrip(runner: &mut TestRunner) -> Result<(), String> {
    run(runner, (config(), stream(400)), |(cfg, words)| {
        let sk = sketch_of(cfg, &words);
        let back =
            Sketch::from_bytes(&sk.to_bytes()).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(back.config(), sk.config());
        prop_assert_eq!(back.kth_values(), sk.kth_values());
        for (x, y) in back.buckets().zip(sk.buckets()) {
            let xb: Vec<u64> = x.iter().map(|v| v.to_bits()).collect();
            let yb: Vec<u64> = y.iter().map(|v| v.to_bits()).collect();
            prop_assert_eq!(xb, yb);
        }
        Ok(())
    })
}

pub fn run_bounded_memory(runner: &mut TestRunner) -> Result<(), String> {
    let words = prop::collection::vec(any::<u32>(), 0..2000);
    run(runner, (config(), words), |(cfg, words)| {
        let sk = sketch_of(cfg, &words);
        prop_assert!(sk.stored_len() <= cfg.memory_budget());
        for (i, b) in sk.buckets().enumerate() {
            prop_assert!(b.len() <= cfg.k() as usize);
            for &v in b {
                prop_assert_eq!(cfg.bucket_of(v), i);
            }
            prop_assert!(b.windows(2).all(|w| w[0] < w[1]));
        }
        Ok(())
    })
}

pub fn run_monotone(runner: &mut TestRunner) -> Result<(), String> {
    run(
        runner,
        (config(), stream(300), stream(300)),
        |(cfg, a, b)| {
            let before = sketch_of(cfg, &a).kth_values();
            let after = sketch_of(cfg, a.iter().chain(&b)).kth_values();
            for (x, y) in before.entries().iter().zip(after.entries()) {
                prop_assert!(y <= x, "entry grew from {} to {}", x, y);
            }
            Ok(())
        },
    )
}
