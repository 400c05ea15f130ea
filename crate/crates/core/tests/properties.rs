mod common;

use common::{config, sketch_of, stream};
use kmvc_core::{EstimatorId, Sketch};
use proptest::prelude::*;

proptest! {
    #[test]
    fn merge_is_commutative_and_associative(
        cfg in config(),
        a in stream(200),
        b in stream(200),
        c in stream(200),
    ) {
        let (sa, sb, sc) = (sketch_of(cfg, &a), sketch_of(cfg, &b), sketch_of(cfg, &c));
        prop_assert_eq!(sa.merge(&sb).unwrap(), sb.merge(&sa).unwrap());
        let left = sa.merge(&sb).unwrap().merge(&sc).unwrap();
        let right = sa.merge(&sb.merge(&sc).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn merge_with_empty_is_identity(cfg in config(), a in stream(300)) {
        let sa = sketch_of(cfg, &a);
        let empty = Sketch::new(cfg);
        prop_assert_eq!(sa.merge(&empty).unwrap().to_bytes(), sa.to_bytes());
        prop_assert_eq!(sa.merge(&sa).unwrap(), sa);
    }

    #[test]
    fn buckets_hold_the_k_smallest_distinct_hashes(cfg in config(), words in stream(400)) {
        let sk = sketch_of(cfg, &words);
        let h = cfg.hasher();
        let mut expected = vec![Vec::<f64>::new(); cfg.m() as usize];
        for w in &words {
            let x = h.hash_to_unit(&w.to_le_bytes());
            let b = &mut expected[cfg.bucket_of(x)];
            if !b.contains(&x) {
                b.push(x);
            }
        }
        for (i, mut want) in expected.into_iter().enumerate() {
            want.sort_by(f64::total_cmp);
            want.truncate(cfg.k() as usize);
            prop_assert_eq!(sk.bucket(i), &want[..]);
        }
    }

    #[test]
    fn kth_values_are_unit_reals(cfg in config(), words in stream(400)) {
        let sk = sketch_of(cfg, &words);
        let kv = sk.kth_values();
        prop_assert_eq!(kv.m(), cfg.m() as usize);
        for (i, &e) in kv.entries().iter().enumerate() {
            prop_assert!(e > 0.0 && e <= 1.0);
            let full = sk.bucket(i).len() == cfg.k() as usize;
            prop_assert_eq!(e < 1.0, full);
        }
        let sum = kv.entries().iter().fold(0.0, |a, b| a + b);
        prop_assert_eq!(sum.to_bits(), kv.sum().to_bits());
    }

    #[test]
    fn sketch_estimate_uses_offsets(cfg in config(), words in stream(400)) {
        let sk = sketch_of(cfg, &words);
        let kv = sk.kth_values();
        let s: f64 = kv.bucket_offsets().iter().fold(0.0, |a, b| a + b);
        let want = (cfg.memory_budget() - 1) as f64 / s;
        prop_assert_eq!(sk.estimate(EstimatorId::XiHat).unwrap().value, want);
    }

    #[test]
    fn decode_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        let _ = Sketch::from_bytes(&bytes);
        let mut framed = b"KMVC\x01\x01".to_vec();
        framed.extend_from_slice(&bytes);
        let _ = Sketch::from_bytes(&framed);
    }
}

#[test]
fn one_pass_work_is_independent_of_history() {
    // every insert touches one bucket of at most k values, so the state never grows
    let cfg = kmvc_core::SketchConfig::new(4, 8, 1).unwrap();
    let mut sk = Sketch::new(cfg);
    for i in 0..200_000u32 {
        sk.insert(&i.to_le_bytes());
        if i % 50_000 == 0 {
            assert!(sk.stored_len() <= cfg.memory_budget());
        }
    }
    assert_eq!(sk.stored_len(), cfg.memory_budget());
    assert_eq!(sk.items_seen(), 200_000);
}
