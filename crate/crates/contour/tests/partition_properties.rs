use polygas_contour::{
    collection_interior, energy_decomposition_check, external_contours, is_compatible,
    is_irreducible, iota, m_partition, m_partition_with, verify_hypotheses, Relation,
    SplitOrder,
};
use polygas_core::{minus_interior, ModelParams, SiteSet, SpinFlipConfig};
use proptest::prelude::*;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params() -> ModelParams {
    ModelParams::on_interval(2.0, 1.0, -100, 100).unwrap()
}

fn random_config(rng: &mut ChaCha8Rng, max_flips: usize, half_width: i64) -> SpinFlipConfig {
    let n = 2 * rng.random_range(1..=max_flips / 2);
    let slots = (2 * half_width + 1) as usize;
    let mut b: Vec<i64> = sample(rng, slots, n)
        .into_iter()
        .map(|k| 2 * (k as i64 - half_width) - 1)
        .collect();
    b.sort_unstable();
    SpinFlipConfig::from_doubled(b).unwrap()
}

/// Pairwise merge of consecutive flip pairs until no two parts are close.
fn agglomerative(cfg: &SpinFlipConfig, p: &ModelParams) -> Vec<Vec<i64>> {
    let mut parts: Vec<Vec<i64>> = cfg.doubled().chunks(2).map(|c| c.to_vec()).collect();
    loop {
        let mut merged = false;
        'scan: for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                let a = SpinFlipConfig::from_doubled(parts[i].clone()).unwrap();
                let b = SpinFlipConfig::from_doubled(parts[j].clone()).unwrap();
                let d = a.dist(&b).unwrap() as f64;
                if d <= p.separation(a.diam().min(b.diam())) {
                    let mut u = parts[i].clone();
                    u.extend(parts[j].iter());
                    u.sort_unstable();
                    parts[i] = u;
                    parts.remove(j);
                    merged = true;
                    break 'scan;
                }
            }
        }
        if !merged {
            return parts;
        }
    }
}

#[test]
fn pair_merging_misses_holes() {
    let p = params();
    let cfg = SpinFlipConfig::from_halves(&[-0.5, 9.5, 10.5, 20.5]).unwrap();
    let merged = agglomerative(&cfg, &p);
    assert_eq!(merged.len(), 1);
    let whole = SpinFlipConfig::from_doubled(merged[0].clone()).unwrap();
    assert!(!is_irreducible(&whole, &p).unwrap());
    assert_eq!(m_partition(&cfg, &p).unwrap().len(), 2);
}

#[test]
fn partition_is_independent_of_split_order() {
    let p = params();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut multi = 0;
    for _ in 0..100 {
        let cfg = random_config(&mut rng, 10, 30);
        let reference = m_partition(&cfg, &p).unwrap();
        if reference.len() > 1 {
            multi += 1;
        }
        for k in 0..10 {
            let other = m_partition_with(&cfg, &p, SplitOrder::Shuffled(k)).unwrap();
            assert_eq!(other.contours(), reference.contours(), "{cfg:?}");
        }
        for part in &reference {
            assert!(is_irreducible(part.body(), &p).unwrap(), "{:?}", part.body());
        }
        for (i, a) in reference.iter().enumerate() {
            for b in &reference.contours()[i + 1..] {
                assert!(is_compatible(a, b, &p).unwrap());
            }
        }
    }
    assert!(multi > 20, "only {multi} split configurations sampled");
}

#[test]
fn trichotomy_and_interior_decomposition() {
    let p = params();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut nested = 0;
    for _ in 0..300 {
        let cfg = random_config(&mut rng, 12, 40);
        let g = m_partition(&cfg, &p).unwrap();
        for (i, a) in g.iter().enumerate() {
            for b in &g.contours()[i + 1..] {
                let r = Relation::of(a, b, &p).unwrap();
                assert_ne!(r, Relation::Incompatible);
                if r != Relation::Positive {
                    nested += 1;
                }
            }
        }
        let ext = external_contours(&g);
        let mut union = SiteSet::empty();
        for e in &ext {
            let part = collection_interior(&iota(e, &g, &p).unwrap());
            assert!(!union.intersects(&part));
            union = union.union(&part);
        }
        assert_eq!(union, minus_interior(&cfg));
        assert_eq!(ext.len() == g.len(), g.is_positive());
    }
    assert!(nested > 0);
}

#[test]
fn energy_decomposition_on_random_partitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..200 {
        let alpha = [1.2, 1.5, 2.0][k % 3];
        let p = ModelParams::on_interval(alpha, 1.0, 0, 11).unwrap();
        let minus: SiteSet = (0..12).filter(|_| rng.random_bool(0.5)).collect();
        if minus.is_empty() {
            continue;
        }
        let g = m_partition(&SpinFlipConfig::from_interior(&minus), &p).unwrap();
        let h: f64 = g.energy(&p);
        let r = energy_decomposition_check(&g, &p).unwrap();
        assert!(r <= 1e-10 * (1.0 + h.abs()), "{minus:?}: {r}");
    }
}

#[test]
fn hypothesis_sweep_small() {
    let p = params();
    let rep = verify_hypotheses(&p, 10, &[2.0, 4.0, 6.0]).unwrap();
    assert!(rep.peierls_decreasing);
    assert!(rep.peierls_sums.iter().all(|r| r.sandwich_holds));
    assert!(rep.c2_fit.unwrap() > 0.0);
    assert!(rep.c0_fit > 0.0);
}

proptest! {
    #[test]
    fn run_split_agrees_with_exhaustive_search(
        seed in any::<u64>(),
        m in prop_oneof![Just(1.5f64), Just(2.0), Just(4.0)],
        width in 6i64..60,
    ) {
        let p = params().with_m(m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = random_config(&mut rng, 10, width);
        let fast = m_partition(&cfg, &p).unwrap().len() == 1;
        prop_assert_eq!(fast, is_irreducible(&cfg, &p).unwrap());
    }
}
