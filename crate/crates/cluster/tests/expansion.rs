use polygas_cluster::{
    connected_graphs, labeled_trees, peierls_sum, penrose_bound, truncated_log_z, ursell,
    ClusterTuple,
};
use polygas_core::{zeta, Hp, ModelParams, Real};
use polygas_graphs::pairs;
use polygas_oracle::exact_partition_function;
use polygas_polymer::polymer_universe;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> ClusterTuple {
    let density = rng.random_range(0.2..1.0);
    let edges: Vec<(usize, usize)> = pairs(n)
        .into_iter()
        .filter(|_| rng.random_bool(density))
        .collect();
    ClusterTuple::from_edges(n, edges).unwrap()
}

#[test]
fn tree_graph_bound_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.random_range(1..=6);
        let ct = random_graph(&mut rng, n);
        let phi = ursell(&ct).unwrap();
        let trees = penrose_bound(&ct).unwrap();
        assert!(phi.unsigned_abs() <= trees, "{:?}: {phi} vs {trees}", ct.incompat_edges);
        // brute-force Ursell from the connected subgraphs
        let brute: i64 = connected_graphs(n, ct.edge_mask())
            .unwrap()
            .iter()
            .map(|m| if m.count_ones() % 2 == 0 { 1 } else { -1 })
            .sum();
        assert_eq!(phi, brute);
    }
}

#[test]
fn cayley_counts() {
    for n in 1..=8usize {
        let want = if n == 1 { 1 } else { n.pow(n as u32 - 2) };
        assert_eq!(labeled_trees(n).unwrap().count(), want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ursell_is_symmetric(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ct = random_graph(&mut rng, n);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let moved = ClusterTuple::from_edges(
            n,
            ct.incompat_edges.iter().map(|&(a, b)| (perm[a], perm[b])),
        )
        .unwrap();
        prop_assert_eq!(ursell(&ct).unwrap(), ursell(&moved).unwrap());
    }
}

#[test]
fn polymer_tuples_respect_the_bound() {
    let p = ModelParams::on_interval(2.0, 1.0, 0, 4).unwrap();
    let u = polymer_universe(&p, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let n = rng.random_range(1..=5);
        let tuple: Vec<_> = (0..n).map(|_| u[rng.random_range(0..u.len())].clone()).collect();
        let ct = ClusterTuple::from_polymers(tuple, &p);
        assert!(ursell(&ct).unwrap().unsigned_abs() <= penrose_bound(&ct).unwrap());
    }
}

fn relative_errors(beta: f64) -> Vec<f64> {
    let p = ModelParams::on_interval(2.0, beta, 0, 4).unwrap();
    let s = truncated_log_z::<Hp>(&p, 3, 5).unwrap();
    let exact = exact_partition_function::<Hp>(&p).unwrap().log_z;
    s.partial_sums
        .iter()
        .map(|x| ((x.clone() - exact.clone()) / exact.clone()).abs().to_f64())
        .collect()
}

#[test]
fn series_converges_at_low_temperature() {
    for beta in [6.0, 8.0] {
        let e = relative_errors(beta);
        assert!(e.windows(2).all(|w| w[1] < w[0]), "beta {beta}: {e:?}");
        assert!(e[2] < 1e-40);
    }
    let p = ModelParams::on_interval(2.0, 6.0, 0, 4).unwrap();
    let s = truncated_log_z::<f64>(&p, 3, 5).unwrap();
    assert!(s.terms.windows(2).all(|w| w[1].abs() < w[0].abs()));
}

#[test]
fn series_diverges_at_high_temperature() {
    let e = relative_errors(0.1);
    assert!(e.windows(2).all(|w| w[1] >= w[0]), "{e:?}");
}

#[test]
fn peierls_single_contour() {
    let p = ModelParams::on_interval(1.5, 1.0, -10, 10).unwrap();
    let row = peierls_sum(&p, 2.0, 1).unwrap();
    let want = (-4.0 * zeta(1.5).unwrap() * 2.0).exp();
    assert!((row.origin_sum - want).abs() <= 1e-15 * want);
    assert!(row.sandwich_holds);
}
