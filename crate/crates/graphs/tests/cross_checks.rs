use polygas_graphs::{
    connected_subgraphs, connected_sum, count_spanning_trees, labeled_trees, pairs,
    spanning_trees_in, EdgeMask,
};
use proptest::prelude::*;

fn brute_connected_sum(n: usize, x: &[f64]) -> f64 {
    let full: EdgeMask = (1 << pairs(n).len()) - 1;
    connected_subgraphs(n, full)
        .unwrap()
        .into_iter()
        .map(|g| {
            (0..pairs(n).len())
                .filter(|i| g >> i & 1 == 1)
                .map(|i| x[i])
                .product::<f64>()
        })
        .sum()
}

proptest! {
    #[test]
    fn connected_sum_matches_enumeration(
        n in 1usize..=5,
        raw in proptest::collection::vec(-1.5f64..1.5, 10),
    ) {
        let x = &raw[..pairs(n).len()];
        let a = connected_sum(n, x);
        let b = brute_connected_sum(n, x);
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "{} vs {}", a, b);
    }

    #[test]
    fn three_spanning_tree_counts_agree(n in 1usize..=6, graph in any::<u64>()) {
        let graph = graph & ((1u64 << pairs(n).len()) - 1);
        let by_search = spanning_trees_in(n, graph).len() as u64;
        let by_filter = labeled_trees(n)
            .unwrap()
            .filter(|t| t.edge_mask() & !graph == 0)
            .count() as u64;
        prop_assert_eq!(by_search, by_filter);
        prop_assert_eq!(count_spanning_trees(n, graph), by_filter);
    }
}
