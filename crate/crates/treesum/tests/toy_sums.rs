use proptest::prelude::*;

use polygas_treesum::{
    brute_force_tree_sum, toys, tree_sum_global, tree_sum_local, two_vertex_factorization,
    GlobalCompat, VertexSystem,
};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn fixed_tuples(k: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..k).map(|a| vec![a]).collect();
    for a in 0..k {
        for b in 0..k {
            out.push(vec![a, b]);
            for c in 0..k {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}

#[test]
fn matrix_tree_sums_match_brute_force() {
    for (name, vs) in toys::all() {
        for fixed in fixed_tuples(vs.len()) {
            for global in [false, true] {
                let n_max = if vs.len() == 3 { 6 } else { 5 };
                let brute = brute_force_tree_sum(&vs, &fixed, 0.7, n_max, global).unwrap();
                let fast = if global {
                    tree_sum_global(&vs, &fixed, 0.7, n_max).unwrap()
                } else {
                    tree_sum_local(&vs, &fixed, 0.7, n_max).unwrap()
                };
                for (k, (b, f)) in brute.iter().zip(&fast.by_size).enumerate() {
                    assert!(
                        close(*b, *f, 1e-12),
                        "{name} {fixed:?} global={global} size {}: {b} vs {f}",
                        fixed.len() + k
                    );
                }
            }
        }
    }
}

#[test]
fn always_compatible_global_equals_local() {
    for (_, vs) in toys::all() {
        let all = vs.clone().with_compat(GlobalCompat::Always).unwrap();
        for fixed in fixed_tuples(vs.len()) {
            let l = tree_sum_local(&vs, &fixed, 1.1, 5).unwrap();
            let g = tree_sum_global(&all, &fixed, 1.1, 5).unwrap();
            assert!(close(l.value, g.value, 1e-13));
        }
    }
}

#[test]
fn global_sums_never_exceed_local() {
    for (_, vs) in toys::all() {
        for fixed in fixed_tuples(vs.len()) {
            let l = tree_sum_local(&vs, &fixed, 0.5, 5).unwrap();
            let g = tree_sum_global(&vs, &fixed, 0.5, 5).unwrap();
            assert!(g.value <= l.value * (1.0 + 1e-13));
        }
    }
}

#[test]
fn two_vertex_factorization_on_toys() {
    for (name, vs) in toys::all() {
        for beta in [0.2, 1.0, 3.0] {
            for a in 0..vs.len() {
                for b in 0..vs.len() {
                    let f = two_vertex_factorization(&vs, a, b, beta, 7).unwrap();
                    assert!(f.max_rel_err <= 1e-12, "{name} {a} {b} beta={beta}: {:?}", f);
                }
            }
        }
    }
}

fn random_system() -> impl Strategy<Value = VertexSystem> {
    (3usize..=4)
        .prop_flat_map(|k| {
            (
                Just(k),
                prop::collection::vec(0.1f64..2.0, k),
                prop::collection::vec(0.0f64..1.0, k),
                prop::collection::vec(prop_oneof![Just(0.0), 0.05f64..1.0], k * k),
            )
        })
        .prop_map(|(k, c, a, raw)| {
            let mut e = vec![0.0; k * k];
            for i in 0..k {
                for j in i..k {
                    e[i * k + j] = raw[i * k + j];
                    e[j * k + i] = raw[i * k + j];
                }
            }
            let labels = (0..k).map(|i| format!("r{i}")).collect();
            VertexSystem::exponential(labels, c, a, e).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn permuting_the_fixed_tuple_changes_nothing(
        vs in random_system(),
        raw in prop::collection::vec(0usize..4, 3),
        beta in 0.1f64..2.0,
    ) {
        let fixed: Vec<usize> = raw.iter().map(|x| x % vs.len()).collect();
        let mut rev = fixed.clone();
        rev.reverse();
        let rot = vec![fixed[1], fixed[2], fixed[0]];
        for sum in [tree_sum_local, tree_sum_global] {
            let base = sum(&vs, &fixed, beta, 5).unwrap().value;
            for other in [&rev, &rot] {
                let v = sum(&vs, other, beta, 5).unwrap().value;
                prop_assert!(close(base, v, 1e-12));
            }
        }
    }

    #[test]
    fn factorization_on_random_systems(vs in random_system(), beta in 0.1f64..2.0) {
        let f = two_vertex_factorization(&vs, 0, 1, beta, 6).unwrap();
        prop_assert!(f.max_rel_err <= 1e-12, "{:?}", f);
    }
}
