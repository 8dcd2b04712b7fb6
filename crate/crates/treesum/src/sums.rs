use rayon::prelude::*;
use serde::Serialize;

use polygas_core::{pairwise_sum, Error, Result};
use polygas_graphs::{labeled_trees, MAX_TREE_VERTICES};

use crate::system::VertexSystem;

/// Largest number of free-label tuples visited for one tree size.
pub const MAX_TUPLES: f64 = 2e8;
/// Largest tree size accepted by the tree sums.
pub const MAX_TREE_SIZE: usize = 12;

/// Truncated tree sum with its contributions by tree size.
#[derive(Clone, Debug, Serialize)]
pub struct TreeSum {
    pub fixed: Vec<usize>,
    pub beta: f64,
    pub n_max: usize,
    pub global: bool,
    /// `by_size[k]` collects trees on `m + k` vertices.
    pub by_size: Vec<f64>,
    pub value: f64,
}

/// Weighted spanning-tree sum `sum_T prod_{jk in T} w_jk` of the complete
/// graph on `n` vertices, by the matrix-tree theorem.
pub fn spanning_tree_weight(n: usize, w: impl Fn(usize, usize) -> f64) -> f64 {
    if n <= 1 {
        return 1.0;
    }
    // a disconnected support has no spanning tree; skip the rounding noise
    let mut reached = vec![false; n];
    let mut stack = vec![0];
    reached[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !reached[j] && w(i, j) != 0.0 {
                reached[j] = true;
                stack.push(j);
            }
        }
    }
    if reached.iter().any(|r| !r) {
        return 0.0;
    }
    let k = n - 1;
    // Laplacian with row and column 0 removed
    let mut a = vec![0.0f64; k * k];
    for i in 1..n {
        let mut diag = 0.0;
        for j in 0..n {
            if j != i {
                let x = w(i, j);
                diag += x;
                if j > 0 {
                    a[(i - 1) * k + (j - 1)] = -x;
                }
            }
        }
        a[(i - 1) * k + (i - 1)] = diag;
    }
    let mut det = 1.0;
    for c in 0..k {
        let piv = (c..k)
            .max_by(|&r, &s| a[r * k + c].abs().total_cmp(&a[s * k + c].abs()))
            .expect("nonempty");
        if a[piv * k + c] == 0.0 {
            return 0.0;
        }
        if piv != c {
            for j in 0..k {
                a.swap(c * k + j, piv * k + j);
            }
            det = -det;
        }
        let d = a[c * k + c];
        det *= d;
        for r in c + 1..k {
            let f = a[r * k + c] / d;
            if f != 0.0 {
                for j in c..k {
                    a[r * k + j] -= f * a[c * k + j];
                }
            }
        }
    }
    // the reduced Laplacian is positive semidefinite
    det.max(0.0)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn check_fixed(vs: &VertexSystem, fixed: &[usize], n_max: usize) -> Result<()> {
    if fixed.is_empty() {
        return Err(Error::param("fixed", "needs at least one vertex"));
    }
    if let Some(&t) = fixed.iter().find(|&&t| t >= vs.len()) {
        return Err(Error::param("fixed", format!("vertex {t} out of range")));
    }
    if n_max < fixed.len() {
        return Err(Error::param("n_max", format!("{n_max} is below m = {}", fixed.len())));
    }
    if n_max > MAX_TREE_SIZE {
        return Err(Error::infeasible("tree size", n_max, MAX_TREE_SIZE));
    }
    let tuples = (vs.len() as f64).powi((n_max - fixed.len()) as i32);
    if tuples > MAX_TUPLES {
        return Err(Error::infeasible("label tuples", tuples as usize, MAX_TUPLES as usize));
    }
    Ok(())
}

/// Sum over free labels for trees of one size: ordered tuples extending
/// `fixed`, each weighted by its vertex weights and spanning-tree sum.
fn size_term(vs: &VertexSystem, fixed: &[usize], free: usize, beta: f64, global: bool) -> f64 {
    let weights: Vec<f64> = (0..vs.len()).map(|t| vs.vertex_weight(t, beta)).collect();
    let base: f64 = fixed.iter().map(|&t| weights[t]).product();
    let eval = |labels: &[usize]| -> f64 {
        let prod: f64 = labels[fixed.len()..].iter().map(|&t| weights[t]).product();
        base * prod
            * spanning_tree_weight(labels.len(), |i, j| vs.edge_weight(labels[i], labels[j]))
    };
    if global && !vs.tuple_compatible(fixed) {
        return 0.0;
    }
    if free == 0 {
        return eval(fixed);
    }
    let terms: Vec<f64> = (0..vs.len())
        .into_par_iter()
        .map(|first| {
            let mut labels = fixed.to_vec();
            let mut acc = Vec::new();
            extend(vs, &mut labels, first, free, global, &eval, &mut acc);
            pairwise_sum(&acc)
        })
        .collect();
    pairwise_sum(&terms) / factorial(free)
}

fn extend(
    vs: &VertexSystem,
    labels: &mut Vec<usize>,
    next: usize,
    left: usize,
    global: bool,
    eval: &dyn Fn(&[usize]) -> f64,
    acc: &mut Vec<f64>,
) {
    if global && !labels.iter().all(|&t| vs.compatible(t, next)) {
        return;
    }
    labels.push(next);
    if left == 1 {
        acc.push(eval(labels));
    } else {
        for t in 0..vs.len() {
            extend(vs, labels, t, left - 1, global, eval, acc);
        }
    }
    labels.pop();
}

fn tree_sum(
    vs: &VertexSystem,
    fixed: &[usize],
    beta: f64,
    n_max: usize,
    global: bool,
) -> Result<TreeSum> {
    check_fixed(vs, fixed, n_max)?;
    let m = fixed.len();
    let by_size: Vec<f64> = (m..=n_max)
        .map(|n| size_term(vs, fixed, n - m, beta, global))
        .collect();
    let value = pairwise_sum(&by_size);
    Ok(TreeSum {
        fixed: fixed.to_vec(),
        beta,
        n_max,
        global,
        by_size,
        value,
    })
}

/// Truncated locally compatible tree sum with the first `m` labels fixed:
/// `sum_{n=m}^{n_max} 1/(n-m)! sum_T sum_v prod v_beta prod_{edges} e`.
pub fn tree_sum_local(
    vs: &VertexSystem,
    fixed: &[usize],
    beta: f64,
    n_max: usize,
) -> Result<TreeSum> {
    tree_sum(vs, fixed, beta, n_max, false)
}

/// As [`tree_sum_local`], with every label tuple globally admissible.
pub fn tree_sum_global(
    vs: &VertexSystem,
    fixed: &[usize],
    beta: f64,
    n_max: usize,
) -> Result<TreeSum> {
    tree_sum(vs, fixed, beta, n_max, true)
}

/// Direct enumeration of every (tree, labeling) pair; the reference for
/// the matrix-tree evaluation.
pub fn brute_force_tree_sum(
    vs: &VertexSystem,
    fixed: &[usize],
    beta: f64,
    n_max: usize,
    global: bool,
) -> Result<Vec<f64>> {
    check_fixed(vs, fixed, n_max)?;
    if n_max > MAX_TREE_VERTICES {
        return Err(Error::infeasible("tree size", n_max, MAX_TREE_VERTICES));
    }
    let m = fixed.len();
    let k = vs.len();
    let mut out = Vec::new();
    for n in m..=n_max {
        let trees: Vec<_> = labeled_trees(n)?.collect();
        let free = n - m;
        let mut total = 0.0;
        for code in 0..k.pow(free as u32) {
            let mut labels = fixed.to_vec();
            let mut c = code;
            for _ in 0..free {
                labels.push(c % k);
                c /= k;
            }
            if global && !vs.tuple_compatible(&labels) {
                continue;
            }
            let v: f64 = labels.iter().map(|&t| vs.vertex_weight(t, beta)).product();
            for t in &trees {
                let e: f64 = t
                    .edges()
                    .iter()
                    .map(|&(a, b)| vs.edge_weight(labels[a], labels[b]))
                    .product();
                total += v * e;
            }
        }
        out.push(total / factorial(free));
    }
    Ok(out)
}

/// Truncated power series in the number of tree vertices.
type Series = Vec<f64>;

fn mul(a: &[f64], b: &[f64], deg: usize) -> Series {
    let mut c = vec![0.0; deg + 1];
    for (i, x) in a.iter().enumerate().take(deg + 1) {
        if *x == 0.0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(deg + 1 - i) {
            c[i + j] += x * y;
        }
    }
    c
}

/// Result of comparing a two-vertex local tree sum with its factorized
/// form, degree by degree in the number of tree vertices.
#[derive(Clone, Debug, Serialize)]
pub struct Factorization {
    pub a: usize,
    pub b: usize,
    pub beta: f64,
    pub n_max: usize,
    /// Total edge function by number of internal path-tree vertices.
    pub total_edge: Vec<f64>,
    /// Direct two-vertex sums, index = number of tree vertices.
    pub lhs: Vec<f64>,
    /// `W(a) * E(a,b) * W(b)`, same indexing.
    pub rhs: Vec<f64>,
    pub max_rel_err: f64,
}

/// Total edge function `E(a,b) = e(a,b) + sum over paths a - s_1 - ... - s_k - b
/// of prod W(s_i) prod e`, as a series truncated at `deg` vertices.
pub fn total_edge(
    vs: &VertexSystem,
    a: usize,
    b: usize,
    beta: f64,
    deg: usize,
) -> Result<Series> {
    let singles = single_series(vs, beta, deg.max(1))?;
    Ok(total_edge_from(vs, &singles, a, b, deg))
}

/// `W(t)` as a series for every vertex, index = number of tree vertices.
fn single_series(vs: &VertexSystem, beta: f64, deg: usize) -> Result<Vec<Series>> {
    (0..vs.len())
        .map(|t| {
            let s = tree_sum_local(vs, &[t], beta, deg)?;
            let mut series = vec![0.0];
            series.extend(s.by_size);
            Ok(series)
        })
        .collect()
}

fn total_edge_from(vs: &VertexSystem, singles: &[Series], a: usize, b: usize, deg: usize) -> Series {
    let n = vs.len();
    let mut total = vec![0.0; deg + 1];
    total[0] = vs.edge_weight(a, b);
    // walk[s]: paths from a ending at internal vertex s
    let mut walk: Vec<Series> = (0..n)
        .map(|s| {
            singles[s]
                .iter()
                .take(deg + 1)
                .map(|x| x * vs.edge_weight(a, s))
                .collect()
        })
        .collect();
    for _ in 0..deg {
        for (s, w) in walk.iter().enumerate() {
            let e = vs.edge_weight(s, b);
            for (d, x) in w.iter().enumerate().take(deg + 1) {
                total[d] += x * e;
            }
        }
        let next: Vec<Series> = (0..n)
            .map(|s| {
                let mut into = vec![0.0; deg + 1];
                for (r, w) in walk.iter().enumerate() {
                    let e = vs.edge_weight(r, s);
                    if e != 0.0 {
                        for (d, x) in w.iter().enumerate() {
                            into[d] += x * e;
                        }
                    }
                }
                mul(&into, &singles[s], deg)
            })
            .collect();
        walk = next;
    }
    total
}

/// Checks `W(a,b) = W(a) E(a,b) W(b)` for local sums, order by order up to
/// `n_max` tree vertices.
pub fn two_vertex_factorization(
    vs: &VertexSystem,
    a: usize,
    b: usize,
    beta: f64,
    n_max: usize,
) -> Result<Factorization> {
    if n_max < 2 {
        return Err(Error::param("n_max", "needs at least two vertices"));
    }
    let singles = single_series(vs, beta, n_max - 1)?;
    let edge = total_edge_from(vs, &singles, a, b, n_max - 2);
    let pair = tree_sum_local(vs, &[a, b], beta, n_max)?;
    let mut lhs = vec![0.0, 0.0];
    lhs.extend(pair.by_size);
    let rhs = mul(&mul(&singles[a], &edge, n_max), &singles[b], n_max);
    let max_rel_err = lhs
        .iter()
        .zip(&rhs)
        .map(|(x, y)| {
            let scale = x.abs().max(y.abs());
            if scale == 0.0 {
                0.0
            } else {
                (x - y).abs() / scale
            }
        })
        .fold(0.0, f64::max);
    Ok(Factorization {
        a,
        b,
        beta,
        n_max,
        total_edge: edge,
        lhs,
        rhs,
        max_rel_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::toys;

    #[test]
    fn matrix_tree_counts() {
        for n in 1..=7 {
            let c = spanning_tree_weight(n, |_, _| 1.0);
            let cayley = if n <= 2 { 1.0 } else { (n as f64).powi(n as i32 - 2) };
            assert!((c - cayley).abs() < 1e-9 * cayley, "n={n}");
        }
        // path graph has exactly one spanning tree
        let path = |i: usize, j: usize| if i.abs_diff(j) == 1 { 2.0 } else { 0.0 };
        assert!((spanning_tree_weight(4, path) - 8.0).abs() < 1e-12);
        assert_eq!(spanning_tree_weight(3, |_, _| 0.0), 0.0);
    }

    #[test]
    fn smallest_sums() {
        let vs = toys::dense3();
        let beta = 1.3;
        let one = tree_sum_local(&vs, &[1], beta, 1).unwrap();
        assert!((one.value - vs.vertex_weight(1, beta)).abs() < 1e-16);
        let two = tree_sum_local(&vs, &[0, 2], beta, 2).unwrap();
        let want = vs.vertex_weight(0, beta) * vs.edge_weight(0, 2) * vs.vertex_weight(2, beta);
        assert!((two.value - want).abs() < 1e-16);
    }

    #[test]
    fn three_vertex_hand_enumeration() {
        // path3, fixed vertex 0, up to three tree vertices
        let vs = toys::path3();
        let beta = 0.8;
        let v: Vec<f64> = (0..3).map(|t| vs.vertex_weight(t, beta)).collect();
        let e01 = 0.7;
        let n1 = v[0];
        let n2 = v[0] * e01 * v[1];
        // trees on 3 vertices with vertex 0 labeled t0: paths through a
        // middle vertex; only 0-1-0 and 0-1-2 shapes carry weight
        // ordered free labels (x, y), divided by 2!
        let mut n3 = 0.0;
        for x in 0..3 {
            for y in 0..3 {
                let l = [0usize, x, y];
                let e = |i: usize, j: usize| vs.edge_weight(l[i], l[j]);
                let trees = e(0, 1) * e(1, 2) + e(0, 1) * e(0, 2) + e(0, 2) * e(1, 2);
                n3 += v[0] * v[x] * v[y] * trees;
            }
        }
        n3 /= 2.0;
        let got = tree_sum_local(&vs, &[0], beta, 3).unwrap();
        let want = [n1, n2, n3];
        for (g, w) in got.by_size.iter().zip(want) {
            assert!((g - w).abs() <= 1e-14 * w.abs(), "{g} vs {w}");
        }
    }

    #[test]
    fn factorization_holds_on_toys() {
        for (name, vs) in toys::all() {
            let k = vs.len();
            for a in 0..k {
                for b in 0..k {
                    let f = two_vertex_factorization(&vs, a, b, 0.9, 6).unwrap();
                    assert!(f.max_rel_err < 1e-12, "{name} a={a} b={b}: {f:?}");
                }
            }
        }
    }

    #[test]
    fn size_refusal() {
        let vs = toys::dense3();
        assert!(tree_sum_local(&vs, &[0], 1.0, 13).is_err());
        assert!(tree_sum_local(&vs, &[0, 1], 1.0, 1).is_err());
        assert!(tree_sum_local(&vs, &[], 1.0, 2).is_err());
    }
}
