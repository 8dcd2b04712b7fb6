use serde::Serialize;

use polygas_core::{Error, Result};
use polygas_graphs::{labeled_trees, LabeledTree};

/// Trees on `0..n` whose leaves lie in `0..m` and whose vertices in `m..n`
/// all have degree at least three.
#[derive(Clone, Debug, Serialize)]
pub struct RestrictedTreeFamily {
    pub n: usize,
    pub m: usize,
    pub trees: Vec<LabeledTree>,
}

impl RestrictedTreeFamily {
    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }
}

pub fn is_restricted(t: &LabeledTree, m: usize) -> bool {
    let deg = t.degrees();
    deg.iter()
        .enumerate()
        .all(|(v, &d)| if v < m { true } else { d >= 3 })
        && t.leaves().iter().all(|&v| v < m)
}

/// Filters the Cayley enumeration of trees on `0..n`.
pub fn restricted_trees(n: usize, m: usize) -> Result<RestrictedTreeFamily> {
    if m < 2 {
        return Err(Error::param("m", format!("{m} must be at least 2")));
    }
    if n < m {
        return Err(Error::param("n", format!("{n} is below m = {m}")));
    }
    let trees = labeled_trees(n)?.filter(|t| is_restricted(t, m)).collect();
    Ok(RestrictedTreeFamily { n, m, trees })
}

/// Size of the restricted family without listing it: Prüfer sequences of
/// length `n - 2` in which each of the `n - m` extra vertices occurs at
/// least twice (degree is one plus the number of occurrences).
pub fn restricted_tree_count(n: usize, m: usize) -> Result<u128> {
    if m < 2 || n < m {
        return Err(Error::param("n, m", format!("need 2 <= m <= n, got n={n} m={m}")));
    }
    if n > 24 {
        return Err(Error::infeasible("restricted tree count", n, 24));
    }
    if n == 2 {
        return Ok(1);
    }
    let len = n - 2;
    let mut binom = vec![vec![0u128; len + 1]; len + 1];
    for i in 0..=len {
        binom[i][0] = 1;
        for j in 1..=i {
            binom[i][j] = binom[i - 1][j - 1] + binom[i - 1][j];
        }
    }
    // f[j]: ordered words of length j over the symbols placed so far
    let mut f = vec![0u128; len + 1];
    f[0] = 1;
    for sym in 0..n {
        let min = if sym < m { 0 } else { 2 };
        let mut g = vec![0u128; len + 1];
        for j in 0..=len {
            if f[j] == 0 {
                continue;
            }
            for k in min..=len - j {
                g[j + k] += f[j] * binom[j + k][k];
            }
        }
        f = g;
    }
    Ok(f[len])
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Deletes `vertex` and joins its neighbours by a path in the order given
/// by each permutation of the neighbour list. Vertices above `vertex` are
/// relabeled down by one.
pub fn remove_vertex_expand(
    tree: &LabeledTree,
    vertex: usize,
    perms: &[Vec<usize>],
) -> Result<Vec<LabeledTree>> {
    let n = tree.n();
    if vertex >= n {
        return Err(Error::param("vertex", format!("{vertex} out of range")));
    }
    if n < 2 {
        return Err(Error::param("tree", "needs at least two vertices"));
    }
    let nb = tree.neighbors(vertex);
    let relabel = |v: usize| if v > vertex { v - 1 } else { v };
    let kept: Vec<(usize, usize)> = tree
        .edges()
        .iter()
        .filter(|&&(a, b)| a != vertex && b != vertex)
        .map(|&(a, b)| (relabel(a), relabel(b)))
        .collect();
    perms
        .iter()
        .map(|phi| {
            let mut seen = phi.clone();
            seen.sort_unstable();
            if seen != (0..nb.len()).collect::<Vec<_>>() {
                return Err(Error::param(
                    "permutation",
                    format!("{phi:?} is not a permutation of 0..{}", nb.len()),
                ));
            }
            let mut edges = kept.clone();
            edges.extend(
                phi.windows(2)
                    .map(|w| (relabel(nb[w[0]]), relabel(nb[w[1]]))),
            );
            LabeledTree::new(n - 1, edges)
        })
        .collect()
}
