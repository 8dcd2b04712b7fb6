use serde::{Deserialize, Serialize};

use polygas_core::{Error, Result};

use crate::connected::{pair_index, EdgeMask};

/// Largest `n` accepted by [`labeled_trees`].
pub const MAX_TREE_VERTICES: usize = 9;

/// Tree on vertices `0..n` with edges stored as sorted `(u, v)`, `u < v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabeledTree {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl LabeledTree {
    /// Checks that `edges` form a tree on `0..n`.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty("tree on zero vertices".into()));
        }
        if edges.len() + 1 != n {
            return Err(Error::InvalidConfig(format!(
                "{} edges cannot span {n} vertices as a tree",
                edges.len()
            )));
        }
        let mut norm: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        if norm.iter().any(|&(a, b)| a == b || b >= n) {
            return Err(Error::InvalidConfig("loop or out-of-range vertex".into()));
        }
        norm.sort_unstable();
        let mut uf: Vec<usize> = (0..n).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            uf[x] = r;
            r
        }
        for &(a, b) in &norm {
            let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
            if ra == rb {
                return Err(Error::InvalidConfig("edges contain a cycle".into()));
            }
            uf[ra] = rb;
        }
        Ok(LabeledTree { n, edges: norm })
    }

    /// Decodes a Prüfer sequence of length `n - 2`.
    pub fn from_pruefer(n: usize, seq: &[usize]) -> Self {
        assert!(n >= 2 && seq.len() == n - 2);
        let mut degree = vec![1usize; n];
        for &s in seq {
            degree[s] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        for &s in seq {
            let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
            edges.push((leaf.min(s), leaf.max(s)));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        edges.sort_unstable();
        LabeledTree { n, edges }
    }

    pub fn single() -> Self {
        LabeledTree {
            n: 1,
            edges: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// Vertices of degree one (none for the single-vertex tree).
    pub fn leaves(&self) -> Vec<usize> {
        self.degrees()
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 1)
            .map(|(v, _)| v)
            .collect()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn edge_mask(&self) -> EdgeMask {
        self.edges
            .iter()
            .fold(0, |m, &(a, b)| m | 1 << pair_index(self.n, a, b))
    }
}

/// All `n^(n-2)` labeled trees on `0..n`, in Prüfer lexicographic order.
pub fn labeled_trees(n: usize) -> Result<impl Iterator<Item = LabeledTree>> {
    if n == 0 {
        return Err(Error::Empty("trees on zero vertices".into()));
    }
    if n > MAX_TREE_VERTICES {
        return Err(Error::infeasible("labeled tree vertices", n, MAX_TREE_VERTICES));
    }
    let total = if n <= 2 { 1 } else { n.pow(n as u32 - 2) };
    Ok((0..total).map(move |mut code| {
        match n {
            1 => LabeledTree::single(),
            2 => LabeledTree {
                n: 2,
                edges: vec![(0, 1)],
            },
            _ => {
                let mut seq = vec![0; n - 2];
                for s in seq.iter_mut().rev() {
                    *s = code % n;
                    code /= n;
                }
                LabeledTree::from_pruefer(n, &seq)
            }
        }
    }))
}

/// Spanning trees of the graph on `0..n` with edge set `graph`, found by
/// searching edge subsets of size `n - 1` in increasing edge order.
pub fn spanning_trees_in(n: usize, graph: EdgeMask) -> Vec<LabeledTree> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    if n == 1 {
        out.push(LabeledTree::single());
        return out;
    }
    let idx: Vec<(usize, usize)> = crate::connected::pairs(n)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| graph >> i & 1 == 1)
        .map(|(_, e)| e)
        .collect();
    let mut chosen = Vec::with_capacity(n - 1);
    let mut parent: Vec<usize> = (0..n).collect();
    fn rec(
        idx: &[(usize, usize)],
        start: usize,
        need: usize,
        n: usize,
        chosen: &mut Vec<(usize, usize)>,
        parent: &mut Vec<usize>,
        out: &mut Vec<LabeledTree>,
    ) {
        if need == 0 {
            out.push(LabeledTree {
                n,
                edges: chosen.clone(),
            });
            return;
        }
        if idx.len() - start < need {
            return;
        }
        for i in start..idx.len() {
            let (a, b) = idx[i];
            let find = |p: &Vec<usize>, mut x: usize| {
                while p[x] != x {
                    x = p[x];
                }
                x
            };
            let (ra, rb) = (find(parent, a), find(parent, b));
            if ra == rb {
                continue;
            }
            parent[ra] = rb;
            chosen.push((a, b));
            rec(idx, i + 1, need - 1, n, chosen, parent, out);
            chosen.pop();
            parent[ra] = ra;
        }
    }
    rec(&idx, 0, n - 1, n, &mut chosen, &mut parent, &mut out);
    out
}

/// Number of spanning trees by the matrix-tree theorem (fraction-free
/// Bareiss elimination, exact for the sizes used here).
pub fn count_spanning_trees(n: usize, graph: EdgeMask) -> u64 {
    if n <= 1 {
        return n as u64;
    }
    let m = n - 1;
    let mut lap = vec![vec![0i128; n]; n];
    for (i, (a, b)) in crate::connected::pairs(n).into_iter().enumerate() {
        if graph >> i & 1 == 1 {
            lap[a][a] += 1;
            lap[b][b] += 1;
            lap[a][b] -= 1;
            lap[b][a] -= 1;
        }
    }
    let mut a: Vec<Vec<i128>> = lap[..m].iter().map(|r| r[..m].to_vec()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..m {
        if a[k][k] == 0 {
            match (k + 1..m).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..m {
            for j in k + 1..m {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[m - 1][m - 1]) as u64
}
