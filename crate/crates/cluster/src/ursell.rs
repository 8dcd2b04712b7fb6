use std::collections::BTreeSet;

use serde::Serialize;

use polygas_core::{Error, ModelParams, Result};
use polygas_graphs::{connected_sum, count_spanning_trees, pair_index, EdgeMask};
use polygas_polymer::{polymer_compatible, Polymer};

/// Largest tuple whose Ursell function is evaluated.
pub const MAX_URSELL_SIZE: usize = 8;

/// Ordered polymer tuple with its incompatibility graph. Equal entries are
/// incompatible with each other.
#[derive(Clone, Debug, Serialize)]
pub struct ClusterTuple {
    pub polymers: Vec<Polymer>,
    pub n: usize,
    /// Pairs `(i, j)` with `i < j`.
    pub incompat_edges: BTreeSet<(usize, usize)>,
}

impl ClusterTuple {
    pub fn from_polymers(polymers: Vec<Polymer>, p: &ModelParams) -> Self {
        let n = polymers.len();
        let mut incompat_edges = BTreeSet::new();
        for i in 0..n {
            for j in i + 1..n {
                if !polymer_compatible(&polymers[i], &polymers[j], p) {
                    incompat_edges.insert((i, j));
                }
            }
        }
        ClusterTuple {
            polymers,
            n,
            incompat_edges,
        }
    }

    /// Abstract tuple given only by its graph.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut incompat_edges = BTreeSet::new();
        for (a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(Error::param("edges", format!("bad edge ({a}, {b}) on {n} vertices")));
            }
            incompat_edges.insert((a.min(b), a.max(b)));
        }
        Ok(ClusterTuple {
            polymers: Vec::new(),
            n,
            incompat_edges,
        })
    }

    pub fn edge_mask(&self) -> EdgeMask {
        self.incompat_edges
            .iter()
            .fold(0, |m, &(a, b)| m | 1 << pair_index(self.n, a, b))
    }

    fn check(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_URSELL_SIZE {
            return Err(Error::infeasible("cluster size", self.n, MAX_URSELL_SIZE));
        }
        Ok(())
    }
}

/// `sum over connected spanning subgraphs of the incompatibility graph of
/// (-1)^edges`.
pub fn ursell(ct: &ClusterTuple) -> Result<i64> {
    ct.check()?;
    let n = ct.n;
    let mut x = vec![0.0f64; n * (n - 1) / 2];
    for &(a, b) in &ct.incompat_edges {
        x[pair_index(n, a, b)] = -1.0;
    }
    Ok(connected_sum(n, &x).round() as i64)
}

/// Spanning trees of the incompatibility graph.
pub fn penrose_bound(ct: &ClusterTuple) -> Result<u64> {
    ct.check()?;
    Ok(count_spanning_trees(ct.n, ct.edge_mask()))
}
