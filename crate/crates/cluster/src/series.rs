use rayon::prelude::*;
use serde::Serialize;

use polygas_core::{pairwise_sum, Error, ModelParams, Real, Result};
use polygas_graphs::{connected_sum, pair_index};
use polygas_polymer::{polymer_compatible, polymer_universe, Activities};

pub const MAX_SERIES_ORDER: usize = 6;

/// Cap on multisets visited at a single order.
pub const MAX_SERIES_CLUSTERS: u64 = 50_000_000;

/// Per-order cluster contributions to `log Z` and their running sums.
#[derive(Clone, Debug, Serialize)]
pub struct TruncatedSeries<R> {
    pub order: usize,
    /// Contours beyond this diameter are left out of the polymer universe.
    pub max_diam: i64,
    pub universe: usize,
    pub terms: Vec<R>,
    pub partial_sums: Vec<R>,
}

fn multisets(u: u64, n: u64) -> u64 {
    // C(u + n - 1, n), saturating
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        c = c * (u as u128 + k) / (k + 1);
        if c > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    c as u64
}

/// Partial sums of the cluster expansion up to `order`, over polymers
/// whose contours have diameter at most `max_diam`.
pub fn truncated_log_z<R: Real>(
    p: &ModelParams,
    order: usize,
    max_diam: i64,
) -> Result<TruncatedSeries<R>> {
    if order == 0 || order > MAX_SERIES_ORDER {
        return Err(Error::infeasible("series order", order, MAX_SERIES_ORDER));
    }
    let universe = polymer_universe(p, max_diam)?;
    let u = universe.len();
    let visits = multisets(u as u64, order as u64);
    if visits > MAX_SERIES_CLUSTERS {
        return Err(Error::infeasible(
            "cluster multisets",
            visits.min(usize::MAX as u64) as usize,
            MAX_SERIES_CLUSTERS as usize,
        ));
    }
    let mut eng = Activities::<R>::new(p);
    let z: Vec<R> = universe
        .iter()
        .map(|q| eng.activity(q).map(|a| a.value))
        .collect::<Result<_>>()?;
    let incompat: Vec<Vec<bool>> = (0..u)
        .map(|i| {
            (0..u)
                .map(|j| i == j || !polymer_compatible(&universe[i], &universe[j], p))
                .collect()
        })
        .collect();

    let mut terms = Vec::with_capacity(order);
    for n in 1..=order {
        let per_first: Vec<R> = (0..u)
            .into_par_iter()
            .map(|first| {
                let mut acc = Vec::new();
                let mut idx = vec![first; n];
                loop {
                    if let Some(t) = cluster_term(&idx, &z, &incompat) {
                        acc.push(t);
                    }
                    // next nondecreasing sequence with fixed head
                    let mut k = n;
                    loop {
                        if k == 1 {
                            return pairwise_sum(&acc);
                        }
                        k -= 1;
                        if idx[k] + 1 < u {
                            let v = idx[k] + 1;
                            for slot in &mut idx[k..] {
                                *slot = v;
                            }
                            break;
                        }
                    }
                }
            })
            .collect();
        terms.push(pairwise_sum(&per_first));
    }
    let mut partial_sums = Vec::with_capacity(order);
    let mut run = R::zero();
    for t in &terms {
        run = run + t.clone();
        partial_sums.push(run.clone());
    }
    Ok(TruncatedSeries {
        order,
        max_diam,
        universe: u,
        terms,
        partial_sums,
    })
}

/// `phi(graph) prod z / prod multiplicity!` for a sorted index multiset;
/// `None` when the graph is disconnected.
fn cluster_term<R: Real>(idx: &[usize], z: &[R], incompat: &[Vec<bool>]) -> Option<R> {
    let n = idx.len();
    let mut x = vec![0.0f64; n * (n - 1) / 2];
    for a in 0..n {
        for b in a + 1..n {
            if incompat[idx[a]][idx[b]] {
                x[pair_index(n, a, b)] = -1.0;
            }
        }
    }
    let phi = if n == 1 { 1.0 } else { connected_sum(n, &x) };
    if phi == 0.0 {
        return None;
    }
    let mut w = R::from_f64(phi);
    let mut run = 1;
    for k in 0..n {
        w = w * z[idx[k]].clone();
        if k > 0 && idx[k] == idx[k - 1] {
            run += 1;
            w = w / R::from_usize(run);
        } else {
            run = 1;
        }
    }
    Some(w)
}
