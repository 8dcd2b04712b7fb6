use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use polygas_core::{Error, ModelParams, Result, SiteSet};

use crate::engine::indicator_moments;

/// Largest set for Wick products.
pub const MAX_WICK_SITES: usize = 5;

/// Magnetizations and truncated two-point functions on a volume.
#[derive(Clone, Debug, Serialize)]
pub struct CorrelationTable {
    pub lambda: SiteSet,
    pub beta: f64,
    pub alpha: f64,
    /// Keyed by `(x, y)` with `x <= y`.
    #[serde(serialize_with = "pairs_as_list")]
    pub pairs: BTreeMap<(i64, i64), f64>,
    pub magnetizations: BTreeMap<i64, f64>,
}

fn pairs_as_list<S: Serializer>(m: &BTreeMap<(i64, i64), f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().map(|(&(x, y), &v)| (x, y, v)))
}

impl CorrelationTable {
    pub fn get(&self, x: i64, y: i64) -> Option<f64> {
        self.pairs.get(&(x.min(y), x.max(y))).copied()
    }
}

fn index_of(p: &ModelParams, x: i64) -> Result<usize> {
    p.lambda
        .as_slice()
        .binary_search(&x)
        .map_err(|_| Error::param("site", format!("{x} is not in the volume")))
}

/// `<sigma_x; sigma_y> = 4 (<n_x n_y> - <n_x><n_y>)`.
pub fn truncated_two_point(p: &ModelParams, x: i64, y: i64) -> Result<f64> {
    let (i, j) = (index_of(p, x)?, index_of(p, y)?);
    let m = indicator_moments::<f64>(&[1 << i, 1 << j, 1 << i | 1 << j], p)?;
    Ok(4.0 * (m[2] - m[0] * m[1]))
}

/// All magnetizations and pair correlations in one pass.
pub fn correlation_table(p: &ModelParams) -> Result<CorrelationTable> {
    let sites = p.lambda.as_slice();
    let n = sites.len();
    let mut masks: Vec<u64> = (0..n).map(|i| 1 << i).collect();
    for i in 0..n {
        for j in i + 1..n {
            masks.push(1 << i | 1 << j);
        }
    }
    let m = indicator_moments::<f64>(&masks, p)?;
    let mut pairs = BTreeMap::new();
    let mut k = n;
    for i in 0..n {
        pairs.insert((sites[i], sites[i]), 4.0 * (m[i] - m[i] * m[i]));
        for j in i + 1..n {
            pairs.insert((sites[i], sites[j]), 4.0 * (m[k] - m[i] * m[j]));
            k += 1;
        }
    }
    Ok(CorrelationTable {
        lambda: p.lambda.clone(),
        beta: p.beta,
        alpha: p.alpha,
        pairs,
        magnetizations: (0..n).map(|i| (sites[i], 1.0 - 2.0 * m[i])).collect(),
    })
}

/// `<prod_{a in A} (sigma_a - <sigma_a>)>`, expanded over subsets of `A`
/// in the indicator variables.
pub fn wick_product(p: &ModelParams, a: &SiteSet) -> Result<f64> {
    if a.len() > MAX_WICK_SITES {
        return Err(Error::infeasible("Wick set", a.len(), MAX_WICK_SITES));
    }
    let idx: Vec<usize> = a.iter().map(|x| index_of(p, x)).collect::<Result<_>>()?;
    let k = idx.len();
    let masks: Vec<u64> = (0u64..1 << k)
        .map(|s| (0..k).filter(|b| s >> b & 1 == 1).map(|b| 1u64 << idx[b]).sum())
        .collect();
    let m = indicator_moments::<f64>(&masks, p)?;
    let single: Vec<f64> = (0..k).map(|b| m[1 << b]).collect();
    let mut total = 0.0;
    for (s, &moment) in m.iter().enumerate() {
        let mut term = moment;
        for (b, &nu) in single.iter().enumerate() {
            if s >> b & 1 == 0 {
                term *= -nu;
            }
        }
        total += term;
    }
    // sigma - m = -2 (n - <n>)
    Ok((-2f64).powi(k as i32) * total)
}

/// Least-squares line through `(ln r, ln c)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

pub fn log_log_fit(points: &[(f64, f64)]) -> Result<DecayFit> {
    if points.len() < 3 {
        return Err(Error::param("points", "need at least three separations"));
    }
    if points.iter().any(|&(r, c)| r <= 0.0 || c <= 0.0) {
        return Err(Error::NonPositive("log-log fit needs positive data".into()));
    }
    let xy: Vec<(f64, f64)> = points.iter().map(|&(r, c)| (r.ln(), c.ln())).collect();
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xy.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(DecayFit {
        slope,
        intercept,
        residual: (rss / n).sqrt(),
    })
}

/// Fit of `corr(0, r)` for `r_min <= r <= r_max`.
pub fn decay_fit(table: &CorrelationTable, r_min: i64, r_max: i64) -> Result<DecayFit> {
    let pts: Vec<(f64, f64)> = (r_min.max(1)..=r_max)
        .filter_map(|r| table.get(0, r).map(|c| (r as f64, c)))
        .collect();
    log_log_fit(&pts)
}
