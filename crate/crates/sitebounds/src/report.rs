use serde::Serialize;

use polygas_core::{Error, ModelParams, Result, SiteSet};
use polygas_oracle::wick_product;

use crate::kernel::{kernel, site_tree_sum};

#[derive(Clone, Debug, Serialize)]
pub struct CorrelationBoundRow {
    pub beta: f64,
    /// Oracle `|<:sigma_A:>|`.
    pub lhs: f64,
    /// `lhs / shape`.
    pub ratio: f64,
    /// `-ln(ratio / 2) / beta`, absent when the ratio vanishes or `beta = 0`.
    pub rate: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrelationBoundReport {
    pub a_set: Vec<i64>,
    pub alpha: f64,
    pub lambda: Vec<i64>,
    /// `C(x, y)` for two sites, the tree sum over sites otherwise.
    pub shape: f64,
    pub rows: Vec<CorrelationBoundRow>,
    /// Largest `c` with `lhs <= 2 e^{-c beta} shape` on every grid point
    /// with a rate.
    pub fitted_rate: Option<f64>,
    pub ratio_decreasing: bool,
}

impl CorrelationBoundReport {
    /// A single positive rate covers the whole grid.
    pub fn rate_positive(&self) -> bool {
        self.fitted_rate.is_some_and(|c| c > 0.0)
    }
}

/// Oracle Wick products of `A` over a grid of inverse temperatures against
/// the shape `C(x,y)` or the tree sum over sites.
pub fn correlation_bound_report(
    p: &ModelParams,
    a: &SiteSet,
    betas: &[f64],
) -> Result<CorrelationBoundReport> {
    if a.len() < 2 {
        return Err(Error::param("a_set", "needs at least two sites"));
    }
    if !a.is_subset(&p.lambda) {
        return Err(Error::param("a_set", "must lie inside the volume"));
    }
    let s = a.as_slice();
    let shape = if s.len() == 2 {
        kernel(s[0], s[1], p.alpha)
    } else {
        site_tree_sum(a, p.alpha)?
    };
    let rows = betas
        .iter()
        .map(|&beta| {
            let lhs = wick_product(&p.with_beta(beta)?, a)?.abs();
            let ratio = lhs / shape;
            let rate = (ratio > 0.0 && beta > 0.0).then(|| -(ratio / 2.0).ln() / beta);
            Ok(CorrelationBoundRow {
                beta,
                lhs,
                ratio,
                rate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let fitted_rate = rows
        .iter()
        .filter_map(|r| r.rate)
        .reduce(f64::min);
    let ratio_decreasing = rows.windows(2).all(|w| w[1].ratio < w[0].ratio);
    Ok(CorrelationBoundReport {
        a_set: s.to_vec(),
        alpha: p.alpha,
        lambda: p.lambda.as_slice().to_vec(),
        shape,
        rows,
        fitted_rate,
        ratio_decreasing,
    })
}
