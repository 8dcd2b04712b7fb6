use serde::Serialize;

use polygas_core::{Error, ModelParams, Real, Result};
use polygas_graphs::{connected_sum, pair_index, set_partitions};

use crate::activity::Activities;
use crate::decompose::enumerate_compatible_polymer_sets;

/// Polymer-gas side of the partition function with bookkeeping.
#[derive(Clone, Debug, Serialize)]
pub struct PolymerGasSum<R> {
    pub value: R,
    /// Compatible families summed, the empty one included.
    pub families: usize,
    /// Distinct polymers whose activity was evaluated.
    pub polymers: usize,
}

/// `sum over compatible families of the product of activities` on an
/// interval volume with plus boundary condition.
///
/// Activities only see the sites enclosed by their contours, so on a
/// volume with holes a polymer would need to know which enclosed sites
/// are frozen; such volumes are refused.
pub fn polymer_partition_function<R: Real>(p: &ModelParams) -> Result<PolymerGasSum<R>> {
    if !p.lambda.is_interval() {
        return Err(Error::param("lambda", "polymer gas needs an interval volume"));
    }
    let families = enumerate_compatible_polymer_sets(p)?;
    let mut eng = Activities::<R>::new(p);
    let mut terms = Vec::with_capacity(families.len());
    let mut seen = std::collections::HashSet::new();
    for x in &families {
        let mut w = R::one();
        for q in &x.polymers {
            seen.insert(q.key());
            w = w * eng.activity(q)?.value;
        }
        terms.push(w);
    }
    Ok(PolymerGasSum {
        value: polygas_core::pairwise_sum(&terms),
        families: families.len(),
        polymers: seen.len(),
    })
}

/// Relative gap between `prod (1 + x_e)` and the sum over set partitions
/// of products of connected-graph sums. `weights[pair_index(n, a, b)]`
/// holds `x_{ab}`.
pub fn mayer_expand_check(n: usize, weights: &[f64]) -> Result<f64> {
    if n > 7 {
        return Err(Error::infeasible("mayer set", n, 7));
    }
    if weights.len() != n * n.saturating_sub(1) / 2 {
        return Err(Error::param("weights", "need one weight per pair"));
    }
    let lhs: f64 = weights.iter().map(|x| 1.0 + x).product();
    let mut rhs = 0.0;
    for blocks in set_partitions(n) {
        let mut term = 1.0;
        for b in &blocks {
            let k = b.len();
            let mut x = Vec::with_capacity(k * k.saturating_sub(1) / 2);
            for i in 0..k {
                for j in i + 1..k {
                    x.push(weights[pair_index(n, b[i], b[j])]);
                }
            }
            term *= connected_sum(k, &x);
        }
        rhs += term;
    }
    Ok((lhs - rhs).abs() / lhs.abs().max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use polygas_core::{zeta, SiteSet};

    #[test]
    fn single_site() {
        let p = ModelParams::on_interval(2.0, 1.0, 0, 0).unwrap();
        let z = polymer_partition_function::<f64>(&p).unwrap();
        let want = 1.0 + (-4.0 * zeta(2.0).unwrap()).exp();
        assert!((z.value - want).abs() < 1e-15);
        assert!((z.value - 1.0013882).abs() < 1e-7);
        assert_eq!(z.families, 2);
    }

    #[test]
    fn zero_beta_counts_configurations() {
        for l in 0..5 {
            let p = ModelParams::on_interval(1.5, 0.0, 0, l).unwrap();
            let z = polymer_partition_function::<f64>(&p).unwrap();
            assert!((z.value - 2f64.powi(l as i32 + 1)).abs() < 1e-12, "L={l}");
        }
    }

    #[test]
    fn refuses_holes() {
        let p = ModelParams::new(2.0, 1.0, SiteSet::new(vec![0, 2])).unwrap();
        assert!(polymer_partition_function::<f64>(&p).is_err());
    }

    #[test]
    fn mayer_small_cases() {
        assert_eq!(mayer_expand_check(3, &[0.0; 3]).unwrap(), 0.0);
        assert!(mayer_expand_check(2, &[0.5]).unwrap() < 1e-15);
        let w = [0.3, -0.2, 0.7, 1.1, -0.9, 0.05];
        assert!(mayer_expand_check(4, &w).unwrap() < 1e-10);
        assert!(mayer_expand_check(8, &[0.0; 28]).is_err());
    }
}
