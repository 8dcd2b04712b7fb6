use rayon::prelude::*;
use serde::Serialize;

use polygas_core::{interior_energy, minus_interior, pairwise_sum, ModelParams, Result, SpinFlipConfig};

use crate::collection::external_contours;
use crate::enumerate::{class_representatives, contours_containing_origin, ContourClass};
use crate::partition::m_partition;

/// Relative slack for floating comparisons of exact inequalities.
const REL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    EnergyFloor,
    RemovalLower,
    RemovalUpper,
    CoverLower,
    DiameterBound,
    PeierlsSandwich,
    PeierlsMonotone,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Whole configuration, in half-integer positions.
    pub config: Vec<f64>,
    /// Offending contour, when one is singled out.
    pub contour: Option<Vec<f64>>,
    pub lhs: f64,
    pub rhs: f64,
}

/// Peierls sums at one inverse temperature.
#[derive(Clone, Debug, Serialize)]
pub struct PeierlsRow {
    pub beta: f64,
    /// Sum over individual contours with `0` in the minus-interior.
    pub origin_sum: f64,
    /// Sum over translation classes, one term each.
    pub class_sum: f64,
    /// Sum over translation classes weighted by interior size.
    pub weighted_class_sum: f64,
    /// `class_sum <= origin_sum == weighted_class_sum` (equality to 1e-12).
    pub sandwich_holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisReport {
    pub alpha: f64,
    pub m_param: f64,
    pub dist_exponent: f64,
    pub max_diam: i64,
    pub contour_classes: usize,
    /// Pairs `(Γ, γ ∈ ∂Γ)` tested for the removal sandwich.
    pub removal_pairs_checked: usize,
    /// `max N ln 2 / H` over all classes.
    pub c0_fit: f64,
    /// `max log2(count_n) / n` over cover sizes whose diameter range is
    /// fully enumerated.
    pub c1_fit: f64,
    /// `min -ln(S_beta) / beta` over the grid from `beta0` on.
    pub c2_fit: Option<f64>,
    /// Smallest grid point from which every Peierls sum is below one.
    pub beta0: Option<f64>,
    /// `(n, number of contours through 0 with cover size n, complete)`.
    pub cover_counts: Vec<(u32, usize, bool)>,
    pub beta_grid: Vec<f64>,
    pub peierls_sums: Vec<PeierlsRow>,
    pub peierls_decreasing: bool,
    pub violation_count: usize,
    /// First violations found, capped at [`HypothesisReport::MAX_LISTED`].
    pub violations: Vec<Violation>,
}

impl HypothesisReport {
    pub const MAX_LISTED: usize = 200;

    pub fn ok(&self) -> bool {
        self.violation_count == 0
    }
}

fn rows(
    classes: &[ContourClass],
    origin: &[f64],
    betas: &[f64],
) -> Vec<PeierlsRow> {
    betas
        .iter()
        .map(|&beta| {
            let direct: Vec<f64> = origin.iter().map(|h| (-beta * h).exp()).collect();
            let plain: Vec<f64> = classes.iter().map(|c| (-beta * c.energy).exp()).collect();
            let weighted: Vec<f64> = classes
                .iter()
                .map(|c| c.interior_len as f64 * (-beta * c.energy).exp())
                .collect();
            let (o, c, w) = (pairwise_sum(&direct), pairwise_sum(&plain), pairwise_sum(&weighted));
            PeierlsRow {
                beta,
                origin_sum: o,
                class_sum: c,
                weighted_class_sum: w,
                sandwich_holds: c <= o * (1.0 + REL_TOL) && (o - w).abs() <= REL_TOL * o,
            }
        })
        .collect()
}

/// Peierls sum over contours through the origin with bounded diameter,
/// together with the class-sum forms.
pub fn peierls_sum(p: &ModelParams, beta: f64, max_diam: i64) -> Result<PeierlsRow> {
    let classes = class_representatives(p, max_diam)?;
    let origin: Vec<f64> = contours_containing_origin(p, max_diam)?
        .iter()
        .map(|c| c.energy())
        .collect();
    Ok(rows(&classes, &origin, &[beta]).remove(0))
}

/// Removal sandwich `H(Γ∖γ) + 7/8 H(γ) <= H(Γ) <= H(Γ∖γ) + H(γ)` for one
/// configuration; returns checked pairs and violations.
fn removal_sandwich(cfg: &SpinFlipConfig, p: &ModelParams) -> (usize, Vec<Violation>) {
    let g = m_partition(cfg, p).expect("nonempty");
    let whole: f64 = interior_energy(&minus_interior(cfg), p);
    let mut bad = Vec::new();
    let ext = external_contours(&g);
    for gamma in &ext {
        let rest = cfg.xor(gamma.body());
        let h_rest: f64 = interior_energy(&minus_interior(&rest), p);
        let h = gamma.energy();
        let tol = REL_TOL * (1.0 + whole.abs());
        let lower = h_rest + 0.875 * h;
        let upper = h_rest + h;
        let mut push = |kind, lhs: f64, rhs: f64| {
            bad.push(Violation {
                kind,
                config: cfg.halves(),
                contour: Some(gamma.body().halves()),
                lhs,
                rhs,
            })
        };
        if lower > whole + tol {
            push(ViolationKind::RemovalLower, lower, whole);
        }
        if whole > upper + tol {
            push(ViolationKind::RemovalUpper, whole, upper);
        }
    }
    (ext.len(), bad)
}

/// Exhaustive sweep of the energy, cover-size and Peierls inequalities over
/// all contours and configurations of diameter at most `max_diam`.
pub fn verify_hypotheses(
    p: &ModelParams,
    max_diam: i64,
    beta_grid: &[f64],
) -> Result<HypothesisReport> {
    let classes = class_representatives(p, max_diam)?;
    let mut violations = Vec::new();

    for c in &classes {
        if c.energy < 2.0 * (1.0 - REL_TOL) {
            violations.push(Violation {
                kind: ViolationKind::EnergyFloor,
                config: c.body().halves(),
                contour: None,
                lhs: 2.0,
                rhs: c.energy,
            });
        }
    }

    // every configuration, by translation with leftmost bond at -1/2
    let per_diam: Vec<(usize, Vec<Violation>)> = (1..=max_diam)
        .into_par_iter()
        .map(|d| {
            let mut checked = 0;
            let mut bad = Vec::new();
            for mask in 0u32..(1 << (d - 1)) {
                if mask.count_ones() % 2 == 1 {
                    continue;
                }
                let mut b = vec![-1];
                b.extend((1..d).filter(|k| mask >> (k - 1) & 1 == 1).map(|k| -1 + 2 * k));
                b.push(-1 + 2 * d);
                let cfg = SpinFlipConfig::from_doubled(b).expect("sorted odd bonds");
                let (n, v) = removal_sandwich(&cfg, p);
                checked += n;
                bad.extend(v);
            }
            (checked, bad)
        })
        .collect();
    let mut removal_pairs_checked = 0;
    for (n, v) in per_diam {
        removal_pairs_checked += n;
        violations.extend(v);
    }

    let ln2 = std::f64::consts::LN_2;
    let c0_fit = classes
        .iter()
        .map(|c| c.cover as f64 * ln2 / c.energy)
        .fold(0.0, f64::max);
    let mut counts: std::collections::BTreeMap<u32, usize> = Default::default();
    for c in &classes {
        let lower = 1.0 + (c.diam as f64).log2();
        if (c.cover as f64) < lower - REL_TOL {
            violations.push(Violation {
                kind: ViolationKind::CoverLower,
                config: c.body().halves(),
                contour: None,
                lhs: lower,
                rhs: c.cover as f64,
            });
        }
        if c.diam as f64 > (c0_fit * c.energy).exp() {
            violations.push(Violation {
                kind: ViolationKind::DiameterBound,
                config: c.body().halves(),
                contour: None,
                lhs: c.diam as f64,
                rhs: (c0_fit * c.energy).exp(),
            });
        }
        *counts.entry(c.cover).or_default() += c.interior_len;
    }
    // cover size n covers diameters (2^(n-2), 2^(n-1)]
    let cover_counts: Vec<(u32, usize, bool)> = counts
        .into_iter()
        .map(|(n, k)| {
            let top = if n == 1 { 1 } else { 1i64 << (n - 1) };
            (n, k, top <= max_diam)
        })
        .collect();
    let c1_fit = cover_counts
        .iter()
        .filter(|(_, _, complete)| *complete)
        .map(|&(n, k, _)| (k as f64).log2() / n as f64)
        .fold(0.0, f64::max);

    let origin: Vec<f64> = contours_containing_origin(p, max_diam)?
        .iter()
        .map(|c| c.energy())
        .collect();
    let peierls_sums = rows(&classes, &origin, beta_grid);
    let mut peierls_decreasing = true;
    for (i, r) in peierls_sums.iter().enumerate() {
        if !r.sandwich_holds {
            violations.push(Violation {
                kind: ViolationKind::PeierlsSandwich,
                config: vec![],
                contour: None,
                lhs: r.origin_sum,
                rhs: r.weighted_class_sum,
            });
        }
        if i > 0 {
            let prev = &peierls_sums[i - 1];
            if r.beta > prev.beta && r.origin_sum >= prev.origin_sum {
                peierls_decreasing = false;
                violations.push(Violation {
                    kind: ViolationKind::PeierlsMonotone,
                    config: vec![],
                    contour: None,
                    lhs: r.origin_sum,
                    rhs: prev.origin_sum,
                });
            }
        }
    }
    let mut sorted: Vec<&PeierlsRow> = peierls_sums.iter().collect();
    sorted.sort_by(|a, b| a.beta.total_cmp(&b.beta));
    let start = sorted
        .iter()
        .rposition(|r| r.origin_sum >= 1.0)
        .map_or(0, |i| i + 1);
    let tail = &sorted[start..];
    let beta0 = tail.first().map(|r| r.beta);
    let c2_fit = tail
        .iter()
        .filter(|r| r.beta > 0.0)
        .map(|r| -r.origin_sum.ln() / r.beta)
        .reduce(f64::min);

    let violation_count = violations.len();
    violations.truncate(HypothesisReport::MAX_LISTED);
    Ok(HypothesisReport {
        alpha: p.alpha,
        m_param: p.m_param,
        dist_exponent: p.dist_exponent,
        max_diam,
        contour_classes: classes.len(),
        removal_pairs_checked,
        c0_fit,
        c1_fit,
        c2_fit,
        beta0,
        cover_counts,
        beta_grid: beta_grid.to_vec(),
        peierls_sums,
        peierls_decreasing,
        violation_count,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diameter_one_is_a_single_term() {
        let p = ModelParams::on_interval(2.0, 1.0, 0, 0).unwrap();
        let r = peierls_sum(&p, 6.0, 1).unwrap();
        let want = (-6.0 * 4.0 * p.zeta_alpha()).exp();
        assert!((r.origin_sum - want).abs() < 1e-15 * want);
        assert!(r.sandwich_holds);
    }

    #[test]
    fn sums_fall_with_beta() {
        let p = ModelParams::on_interval(2.0, 1.0, 0, 0).unwrap();
        let a = peierls_sum(&p, 2.0, 10).unwrap();
        let b = peierls_sum(&p, 6.0, 10).unwrap();
        assert!(b.origin_sum < a.origin_sum);
        assert!(b.origin_sum < 1.0);
    }
}
