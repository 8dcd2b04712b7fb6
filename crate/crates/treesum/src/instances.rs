use rayon::prelude::*;
use serde::Serialize;

use polygas_contour::{enumerate_contours, is_positively_compatible, Contour};
use polygas_core::{phi, Error, ModelParams, Result};
use polygas_polymer::{polymer_compatible, polymer_universe, Activities, Polymer};

use crate::sums::tree_sum_global;
use crate::system::{contracting, leaf_pruning, modified_vertex, VertexSystem};

/// Contours of bounded diameter in the volume, with `v_beta = e^{-beta H}`
/// and `e = Phi(I_-, I_-)` on positively compatible pairs.
#[derive(Clone, Debug)]
pub struct ContourSystem {
    pub system: VertexSystem,
    pub contours: Vec<Contour>,
    pub max_diam: i64,
}

pub fn contour_system(p: &ModelParams, max_diam: i64) -> Result<ContourSystem> {
    let contours = enumerate_contours(p, max_diam)?;
    let n = contours.len();
    let upper: Vec<(usize, usize, f64)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let contours = &contours;
            (i + 1..n).filter_map(move |j| {
                let (a, b) = (&contours[i], &contours[j]);
                // overlapping bodies are never compatible
                is_positively_compatible(a, b, p)
                    .unwrap_or(false)
                    .then(|| (i, j, phi::<f64>(a.interior(), b.interior(), p.alpha)))
            })
        })
        .collect();
    let mut edges = vec![0.0; n * n];
    for (i, j, e) in upper {
        edges[i * n + j] = e;
        edges[j * n + i] = e;
    }
    let energies: Vec<f64> = contours.iter().map(|c| c.energy()).collect();
    let labels = contours.iter().map(|c| format!("{:?}", c.body().halves())).collect();
    let system =
        VertexSystem::exponential(labels, vec![1.0; n], energies, edges)?;
    Ok(ContourSystem {
        system,
        contours,
        max_diam,
    })
}

/// Polymers of bounded diameter with `v_beta` the upper activity and
/// `e = 1` on incompatible pairs (a polymer is incompatible with itself).
#[derive(Clone, Debug)]
pub struct PolymerSystem {
    pub system: VertexSystem,
    pub polymers: Vec<Polymer>,
    /// `sum_{gamma in Gamma} H(gamma)` per polymer.
    pub energy_sums: Vec<f64>,
}

pub fn polymer_system(p: &ModelParams, max_diam: i64) -> Result<PolymerSystem> {
    if p.has_field() {
        return Err(Error::param("field", "upper activities are taken without field"));
    }
    let polymers = polymer_universe(p, max_diam)?;
    let free = Activities::<f64>::new(&p.with_beta(0.0)?);
    // at beta = 0 the upper activity is its tree prefactor
    let prefactors = polymers
        .iter()
        .map(|q| free.upper_activity(q))
        .collect::<Result<Vec<f64>>>()?;
    let energy_sums: Vec<f64> = polymers.iter().map(|q| q.energy_sum()).collect();
    let n = polymers.len();
    let mut edges = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if !polymer_compatible(&polymers[i], &polymers[j], p) {
                edges[i * n + j] = 1.0;
            }
        }
    }
    let halves: Vec<f64> = energy_sums.iter().map(|h| h / 2.0).collect();
    let labels = polymers.iter().map(|q| format!("{:?}", q.body().halves())).collect();
    let system = VertexSystem::exponential(labels, prefactors, halves, edges)?;
    Ok(PolymerSystem {
        system,
        polymers,
        energy_sums,
    })
}

/// Bounds on the contour system at one inverse temperature. Ratios are
/// left side over right side; a bound holds when its ratio is at most one.
#[derive(Clone, Debug, Serialize)]
pub struct ContourBoundRow {
    pub beta: f64,
    /// `max_gamma |v'_beta(gamma) - beta H / 2| / (beta H / 2)`.
    pub modified_vertex_rel_err: f64,
    /// `min_gamma v'_beta(gamma)`.
    pub modified_vertex_inf: f64,
    /// `W(gamma) / e^{-beta H / 2}`.
    pub single_max_ratio: f64,
    pub single_violations: usize,
    /// `W(g1, g2) / (Phi e^{-beta (H1 + H2) / 4})` over positively
    /// compatible pairs.
    pub pair_max_ratio: f64,
    pub pair_violations: usize,
    pub pairs_checked: usize,
    /// `L(gamma) / (2 e^{-c2 beta / 2} H)`.
    pub pruning_max_ratio: f64,
    /// `R^2(g1, g2) / (16^{2 alpha} alpha / (alpha - 1) e^{-c2 beta / 4} (H1 + H2) Phi)`.
    pub contracting_max_ratio: f64,
}

/// Sweeps the single-contour, two-contour, leaf-pruning and contracting
/// bounds over a grid, with global tree sums truncated at `n_max` vertices.
pub fn contour_bound_sweep(
    cs: &ContourSystem,
    p: &ModelParams,
    betas: &[f64],
    c2: f64,
    n_max: usize,
) -> Result<Vec<ContourBoundRow>> {
    let vs = &cs.system;
    let n = vs.len();
    let energy: Vec<f64> = cs.contours.iter().map(|c| c.energy()).collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| vs.edge_weight(i, j) != 0.0)
        .collect();
    let alpha = p.alpha;
    let contracting_const = 16f64.powf(2.0 * alpha) * alpha / (alpha - 1.0);
    betas
        .iter()
        .map(|&beta| {
            let mut rel = 0.0f64;
            let mut inf = f64::INFINITY;
            let mut single = (0.0f64, 0usize);
            let mut pruning = 0.0f64;
            for t in 0..n {
                let vp = modified_vertex(vs, t, beta)?;
                let want = beta * energy[t] / 2.0;
                rel = rel.max((vp - want).abs() / want);
                inf = inf.min(vp);
                let w = tree_sum_global(vs, &[t], beta, n_max)?.value;
                let r = w / (-beta * energy[t] / 2.0).exp();
                single.0 = single.0.max(r);
                single.1 += usize::from(r > 1.0);
                let l = leaf_pruning(vs, t, beta)?;
                pruning = pruning.max(l / (2.0 * (-c2 * beta / 2.0).exp() * energy[t]));
            }
            let pair_rows: Vec<(f64, f64)> = pairs
                .par_iter()
                .map(|&(i, j)| {
                    let e = vs.edge_weight(i, j);
                    let w = tree_sum_global(vs, &[i, j], beta, n_max)?.value;
                    let bound = e * (-beta * (energy[i] + energy[j]) / 4.0).exp();
                    let r2 = contracting(vs, &[i, j], beta)?;
                    let c_bound = contracting_const
                        * (-c2 * beta / 4.0).exp()
                        * (energy[i] + energy[j])
                        * e;
                    Ok((w / bound, r2 / c_bound))
                })
                .collect::<Result<_>>()?;
            Ok(ContourBoundRow {
                beta,
                modified_vertex_rel_err: rel,
                modified_vertex_inf: inf,
                single_max_ratio: single.0,
                single_violations: single.1,
                pair_max_ratio: pair_rows.iter().map(|r| r.0).fold(0.0, f64::max),
                pair_violations: pair_rows.iter().filter(|r| r.0 > 1.0).count(),
                pairs_checked: pairs.len(),
                pruning_max_ratio: pruning,
                contracting_max_ratio: pair_rows.iter().map(|r| r.1).fold(0.0, f64::max),
            })
        })
        .collect()
}
