use serde_json::{json, Value};

use polygas_cluster::truncated_log_z;
use polygas_contour::{external_contours, m_partition, verify_hypotheses, Contour, ContourCollection};
use polygas_core::{Hp, ModelParams, Real, Result, SiteSet, SpinFlipConfig};
use polygas_graphs::{labeled_trees, MAX_TREE_VERTICES};
use polygas_oracle::{
    correlation_table, exact_partition_function, indicator_moments, log_log_fit,
};
use polygas_polymer::{children, coarsest_decomposition, polymer_partition_function};
use polygas_sitebounds::{
    chain_bound_sweep, contour_point_sweep, correlation_bound_report, summed_chain_bound_sweep,
    witness_sweep, CHAIN_RADIUS,
};
use polygas_treesum::restricted_tree_count;

use crate::config::{parse_flips, parse_list, Command, RunConfig};
use crate::{Outcome, Table};

/// Residual accepted by the polymer-gas identity.
pub const POLYMER_Z_TOLERANCE: f64 = 1e-9;
/// Largest tree size for the restricted emptiness check in `verify`.
const VERIFY_MAX_M: usize = 6;

fn num(x: f64) -> String {
    format!("{x:e}")
}

/// Parameters at every grid point.
fn grid(cfg: &RunConfig) -> Result<Vec<ModelParams>> {
    let p = cfg.params()?;
    cfg.beta_grid.iter().map(|&b| p.with_beta(b)).collect()
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    match &cfg.subcommand {
        Command::Exact => exact(cfg),
        Command::PolymerZ => polymer_z(cfg),
        Command::Expand { order } => expand(cfg, *order),
        Command::Correlate { set, r_min, r_max } => correlate(cfg, set, *r_min, *r_max),
        Command::Verify { instances } => verify(cfg, *instances),
        Command::Decompose { config } => decompose(cfg, config),
        Command::Trees { n } => trees(*n),
    }
}

fn exact(cfg: &RunConfig) -> Result<Outcome> {
    let sites = cfg.volume();
    let masks: Vec<u64> = (0..sites.len()).map(|i| 1 << i).collect();
    let mut rows = Vec::new();
    let mut table = Table {
        header: ["beta", "z", "log_z"]
            .into_iter()
            .map(String::from)
            .chain(sites.iter().map(|x| format!("m_{x}")))
            .collect(),
        rows: Vec::new(),
    };
    for p in grid(cfg)? {
        let pf = exact_partition_function::<f64>(&p)?;
        // m_x = 1 - 2 <n_x>
        let m: Vec<f64> = indicator_moments::<f64>(&masks, &p)?
            .into_iter()
            .map(|n| 1.0 - 2.0 * n)
            .collect();
        table.rows.push(
            [p.beta, pf.z, pf.log_z]
                .iter()
                .chain(&m)
                .map(|&x| num(x))
                .collect(),
        );
        rows.push(json!({
            "beta": p.beta,
            "z": pf.z,
            "log_z": pf.log_z,
            "configurations": pf.configurations,
            "magnetizations": sites.iter().zip(&m).map(|(x, m)| json!([x, m])).collect::<Vec<_>>(),
        }));
    }
    Ok(Outcome {
        truncation: json!({ "enumeration": "exhaustive", "precision": "f64" }),
        result: json!({ "rows": rows }),
        table: Some(table),
    })
}

fn polymer_z(cfg: &RunConfig) -> Result<Outcome> {
    let mut rows = Vec::new();
    for p in grid(cfg)? {
        let gas = polymer_partition_function::<f64>(&p)?;
        let oracle = exact_partition_function::<f64>(&p)?.z;
        let residual = (gas.value - oracle).abs() / oracle;
        rows.push(json!({
            "beta": p.beta,
            "z_polymer": gas.value,
            "z_oracle": oracle,
            "residual": residual,
            "within_tolerance": residual <= POLYMER_Z_TOLERANCE,
            "families": gas.families,
            "polymers": gas.polymers,
        }));
    }
    Ok(Outcome {
        truncation: json!({
            "enumeration": "exhaustive",
            "precision": "f64",
            "residual_tolerance": POLYMER_Z_TOLERANCE,
        }),
        result: json!({ "rows": rows }),
        table: None,
    })
}

fn expand(cfg: &RunConfig, order: usize) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut table = Table {
        header: ["beta", "order", "term", "partial_sum", "log_z", "rel_err"]
            .map(String::from)
            .to_vec(),
        rows: Vec::new(),
    };
    for p in grid(cfg)? {
        let s = truncated_log_z::<Hp>(&p, order, cfg.max_diam)?;
        let exact = exact_partition_function::<Hp>(&p)?.log_z;
        let errs: Vec<f64> = s
            .partial_sums
            .iter()
            .map(|x| ((x.clone() - exact.clone()) / exact.clone()).abs().to_f64())
            .collect();
        let terms: Vec<f64> = s.terms.iter().map(|t| t.to_f64()).collect();
        let sums: Vec<f64> = s.partial_sums.iter().map(|t| t.to_f64()).collect();
        for n in 0..order {
            table.rows.push(vec![
                num(p.beta),
                (n + 1).to_string(),
                num(terms[n]),
                num(sums[n]),
                num(exact.to_f64()),
                num(errs[n]),
            ]);
        }
        rows.push(json!({
            "beta": p.beta,
            "log_z": exact.to_f64(),
            "universe": s.universe,
            "terms": terms,
            "partial_sums": sums,
            "relative_errors": errs,
            "errors_decreasing": errs.windows(2).all(|w| w[1] < w[0]),
        }));
    }
    Ok(Outcome {
        truncation: json!({
            "order": order,
            "max_diam": cfg.max_diam,
            "precision": format!("{} bits", polygas_core::HP_BITS),
        }),
        result: json!({ "rows": rows }),
        table: Some(table),
    })
}

fn correlate(cfg: &RunConfig, set: &str, r_min: i64, r_max: i64) -> Result<Outcome> {
    let a = SiteSet::new(parse_list("set", set)?);
    let sites = cfg.volume();
    let x0 = if sites.contains(0) { 0 } else { cfg.lambda.0 };
    let mut rows = Vec::new();
    let mut table = Table {
        header: ["beta", "r", "corr", "corr_times_r_alpha"].map(String::from).to_vec(),
        rows: Vec::new(),
    };
    for p in grid(cfg)? {
        let t = correlation_table(&p)?;
        let corr: Vec<(i64, f64)> = (1..=cfg.lambda.1 - x0)
            .filter_map(|r| t.get(x0, x0 + r).map(|c| (r, c)))
            .collect();
        for &(r, c) in &corr {
            table.rows.push(vec![
                num(p.beta),
                r.to_string(),
                num(c),
                num(c * (r as f64).powf(p.alpha)),
            ]);
        }
        let window: Vec<(f64, f64)> = corr
            .iter()
            .filter(|(r, _)| (r_min..=r_max).contains(r))
            .map(|&(r, c)| (r as f64, c))
            .collect();
        let scaled: Vec<f64> = window.iter().map(|(r, c)| c * r.powf(p.alpha)).collect();
        let spread = scaled.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            / scaled.iter().cloned().fold(f64::INFINITY, f64::min);
        let fit = log_log_fit(&window);
        rows.push(json!({
            "beta": p.beta,
            "origin": x0,
            "corr": corr,
            "strictly_decreasing": corr.windows(2).all(|w| w[1].1 < w[0].1),
            "fit": fit.as_ref().ok(),
            "fit_error": fit.as_ref().err().map(|e| e.to_string()),
            "shape_spread": (!scaled.is_empty()).then_some(spread),
        }));
    }
    let bound = correlation_bound_report(&cfg.params()?, &a, &cfg.beta_grid)?;
    Ok(Outcome {
        truncation: json!({
            "enumeration": "exhaustive",
            "precision": "f64",
            "fit_window": [r_min, r_max],
        }),
        result: json!({ "two_point": rows, "bound": bound }),
        table: Some(table),
    })
}

fn verify(cfg: &RunConfig, instances: usize) -> Result<Outcome> {
    let p = cfg.params()?;
    let hyp = verify_hypotheses(&p, cfg.max_diam, &cfg.beta_grid)?;
    let chain = chain_bound_sweep(instances, cfg.seed)?;
    let summed = summed_chain_bound_sweep(instances, cfg.seed)?;
    let witness = witness_sweep(&p, cfg.max_diam)?;
    let point = contour_point_sweep(&p, cfg.max_diam, hyp.c0_fit)?;
    let cayley: Vec<Value> = (1..=8usize)
        .map(|n| {
            let want = (n as u64).pow(n.saturating_sub(2) as u32);
            let got = labeled_trees(n).map(|t| t.count() as u64)?;
            Ok(json!({ "n": n, "count": got, "expected": want, "ok": got == want }))
        })
        .collect::<Result<_>>()?;
    let mut restricted = Vec::new();
    for m in 2..=VERIFY_MAX_M {
        for n in m..=2 * m + 2 {
            let count = restricted_tree_count(n, m)?;
            restricted.push(json!({
                "n": n,
                "m": m,
                "count": count,
                "ok": n <= 2 * m - 2 || count == 0,
            }));
        }
    }
    let trees_ok = cayley.iter().chain(&restricted).all(|v| v["ok"] == true);
    let ok = json!({
        "hypotheses": hyp.ok(),
        "peierls_decreasing": hyp.peierls_decreasing,
        "chain": chain.violations == 0,
        "summed_chain": summed.violations == 0,
        "witness": witness.failures.is_empty(),
        "contour_point": point.ok(),
        "trees": trees_ok,
    });
    Ok(Outcome {
        truncation: json!({
            "max_diam": cfg.max_diam,
            "chain_instances": instances,
            "chain_radius": CHAIN_RADIUS,
            "restricted_m_max": VERIFY_MAX_M,
            "c0_used": hyp.c0_fit,
        }),
        result: json!({
            "ok": ok,
            "hypotheses": hyp,
            "chain": chain,
            "summed_chain": summed,
            "witness": witness,
            "contour_point": point,
            "trees": { "cayley": cayley, "restricted": restricted },
        }),
        table: None,
    })
}

fn contour_node(c: &Contour, g: &ContourCollection) -> Value {
    json!({
        "bonds": c.body().halves(),
        "interior": c.interior(),
        "diam": c.diam(),
        "energy": c.energy(),
        "children": children(c, g).iter().map(|k| contour_node(k, g)).collect::<Vec<_>>(),
    })
}

fn decompose(cfg: &RunConfig, config: &str) -> Result<Outcome> {
    let p = cfg.params()?;
    let halves = parse_flips(config)?;
    let flips = SpinFlipConfig::from_halves(&halves)?;
    let g = m_partition(&flips, &p)?;
    let polymers = coarsest_decomposition(&g, &p)?;
    let tree: Vec<Value> = external_contours(&g)
        .iter()
        .map(|c| contour_node(c, &g))
        .collect();
    let polymer_list: Vec<Value> = polymers
        .polymers
        .iter()
        .map(|q| {
            json!({
                "contours": q.contours().iter().map(|c| c.body().halves()).collect::<Vec<_>>(),
                "energy_sum": q.energy_sum(),
            })
        })
        .collect();
    Ok(Outcome {
        truncation: json!({ "enumeration": "none" }),
        result: json!({
            "bonds": flips.halves(),
            "energy": g.energy::<f64>(&p),
            "contours": g.len(),
            "partition": tree,
            "polymers": polymer_list,
            "polymers_compatible": polymers.compatible,
        }),
        table: None,
    })
}

fn trees(n: usize) -> Result<Outcome> {
    let cayley = (n as u128).pow(n.saturating_sub(2) as u32);
    let enumerated = if n <= MAX_TREE_VERTICES {
        Some(labeled_trees(n)?.count() as u128)
    } else {
        None
    };
    let restricted: Vec<(usize, u128)> = (2..=n)
        .map(|m| restricted_tree_count(n, m).map(|c| (m, c)))
        .collect::<Result<_>>()?;
    let mut table = Table {
        header: ["family", "n", "m", "count"].map(String::from).to_vec(),
        rows: vec![vec!["cayley".into(), n.to_string(), String::new(), cayley.to_string()]],
    };
    for &(m, c) in &restricted {
        table
            .rows
            .push(vec!["restricted".into(), n.to_string(), m.to_string(), c.to_string()]);
    }
    Ok(Outcome {
        truncation: json!({ "enumeration_limit": MAX_TREE_VERTICES }),
        result: json!({
            "n": n,
            "count": cayley,
            "enumerated": enumerated,
            "restricted": restricted.iter().map(|(m, c)| json!({ "m": m, "count": c })).collect::<Vec<_>>(),
        }),
        table: Some(table),
    })
}
