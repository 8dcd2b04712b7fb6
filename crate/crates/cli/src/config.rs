use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use polygas_cluster::MAX_SERIES_ORDER;
use polygas_contour::MAX_ENUM_DIAM;
use polygas_core::{Error, ModelParams, Result, SiteSet, SpinFlipConfig};
use polygas_oracle::{MAX_ORACLE_SITES, MAX_WICK_SITES};
use polygas_polymer::MAX_GAS_SITES;
use polygas_sitebounds::MAX_TREE_SITES;

/// Largest tree size accepted by `trees`.
pub const MAX_TREES_N: usize = 24;
/// Largest flip list accepted by `decompose`.
pub const MAX_DECOMPOSE_FLIPS: usize = 4096;
/// Largest number of random instances per chain sweep.
pub const MAX_INSTANCES: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Subcommand)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Oracle partition function, log Z and magnetizations.
    Exact,
    /// Polymer-gas sum against the oracle partition function.
    PolymerZ,
    /// Truncated cluster expansion of log Z against the oracle.
    Expand {
        #[arg(long)]
        order: usize,
    },
    /// Truncated two-point functions, decay fit and the correlation bound report.
    Correlate {
        /// Comma-separated sites, e.g. "0,2,5".
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long, default_value_t = 2)]
        r_min: i64,
        #[arg(long, default_value_t = 6)]
        r_max: i64,
    },
    /// Hypothesis sweep, kernel and detector sweeps and tree-family checks.
    Verify {
        /// Random instances per chain sweep.
        #[arg(long, default_value_t = 500)]
        instances: usize,
    },
    /// M-partition and coarsest polymer decomposition of a flip list.
    Decompose {
        /// Comma-separated half-integer bond positions, e.g. "-0.5,0.5".
        #[arg(long, allow_hyphen_values = true)]
        config: String,
    },
    /// Labeled and restricted tree counts.
    Trees {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Parser)]
#[command(name = "polygas", version = crate::VERSION, about = "Polymer gas and cluster expansion toolkit for the long-range Ising chain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, default_value_t = 2.0)]
    pub alpha: f64,
    /// A single value or a grid "start:stop:step".
    #[arg(long, global = true, default_value = "1")]
    pub beta: String,
    /// Contour separation constant.
    #[arg(long = "M", global = true, default_value_t = ModelParams::DEFAULT_M)]
    pub m_param: f64,
    /// Volume "a..b", both ends included.
    #[arg(long, global = true, default_value = "0..5", allow_hyphen_values = true)]
    pub lambda: String,
    /// Contour diameter cutoff for enumerations.
    #[arg(long, global = true)]
    pub max_diam: Option<i64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Report file; stdout when absent.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Fully resolved run parameters, embedded in every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub subcommand: Command,
    pub alpha: f64,
    pub beta_grid: Vec<f64>,
    pub m_param: f64,
    pub lambda: (i64, i64),
    pub order: Option<usize>,
    pub max_diam: i64,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
}

/// `"x"` or `"start:stop:step"` with `stop` included up to rounding.
pub fn parse_beta_grid(s: &str) -> Result<Vec<f64>> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::param("beta", format!("`{t}` is not a number")))
    };
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [x] => vec![num(x)?],
        [a, b, h] => {
            let (a, b, h) = (num(a)?, num(b)?, num(h)?);
            if !(h > 0.0) || b < a {
                return Err(Error::param("beta", "grid needs start <= stop and step > 0"));
            }
            let k = ((b - a) / h + 1e-9).floor() as usize;
            if k >= 10_000 {
                return Err(Error::infeasible("beta grid points", k + 1, 10_000));
            }
            (0..=k).map(|i| a + i as f64 * h).collect()
        }
        _ => return Err(Error::param("beta", format!("`{s}` is neither a value nor start:stop:step"))),
    };
    if let Some(b) = grid.iter().find(|b| !(**b >= 0.0 && b.is_finite())) {
        return Err(Error::param("beta", format!("{b} must be finite and >= 0")));
    }
    Ok(grid)
}

/// `"a..b"` with `a <= b`.
pub fn parse_lambda(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::param("lambda", format!("`{s}` is not of the form a..b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(Error::param("lambda", format!("{a} > {b}")));
    }
    Ok((a, b))
}

/// Comma-separated list of numbers.
pub fn parse_list<T: std::str::FromStr>(name: &str, s: &str) -> Result<Vec<T>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::param(name, format!("`{t}` is not a number")))
        })
        .collect()
}

/// Flip positions in any order; repeated positions are rejected later.
pub fn parse_flips(s: &str) -> Result<Vec<f64>> {
    let mut halves: Vec<f64> = parse_list("config", s)?;
    halves.sort_by(f64::total_cmp);
    Ok(halves)
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let lambda = parse_lambda(&cli.lambda)?;
        let width = lambda.1 - lambda.0 + 1;
        let default_diam = match cli.command {
            Command::Verify { .. } => 8,
            _ => width.min(MAX_ENUM_DIAM),
        };
        let order = match cli.command {
            Command::Expand { order } => Some(order),
            _ => None,
        };
        let cfg = RunConfig {
            subcommand: cli.command,
            alpha: cli.alpha,
            beta_grid: parse_beta_grid(&cli.beta)?,
            m_param: cli.m_param,
            lambda,
            order,
            max_diam: cli.max_diam.unwrap_or(default_diam),
            seed: cli.seed,
            output: cli.output,
            format: cli.format,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn volume(&self) -> SiteSet {
        SiteSet::interval(self.lambda.0, self.lambda.1)
    }

    /// Model parameters at the first grid point.
    pub fn params(&self) -> Result<ModelParams> {
        ModelParams::with_all(
            self.alpha,
            self.beta_grid[0],
            self.m_param,
            ModelParams::DEFAULT_DIST_EXPONENT,
            self.volume(),
            Default::default(),
        )
    }

    /// Feasibility preconditions of the module behind the subcommand.
    pub fn validate(&self) -> Result<()> {
        self.params()?;
        let sites = (self.lambda.1 - self.lambda.0 + 1) as usize;
        if !(1..=MAX_ENUM_DIAM).contains(&self.max_diam) {
            return Err(Error::infeasible("max_diam", self.max_diam.max(0) as usize, MAX_ENUM_DIAM as usize));
        }
        let tabular = matches!(
            self.subcommand,
            Command::Exact | Command::Expand { .. } | Command::Correlate { .. } | Command::Trees { .. }
        );
        if self.format == Format::Csv && !tabular {
            return Err(Error::param("format", "csv is available for exact, expand, correlate and trees"));
        }
        match &self.subcommand {
            Command::Exact => check_size("oracle volume", sites, MAX_ORACLE_SITES),
            Command::PolymerZ => check_size("polymer gas volume", sites, MAX_GAS_SITES),
            Command::Expand { order } => {
                if *order == 0 || *order > MAX_SERIES_ORDER {
                    return Err(Error::infeasible("series order", *order, MAX_SERIES_ORDER));
                }
                check_size("oracle volume", sites, MAX_ORACLE_SITES)
            }
            Command::Correlate { set, r_min, r_max } => {
                check_size("oracle volume", sites, MAX_ORACLE_SITES)?;
                let a = SiteSet::new(parse_list("set", set)?);
                if a.len() < 2 {
                    return Err(Error::param("set", "needs at least two distinct sites"));
                }
                check_size("correlation set", a.len(), MAX_WICK_SITES.min(MAX_TREE_SITES))?;
                if !a.is_subset(&self.volume()) {
                    return Err(Error::param("set", "must lie inside lambda"));
                }
                if r_min < &1 || r_max < r_min {
                    return Err(Error::param("r_min, r_max", "need 1 <= r_min <= r_max"));
                }
                Ok(())
            }
            Command::Verify { instances } => {
                check_size("polymer gas volume", sites, MAX_GAS_SITES)?;
                check_size("chain instances", *instances, MAX_INSTANCES)
            }
            Command::Decompose { config } => {
                let halves = parse_flips(config)?;
                SpinFlipConfig::from_halves(&halves)
                    .and_then(|c| if c.is_empty() { Err(Error::Empty("flip list".into())) } else { Ok(c) })?;
                check_size("flips", halves.len(), MAX_DECOMPOSE_FLIPS)
            }
            Command::Trees { n } => {
                if *n == 0 {
                    return Err(Error::param("n", "must be positive"));
                }
                check_size("tree size", *n, MAX_TREES_N)
            }
        }
    }
}

fn check_size(what: &str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        Err(Error::infeasible(what, size, limit))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_beta_grid("2").unwrap(), vec![2.0]);
        assert_eq!(parse_beta_grid("4:6:1").unwrap(), vec![4.0, 5.0, 6.0]);
        let g = parse_beta_grid("0:1:0.1").unwrap();
        assert_eq!(g.len(), 11);
        assert!((g[10] - 1.0).abs() < 1e-12);
        assert!(parse_beta_grid("1:0:1").is_err());
        assert!(parse_beta_grid("-1").is_err());
        assert!(parse_beta_grid("a").is_err());
    }

    #[test]
    fn volumes() {
        assert_eq!(parse_lambda("0..5").unwrap(), (0, 5));
        assert_eq!(parse_lambda("-9..9").unwrap(), (-9, 9));
        assert!(parse_lambda("5..0").is_err());
        assert!(parse_lambda("0-5").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list::<i64>("set", "0, 2,5").unwrap(), vec![0, 2, 5]);
        assert_eq!(parse_list::<f64>("config", "-0.5,0.5").unwrap(), vec![-0.5, 0.5]);
        assert!(parse_list::<i64>("set", "0,x").is_err());
    }
}
