use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use polygas_core::{pairwise_sum, zeta, Error, Result, SiteSet};
use polygas_graphs::{labeled_trees, LabeledTree};

/// `|x - y|^(-alpha)`, and `1` on the diagonal.
pub fn kernel(x: i64, y: i64, alpha: f64) -> f64 {
    if x == y {
        1.0
    } else {
        ((x - y).abs() as f64).powf(-alpha)
    }
}

/// Largest site set accepted by [`site_tree_sum`].
pub const MAX_TREE_SITES: usize = 8;
/// Largest tuple accepted by the chain inequalities.
pub const MAX_CHAIN: usize = 5;
/// Largest tuple accepted by the summed chain inequality.
pub const MAX_SUMMED_CHAIN: usize = 4;
/// Radius of the exact part of the summed chain.
pub const CHAIN_RADIUS: i64 = 20_000;

/// Both sides of an inequality `lhs <= rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sides {
    pub lhs: f64,
    pub rhs: f64,
}

impl Sides {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }

    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, left: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..left.len() {
            let v = left.remove(i);
            prefix.push(v);
            go(prefix, left, out);
            prefix.pop();
            left.insert(i, v);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (0..k).collect(), &mut out);
    out
}

fn path_weight(xs: &[i64], phi: &[usize], alpha: f64) -> f64 {
    phi.windows(2)
        .map(|w| kernel(xs[w[0]], xs[w[1]], alpha))
        .product()
}

fn check_chain(xs: &[i64], max: usize, alpha: f64) -> Result<()> {
    if xs.len() < 2 || xs.len() > max {
        return Err(Error::param(
            "xs",
            format!("tuple length {} outside 2..={max}", xs.len()),
        ));
    }
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::param("alpha", format!("{alpha} is outside (1, 2]")));
    }
    Ok(())
}

/// `prod_i C(x_i, y)` against
/// `4^(alpha k) sum_phi C(x_phi(k), y) prod_i C(x_phi(i), x_phi(i+1))`.
pub fn chain_bound_check(xs: &[i64], y: i64, alpha: f64) -> Result<Sides> {
    check_chain(xs, MAX_CHAIN, alpha)?;
    let k = xs.len();
    let lhs = xs.iter().map(|&x| kernel(x, y, alpha)).product();
    let terms: Vec<f64> = permutations(k)
        .iter()
        .map(|phi| kernel(xs[phi[k - 1]], y, alpha) * path_weight(xs, phi, alpha))
        .collect();
    let rhs = 4f64.powf(alpha * k as f64) * pairwise_sum(&terms);
    Ok(Sides { lhs, rhs })
}

/// Exact part of `sum_y prod_i C(x_i, y)` over `|y - x| <= radius` for the
/// extreme sites, and a bound on the rest.
pub fn summed_chain(xs: &[i64], alpha: f64, radius: i64) -> (f64, f64) {
    let lo = *xs.iter().min().expect("nonempty") - radius;
    let hi = *xs.iter().max().expect("nonempty") + radius;
    let terms: Vec<f64> = (lo..=hi)
        .map(|y| xs.iter().map(|&x| kernel(x, y, alpha)).product())
        .collect();
    let s = xs.len() as f64 * alpha;
    // both sides: sum_{d > R} d^-s <= R^(1-s) / (s - 1)
    let tail = 2.0 * (radius as f64).powf(1.0 - s) / (s - 1.0);
    (pairwise_sum(&terms), tail)
}

/// `sum_y prod_i C(x_i, y)` (exact part plus certified tail) against
/// `4^(alpha k) (1 + 2 zeta(alpha)) sum_phi prod_i C(x_phi(i), x_phi(i+1))`.
pub fn summed_chain_bound_check(xs: &[i64], alpha: f64) -> Result<Sides> {
    check_chain(xs, MAX_SUMMED_CHAIN, alpha)?;
    let k = xs.len();
    let (body, tail) = summed_chain(xs, alpha, CHAIN_RADIUS);
    let terms: Vec<f64> = permutations(k)
        .iter()
        .map(|phi| path_weight(xs, phi, alpha))
        .collect();
    let rhs = 4f64.powf(alpha * k as f64) * (1.0 + 2.0 * zeta(alpha)?) * pairwise_sum(&terms);
    Ok(Sides {
        lhs: body + tail,
        rhs,
    })
}

/// `sum_{T on A} prod_{edges} |a - b|^(-alpha)` over labeled trees on the
/// distinct sites of `A`.
pub fn site_tree_sum(a: &SiteSet, alpha: f64) -> Result<f64> {
    let n = a.len();
    if n == 0 {
        return Err(Error::Empty("site set".into()));
    }
    if n > MAX_TREE_SITES {
        return Err(Error::infeasible("site tree sum", n, MAX_TREE_SITES));
    }
    let sites = a.as_slice();
    let terms: Vec<f64> = labeled_trees(n)?
        .map(|t| tree_weight(&t, sites, alpha))
        .collect();
    Ok(pairwise_sum(&terms))
}

fn tree_weight(t: &LabeledTree, sites: &[i64], alpha: f64) -> f64 {
    t.edges()
        .iter()
        .map(|&(p, q)| kernel(sites[p], sites[q], alpha))
        .product()
}

/// One step of contracting a tree of sites: for `T` on `m + 1` vertices
/// with leaves among the `m` fixed sites, `w(x, T) = sum_y prod C` against
/// `8^(alpha deg) (1 + 2 zeta(alpha)) sum_{T' on m} w(x, T')`.
pub fn contracting_step_check(xs: &[i64], t: &LabeledTree, alpha: f64) -> Result<Sides> {
    let m = xs.len();
    if t.n() != m + 1 || m < 2 {
        return Err(Error::param("tree", "needs m + 1 vertices with m >= 2"));
    }
    if t.leaves().iter().any(|&v| v >= m) {
        return Err(Error::param("tree", "the free vertex must not be a leaf"));
    }
    let nb = t.neighbors(m);
    let fixed_part: f64 = t
        .edges()
        .iter()
        .filter(|&&(p, q)| p != m && q != m)
        .map(|&(p, q)| kernel(xs[p], xs[q], alpha))
        .product();
    let star: Vec<i64> = nb.iter().map(|&v| xs[v]).collect();
    let (body, tail) = summed_chain(&star, alpha, CHAIN_RADIUS);
    let lhs = fixed_part * (body + tail);
    let trees: Vec<f64> = labeled_trees(m)?
        .map(|t2| {
            t2.edges()
                .iter()
                .map(|&(p, q)| kernel(xs[p], xs[q], alpha))
                .product()
        })
        .collect();
    let rhs = 8f64.powf(alpha * nb.len() as f64) * (1.0 + 2.0 * zeta(alpha)?) * pairwise_sum(&trees);
    Ok(Sides { lhs, rhs })
}

/// Random instance of a chain inequality.
#[derive(Clone, Debug, Serialize)]
pub struct ChainInstance {
    pub xs: Vec<i64>,
    pub y: Option<i64>,
    pub alpha: f64,
    pub sides: Sides,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainSweep {
    pub seed: u64,
    pub instances: usize,
    pub violations: usize,
    pub max_ratio: f64,
    /// Violating instances, capped at ten.
    pub failures: Vec<ChainInstance>,
}

fn random_sites(rng: &mut ChaCha8Rng, k: usize) -> Vec<i64> {
    // small windows force coincident sites
    let w: i64 = if rng.random_bool(0.5) { 4 } else { 40 };
    (0..k).map(|_| rng.random_range(-w..=w)).collect()
}

fn sweep(
    instances: usize,
    seed: u64,
    make: impl Fn(&mut ChaCha8Rng) -> Result<ChainInstance> + Sync,
) -> Result<ChainSweep> {
    let all: Vec<ChainInstance> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            make(&mut rng)
        })
        .collect::<Result<_>>()?;
    let bad: Vec<ChainInstance> = all.iter().filter(|c| !c.sides.holds()).cloned().collect();
    Ok(ChainSweep {
        seed,
        instances,
        violations: bad.len(),
        max_ratio: all.iter().map(|c| c.sides.ratio()).fold(0.0, f64::max),
        failures: bad.into_iter().take(10).collect(),
    })
}

/// Random tuples of length 2..=5 and random `alpha` in `(1, 2]`.
pub fn chain_bound_sweep(instances: usize, seed: u64) -> Result<ChainSweep> {
    sweep(instances, seed, |rng| {
        let k = rng.random_range(2..=MAX_CHAIN);
        let alpha = 2.0 - rng.random_range(0.0..0.99);
        let mut xs = random_sites(rng, k + 1);
        let y = xs.pop().expect("k + 1 sites");
        let sides = chain_bound_check(&xs, y, alpha)?;
        Ok(ChainInstance {
            xs,
            y: Some(y),
            alpha,
            sides,
        })
    })
}

/// Random tuples of length 2..=4 and random `alpha` in `(1, 2]`.
pub fn summed_chain_bound_sweep(instances: usize, seed: u64) -> Result<ChainSweep> {
    sweep(instances, seed, |rng| {
        let k = rng.random_range(2..=MAX_SUMMED_CHAIN);
        let alpha = 2.0 - rng.random_range(0.0..0.99);
        let xs = random_sites(rng, k);
        let sides = summed_chain_bound_check(&xs, alpha)?;
        Ok(ChainInstance {
            xs,
            y: None,
            alpha,
            sides,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_values() {
        assert_eq!(kernel(0, 0, 1.5), 1.0);
        assert_eq!(kernel(0, 2, 2.0), 0.25);
        assert!((kernel(0, 3, 1.5) - 0.19245008972987526).abs() < 1e-15);
        assert_eq!(kernel(-4, 3, 1.7), kernel(3, -4, 1.7));
    }

    #[test]
    fn chain_hand_values() {
        let s = chain_bound_check(&[0, 2], 1, 2.0).unwrap();
        assert_eq!(s.lhs, 1.0);
        assert!((s.rhs - 128.0).abs() < 1e-12);
        let s = chain_bound_check(&[5, 5, 5], 5, 1.3).unwrap();
        assert_eq!(s.lhs, 1.0);
        assert!(s.rhs >= 4f64.powf(3.9) * 6.0 * (1.0 - 1e-15));
        assert!(chain_bound_check(&[1], 0, 2.0).is_err());
        assert!(chain_bound_check(&[0; 6], 0, 2.0).is_err());
    }

    #[test]
    fn summed_chain_closed_forms() {
        // sum_y C(0,y)^2 = 1 + 2 zeta(4)
        let (body, tail) = summed_chain(&[0, 0], 2.0, CHAIN_RADIUS);
        let want = 1.0 + 2.0 * zeta(4.0).unwrap();
        assert!(body <= want && want <= body + tail);
        let s = summed_chain_bound_check(&[0, 0], 2.0).unwrap();
        let rhs = 256.0 * (1.0 + 2.0 * zeta(2.0).unwrap()) * 2.0;
        assert!((s.rhs - rhs).abs() < 1e-9 * rhs);
        assert!(s.holds());
        // three identical sites: 1 + 2 zeta(3 alpha)
        let (body, tail) = summed_chain(&[7, 7, 7], 1.5, CHAIN_RADIUS);
        let want = 1.0 + 2.0 * zeta(4.5).unwrap();
        assert!(body <= want && want <= body + tail);
        let s = summed_chain_bound_check(&[7, 7, 7], 1.5).unwrap();
        let rhs = 4f64.powf(4.5) * (1.0 + 2.0 * zeta(1.5).unwrap()) * 6.0;
        assert!((s.rhs - rhs).abs() < 1e-9 * rhs);
    }

    #[test]
    fn site_tree_sum_examples() {
        assert_eq!(site_tree_sum(&SiteSet::new(vec![0, 1]), 2.0).unwrap(), 1.0);
        let s = site_tree_sum(&SiteSet::new(vec![0, 1, 3]), 2.0).unwrap();
        assert!((s - (0.25 + 1.0 / 9.0 + 1.0 / 36.0)).abs() < 1e-15);
        let s = site_tree_sum(&SiteSet::new(vec![0, 2, 4]), 2.0).unwrap();
        assert!((s - (1.0 / 16.0 + 2.0 / 64.0)).abs() < 1e-15);
        assert_eq!(site_tree_sum(&SiteSet::new(vec![9]), 2.0).unwrap(), 1.0);
        assert!(site_tree_sum(&SiteSet::interval(0, 8), 2.0).is_err());
    }

    #[test]
    fn contracting_step_on_star() {
        let t = LabeledTree::new(4, vec![(0, 3), (1, 3), (2, 3)]).unwrap();
        let s = contracting_step_check(&[0, 3, 7], &t, 1.5).unwrap();
        assert!(s.holds());
        let leafy = LabeledTree::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert!(contracting_step_check(&[0, 1], &leafy, 1.5).is_err());
    }

    #[test]
    fn small_sweeps() {
        let a = chain_bound_sweep(40, 3).unwrap();
        let b = chain_bound_sweep(40, 3).unwrap();
        assert_eq!(a.max_ratio, b.max_ratio);
        assert_eq!(a.violations, 0);
        assert_eq!(summed_chain_bound_sweep(20, 4).unwrap().violations, 0);
    }
}
