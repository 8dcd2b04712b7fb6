use crate::lattice::{minus_interior, SiteSet, SpinFlipConfig};
use crate::sum::pairwise_sum;
use crate::{Error, ModelParams, Real, Result};

/// `J(r) = r^(-alpha)` for `r >= 1`.
pub fn coupling(r: i64, alpha: f64) -> f64 {
    debug_assert!(r != 0);
    (r.unsigned_abs() as f64).powf(-alpha)
}

/// Energy of the configuration whose minus sites are `sites`.
///
/// Uses `H = sum_x [4 zeta - sum_{y in I, y != x} 2 J(x - y)]`, which is the
/// full interaction with the plus sea written without any cutoff.
pub fn interior_energy<R: Real>(sites: &SiteSet, p: &ModelParams) -> R {
    let s = sites.as_slice();
    if s.is_empty() {
        return R::zero();
    }
    let mut terms = Vec::with_capacity(s.len() * (s.len() + 1) / 2);
    let four_zeta = R::from_f64(4.0 * p.zeta_alpha());
    for (i, &x) in s.iter().enumerate() {
        terms.push(four_zeta.clone());
        for &y in &s[i + 1..] {
            terms.push(-R::from_f64(4.0 * coupling(y - x, p.alpha)));
        }
    }
    pairwise_sum(&terms)
}

/// `H(cfg)`; zero for the empty configuration.
pub fn hamiltonian<R: Real>(cfg: &SpinFlipConfig, p: &ModelParams) -> R {
    interior_energy(&minus_interior(cfg), p)
}

/// `E_h(cfg) = sum over minus sites of 2 h_x`.
pub fn field_energy<R: Real>(cfg: &SpinFlipConfig, p: &ModelParams) -> R {
    interior_field_energy(&minus_interior(cfg), p)
}

pub fn interior_field_energy<R: Real>(sites: &SiteSet, p: &ModelParams) -> R {
    if !p.has_field() {
        return R::zero();
    }
    let terms: Vec<R> = sites
        .iter()
        .filter_map(|x| p.field.get(&x).map(|h| R::from_f64(2.0 * h)))
        .collect();
    pairwise_sum(&terms)
}

/// `H + E_h`.
pub fn hamiltonian_h<R: Real>(cfg: &SpinFlipConfig, p: &ModelParams) -> R {
    let i = minus_interior(cfg);
    interior_energy::<R>(&i, p) + interior_field_energy(&i, p)
}

/// `sum_{x in a, y in b} 4 J(x - y)`, without validation. Callers guarantee
/// disjointness; an empty side gives zero.
pub fn phi<R: Real>(a: &SiteSet, b: &SiteSet, alpha: f64) -> R {
    let mut terms = Vec::with_capacity(a.len() * b.len());
    for x in a.iter() {
        for y in b.iter() {
            terms.push(R::from_f64(4.0 * coupling(x - y, alpha)));
        }
    }
    pairwise_sum(&terms)
}

/// [`phi`] with the disjoint, nonempty precondition enforced.
pub fn phi_checked(a: &SiteSet, b: &SiteSet, p: &ModelParams) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("phi needs two nonempty site sets".into()));
    }
    if a.intersects(b) {
        return Err(Error::Overlap(format!("{a:?} and {b:?} share sites")));
    }
    // sum in a canonical order so that phi(a, b) == phi(b, a) bit for bit
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    Ok(phi(lo, hi, p.alpha))
}
