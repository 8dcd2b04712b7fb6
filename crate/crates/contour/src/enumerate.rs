use rayon::prelude::*;
use serde::Serialize;

use polygas_core::{
    interior_energy, minus_interior, Error, ModelParams, Result, SpinFlipConfig,
};

use crate::contour::Contour;
use crate::partition::is_irreducible_bonds;

/// Largest diameter accepted by the exhaustive enumerators.
pub const MAX_ENUM_DIAM: i64 = 22;

fn check_diam(max_diam: i64) -> Result<()> {
    if max_diam < 1 {
        return Err(Error::param("max_diam", "must be at least 1"));
    }
    if max_diam > MAX_ENUM_DIAM {
        return Err(Error::infeasible(
            "contour diameter",
            max_diam as usize,
            MAX_ENUM_DIAM as usize,
        ));
    }
    Ok(())
}

/// Bonds from a left end `l`, a width `d` and a mask over the `d - 1`
/// dual positions strictly between the ends (all doubled).
fn bonds_from(l: i64, d: i64, mask: u32) -> Vec<i64> {
    let mut b = Vec::with_capacity(mask.count_ones() as usize + 2);
    b.push(l);
    for k in 1..d {
        if mask >> (k - 1) & 1 == 1 {
            b.push(l + 2 * k);
        }
    }
    b.push(l + 2 * d);
    b
}

/// Surrogate cover size `1 + ceil(log2 diam)`.
pub fn cover_size(g: &Contour) -> u32 {
    cover_size_of_diam(g.diam())
}

pub(crate) fn cover_size_of_diam(d: i64) -> u32 {
    debug_assert!(d >= 1);
    if d == 1 {
        1
    } else {
        1 + (64 - ((d - 1) as u64).leading_zeros())
    }
}

/// Every contour with minus-interior inside the volume and diameter at most
/// `max_diam`, canonically sorted.
pub fn enumerate_contours(p: &ModelParams, max_diam: i64) -> Result<Vec<Contour>> {
    check_diam(max_diam)?;
    let lam = &p.lambda;
    let (lo, hi) = (lam.min().unwrap(), lam.max().unwrap());
    // dual positions lo - 1/2 ..= hi + 1/2
    let lefts: Vec<i64> = (lo..=hi).map(|x| 2 * x - 1).collect();
    let right_end = 2 * hi + 1;
    let mut out: Vec<Contour> = lefts
        .par_iter()
        .flat_map_iter(|&l| {
            let mut v = Vec::new();
            for d in 1..=max_diam {
                if l + 2 * d > right_end {
                    break;
                }
                for mask in 0u32..(1 << (d - 1)) {
                    if mask.count_ones() % 2 == 1 {
                        continue;
                    }
                    let b = bonds_from(l, d, mask);
                    if !is_irreducible_bonds(&b, p) {
                        continue;
                    }
                    let body = SpinFlipConfig::from_doubled(b).expect("sorted odd bonds");
                    if !lam.is_interval() && !minus_interior(&body).is_subset(lam) {
                        continue;
                    }
                    v.push(Contour::from_parts(body, p));
                }
            }
            v
        })
        .collect();
    out.sort();
    Ok(out)
}

/// One translation class of contours, represented with its leftmost bond
/// at `-1/2`.
#[derive(Clone, Debug, Serialize)]
pub struct ContourClass {
    pub diam: i64,
    /// Inner bonds as a mask over the positions between the two ends.
    pub mask: u32,
    pub interior_len: usize,
    pub energy: f64,
    pub cover: u32,
}

impl ContourClass {
    pub fn body(&self) -> SpinFlipConfig {
        SpinFlipConfig::from_doubled(bonds_from(-1, self.diam, self.mask)).expect("valid class")
    }
}

/// All translation classes with diameter at most `max_diam`, ordered by
/// diameter and mask. Energies do not depend on the volume.
pub fn class_representatives(p: &ModelParams, max_diam: i64) -> Result<Vec<ContourClass>> {
    check_diam(max_diam)?;
    let out = (1..=max_diam)
        .into_par_iter()
        .flat_map_iter(|d| {
            let mut v = Vec::new();
            for mask in 0u32..(1 << (d - 1)) {
                if mask.count_ones() % 2 == 1 {
                    continue;
                }
                let b = bonds_from(-1, d, mask);
                if !is_irreducible_bonds(&b, p) {
                    continue;
                }
                let body = SpinFlipConfig::from_doubled(b).expect("sorted odd bonds");
                let interior = minus_interior(&body);
                v.push(ContourClass {
                    diam: d,
                    mask,
                    interior_len: interior.len(),
                    energy: interior_energy(&interior, p),
                    cover: cover_size_of_diam(d),
                });
            }
            v
        })
        .collect();
    Ok(out)
}

/// Contours with `0` in the minus-interior and diameter at most `max_diam`,
/// listed one by one (no translation classes).
pub fn contours_containing_origin(p: &ModelParams, max_diam: i64) -> Result<Vec<Contour>> {
    check_diam(max_diam)?;
    let mut out: Vec<Contour> = (1..=max_diam)
        .into_par_iter()
        .flat_map_iter(|d| {
            let mut v = Vec::new();
            // leftmost bond at or left of -1/2, rightmost at or right of 1/2
            for l in (-2 * d + 1..=-1).step_by(2) {
                for mask in 0u32..(1 << (d - 1)) {
                    if mask.count_ones() % 2 == 1 {
                        continue;
                    }
                    let b = bonds_from(l, d, mask);
                    let body = SpinFlipConfig::from_doubled(b).expect("sorted odd bonds");
                    let interior = minus_interior(&body);
                    if !interior.contains(0) || !is_irreducible_bonds(body.doubled(), p) {
                        continue;
                    }
                    v.push(Contour::from_parts(body, p));
                }
            }
            v
        })
        .collect();
    out.sort();
    Ok(out)
}
