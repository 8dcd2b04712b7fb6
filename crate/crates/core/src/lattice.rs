use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Finite subset of `Z`, kept sorted and duplicate-free.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SiteSet {
    sites: Vec<i64>,
}

impl SiteSet {
    pub fn new(mut sites: Vec<i64>) -> Self {
        sites.sort_unstable();
        sites.dedup();
        SiteSet { sites }
    }

    /// Integer interval `[a, b]`; empty when `b < a`.
    pub fn interval(a: i64, b: i64) -> Self {
        SiteSet {
            sites: (a..=b).collect(),
        }
    }

    pub fn empty() -> Self {
        SiteSet::default()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.sites.iter().copied()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.sites.binary_search(&x).is_ok()
    }

    pub fn min(&self) -> Option<i64> {
        self.sites.first().copied()
    }

    pub fn max(&self) -> Option<i64> {
        self.sites.last().copied()
    }

    /// True when the set is a run of consecutive integers.
    pub fn is_interval(&self) -> bool {
        match (self.min(), self.max()) {
            (Some(a), Some(b)) => (b - a + 1) as usize == self.len(),
            _ => true,
        }
    }

    pub fn is_subset(&self, other: &SiteSet) -> bool {
        let mut j = 0;
        for &x in &self.sites {
            while j < other.sites.len() && other.sites[j] < x {
                j += 1;
            }
            if j == other.sites.len() || other.sites[j] != x {
                return false;
            }
        }
        true
    }

    pub fn intersects(&self, other: &SiteSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.sites.len() && j < other.sites.len() {
            match self.sites[i].cmp(&other.sites[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    fn merge_with(&self, other: &SiteSet, keep: impl Fn(bool, bool) -> bool) -> SiteSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.sites, &other.sites);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let (x, ina, inb) = if j == b.len() || (i < a.len() && a[i] < b[j]) {
                i += 1;
                (a[i - 1], true, false)
            } else if i == a.len() || b[j] < a[i] {
                j += 1;
                (b[j - 1], false, true)
            } else {
                i += 1;
                j += 1;
                (a[i - 1], true, true)
            };
            if keep(ina, inb) {
                out.push(x);
            }
        }
        SiteSet { sites: out }
    }

    pub fn union(&self, other: &SiteSet) -> SiteSet {
        self.merge_with(other, |a, b| a || b)
    }

    pub fn difference(&self, other: &SiteSet) -> SiteSet {
        self.merge_with(other, |a, b| a && !b)
    }

    pub fn sym_diff(&self, other: &SiteSet) -> SiteSet {
        self.merge_with(other, |a, b| a != b)
    }

    /// Minimal distance `min |x - y|`; `None` if either set is empty.
    pub fn dist(&self, other: &SiteSet) -> Option<i64> {
        if self.is_empty() || other.is_empty() {
            return None;
        }
        let (a, b) = (&self.sites, &other.sites);
        let (mut i, mut j) = (0, 0);
        let mut best = i64::MAX;
        while i < a.len() && j < b.len() {
            best = best.min((a[i] - b[j]).abs());
            if a[i] < b[j] {
                i += 1;
            } else {
                j += 1;
            }
        }
        Some(best)
    }

    pub fn shifted(&self, k: i64) -> SiteSet {
        SiteSet {
            sites: self.sites.iter().map(|x| x + k).collect(),
        }
    }
}

impl fmt::Debug for SiteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.sites.iter()).finish()
    }
}

impl FromIterator<i64> for SiteSet {
    fn from_iter<I: IntoIterator<Item = i64>>(iter: I) -> Self {
        SiteSet::new(iter.into_iter().collect())
    }
}

/// Spin-flip configuration: strictly increasing dual bonds of even count.
///
/// A bond between `x` and `x + 1` is stored as the odd integer `2x + 1`,
/// i.e. twice its half-integer position.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct SpinFlipConfig {
    bonds: Vec<i64>,
}

impl TryFrom<Vec<i64>> for SpinFlipConfig {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        SpinFlipConfig::from_doubled(v)
    }
}

impl From<SpinFlipConfig> for Vec<i64> {
    fn from(c: SpinFlipConfig) -> Vec<i64> {
        c.bonds
    }
}

impl SpinFlipConfig {
    /// Build from doubled positions (odd integers).
    pub fn from_doubled(bonds: Vec<i64>) -> Result<Self> {
        if bonds.len() % 2 != 0 {
            return Err(Error::InvalidConfig(format!(
                "odd number of spin flips ({})",
                bonds.len()
            )));
        }
        if let Some(b) = bonds.iter().find(|b| b.rem_euclid(2) != 1) {
            return Err(Error::InvalidConfig(format!(
                "doubled bond position {b} is not odd"
            )));
        }
        if bonds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "bonds must be strictly increasing".into(),
            ));
        }
        Ok(SpinFlipConfig { bonds })
    }

    /// Build from half-integer positions such as `-0.5, 0.5`.
    pub fn from_halves(pos: &[f64]) -> Result<Self> {
        let mut v = Vec::with_capacity(pos.len());
        for &p in pos {
            let d = 2.0 * p;
            if d.fract() != 0.0 || (d as i64).rem_euclid(2) != 1 {
                return Err(Error::InvalidConfig(format!("{p} is not a dual site")));
            }
            v.push(d as i64);
        }
        SpinFlipConfig::from_doubled(v)
    }

    /// Configuration whose minus-interior is `interior`.
    pub fn from_interior(interior: &SiteSet) -> Self {
        let mut bonds = Vec::new();
        let s = interior.as_slice();
        let mut i = 0;
        while i < s.len() {
            let start = s[i];
            while i + 1 < s.len() && s[i + 1] == s[i] + 1 {
                i += 1;
            }
            bonds.push(2 * start - 1);
            bonds.push(2 * s[i] + 1);
            i += 1;
        }
        SpinFlipConfig { bonds }
    }

    pub fn empty() -> Self {
        SpinFlipConfig::default()
    }

    pub fn doubled(&self) -> &[i64] {
        &self.bonds
    }

    pub fn halves(&self) -> Vec<f64> {
        self.bonds.iter().map(|&b| b as f64 / 2.0).collect()
    }

    pub fn len(&self) -> usize {
        self.bonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bonds.is_empty()
    }

    /// `max bond - min bond` on the dual lattice (an integer).
    pub fn diam(&self) -> i64 {
        match (self.bonds.first(), self.bonds.last()) {
            (Some(a), Some(b)) => (b - a) / 2,
            _ => 0,
        }
    }

    /// Minimal distance between bonds of the two configurations.
    pub fn dist(&self, other: &SpinFlipConfig) -> Result<i64> {
        if self.is_empty() || other.is_empty() {
            return Err(Error::Empty("distance between flip sets".into()));
        }
        let (a, b) = (&self.bonds, &other.bonds);
        let (mut i, mut j) = (0, 0);
        let mut best = i64::MAX;
        while i < a.len() && j < b.len() {
            best = best.min((a[i] - b[j]).abs());
            if a[i] < b[j] {
                i += 1;
            } else {
                j += 1;
            }
        }
        Ok(best / 2)
    }

    pub fn is_disjoint(&self, other: &SpinFlipConfig) -> bool {
        let (a, b) = (&self.bonds, &other.bonds);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// Symmetric difference of bond sets; for disjoint inputs this is the
    /// disjoint union and its minus-interior is the symmetric difference of
    /// the two interiors.
    pub fn xor(&self, other: &SpinFlipConfig) -> SpinFlipConfig {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.bonds, &other.bonds);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i] < b[j]) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j] < a[i] {
                out.push(b[j]);
                j += 1;
            } else {
                i += 1;
                j += 1;
            }
        }
        SpinFlipConfig { bonds: out }
    }

    /// Sub-configuration made of the given bond indices (must be even in number).
    pub fn select(&self, idx: &[usize]) -> Result<SpinFlipConfig> {
        let mut v: Vec<i64> = idx.iter().map(|&i| self.bonds[i]).collect();
        v.sort_unstable();
        SpinFlipConfig::from_doubled(v)
    }

    pub fn shifted(&self, k: i64) -> SpinFlipConfig {
        SpinFlipConfig {
            bonds: self.bonds.iter().map(|b| b + 2 * k).collect(),
        }
    }
}

impl fmt::Debug for SpinFlipConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.halves()).finish()
    }
}

/// Spin flips of `sigma`, extended by `+1` outside its domain.
pub fn boundary(sigma: &BTreeMap<i64, i8>) -> SpinFlipConfig {
    let minus: SiteSet = sigma
        .iter()
        .filter(|(_, &s)| s < 0)
        .map(|(&x, _)| x)
        .collect();
    SpinFlipConfig::from_interior(&minus)
}

/// Sites where the plus-boundary configuration of `cfg` equals `-1`.
pub fn minus_interior(cfg: &SpinFlipConfig) -> SiteSet {
    let mut sites = Vec::new();
    for pair in cfg.bonds.chunks(2) {
        let (lo, hi) = ((pair[0] + 1) / 2, (pair[1] - 1) / 2);
        sites.extend(lo..=hi);
    }
    SiteSet { sites }
}

/// Spin values of `cfg` on `lambda`.
pub fn spins_on(cfg: &SpinFlipConfig, lambda: &SiteSet) -> BTreeMap<i64, i8> {
    let minus = minus_interior(cfg);
    lambda
        .iter()
        .map(|x| (x, if minus.contains(x) { -1 } else { 1 }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg(h: &[f64]) -> SpinFlipConfig {
        SpinFlipConfig::from_halves(h).unwrap()
    }

    #[test]
    fn boundary_examples() {
        let lam = SiteSet::interval(0, 4);
        let plus: BTreeMap<i64, i8> = lam.iter().map(|x| (x, 1)).collect();
        assert!(boundary(&plus).is_empty());

        let mut s = plus.clone();
        s.insert(0, -1);
        assert_eq!(boundary(&s), cfg(&[-0.5, 0.5]));

        let mut s = plus;
        s.insert(0, -1);
        s.insert(1, -1);
        s.insert(3, -1);
        assert_eq!(boundary(&s), cfg(&[-0.5, 1.5, 2.5, 3.5]));
    }

    #[test]
    fn minus_interior_examples() {
        assert!(minus_interior(&SpinFlipConfig::empty()).is_empty());
        assert_eq!(minus_interior(&cfg(&[-0.5, 0.5])).as_slice(), &[0]);
        assert_eq!(
            minus_interior(&cfg(&[-0.5, 1.5, 2.5, 3.5])).as_slice(),
            &[0, 1, 3]
        );
    }

    #[test]
    fn rejects_malformed_configs() {
        assert!(SpinFlipConfig::from_halves(&[0.5]).is_err());
        assert!(SpinFlipConfig::from_halves(&[0.5, 0.0]).is_err());
        assert!(SpinFlipConfig::from_halves(&[1.5, 0.5]).is_err());
        assert!(SpinFlipConfig::from_doubled(vec![1, 1]).is_err());
    }

    #[test]
    fn dist_and_diam() {
        let a = cfg(&[-0.5, 0.5]);
        let b = cfg(&[2.5, 3.5]);
        assert_eq!(a.dist(&b).unwrap(), 2);
        assert_eq!(a.dist(&a).unwrap(), 0);
        assert_eq!(a.dist(&cfg(&[49.5, 50.5])).unwrap(), 49);
        assert_eq!(a.dist(&cfg(&[99.0 / 2.0, 101.0 / 2.0])).unwrap(), 49);
        assert_eq!(cfg(&[-0.5, 2.5, 5.5, 7.5]).diam(), 8);
        assert!(a.dist(&SpinFlipConfig::empty()).is_err());
    }

    #[test]
    fn round_trip_all_configs_on_twelve_sites() {
        let lam = SiteSet::interval(0, 11);
        for mask in 0u32..(1 << 12) {
            let sigma: BTreeMap<i64, i8> = lam
                .iter()
                .map(|x| (x, if mask >> x & 1 == 1 { -1 } else { 1 }))
                .collect();
            let c = boundary(&sigma);
            assert_eq!(c.len() % 2, 0);
            assert_eq!(spins_on(&c, &lam), sigma);
        }
    }

    #[test]
    fn set_algebra() {
        let a = SiteSet::new(vec![3, 1, 2, 2]);
        let b = SiteSet::new(vec![2, 5]);
        assert_eq!(a.as_slice(), &[1, 2, 3]);
        assert_eq!(a.union(&b).as_slice(), &[1, 2, 3, 5]);
        assert_eq!(a.difference(&b).as_slice(), &[1, 3]);
        assert_eq!(a.sym_diff(&b).as_slice(), &[1, 3, 5]);
        assert!(a.intersects(&b));
        assert!(!a.is_subset(&b));
        assert!(SiteSet::new(vec![1, 3]).is_subset(&a));
        assert_eq!(a.dist(&SiteSet::new(vec![7])), Some(4));
        assert!(a.is_interval());
        assert!(!b.is_interval());
    }

    proptest! {
        #[test]
        fn xor_of_disjoint_flips_is_sym_diff_of_interiors(
            xs in proptest::collection::btree_set(-20i64..20, 0..8),
            ys in proptest::collection::btree_set(-20i64..20, 0..8),
        ) {
            let a = SpinFlipConfig::from_interior(&xs.into_iter().collect());
            let b = SpinFlipConfig::from_interior(&ys.into_iter().collect());
            let joint = a.xor(&b);
            prop_assert_eq!(
                minus_interior(&joint),
                minus_interior(&a).sym_diff(&minus_interior(&b))
            );
        }

        #[test]
        fn interior_round_trip(xs in proptest::collection::btree_set(-30i64..30, 0..12)) {
            let s: SiteSet = xs.into_iter().collect();
            prop_assert_eq!(minus_interior(&SpinFlipConfig::from_interior(&s)), s);
        }
    }
}
