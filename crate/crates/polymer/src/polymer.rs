use serde::Serialize;

use polygas_contour::{is_compatible, is_inside, Contour};
use polygas_core::{minus_interior, Error, ModelParams, Result, SiteSet, SpinFlipConfig};

/// Nonempty set of pairwise positively compatible contours.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Polymer {
    contours: Vec<Contour>,
}

/// Compatibility that treats shared bonds and equality as incompatible.
pub fn contours_compatible(a: &Contour, b: &Contour, p: &ModelParams) -> bool {
    a != b && a.body().is_disjoint(b.body()) && is_compatible(a, b, p).unwrap_or(false)
}

impl Polymer {
    pub fn new(mut contours: Vec<Contour>, p: &ModelParams) -> Result<Self> {
        if contours.is_empty() {
            return Err(Error::Empty("polymer without contours".into()));
        }
        contours.sort();
        for (i, a) in contours.iter().enumerate() {
            for b in &contours[i + 1..] {
                if !contours_compatible(a, b, p) || a.interior().intersects(b.interior()) {
                    return Err(Error::InvalidConfig(format!(
                        "{:?} and {:?} are not positively compatible",
                        a.body(),
                        b.body()
                    )));
                }
            }
        }
        Ok(Polymer { contours })
    }

    /// Caller guarantees pairwise positive compatibility.
    pub(crate) fn single_unchecked(mut contours: Vec<Contour>) -> Self {
        contours.sort();
        Polymer { contours }
    }

    pub fn single(c: Contour) -> Self {
        Polymer { contours: vec![c] }
    }

    pub fn contours(&self) -> &[Contour] {
        &self.contours
    }

    pub fn len(&self) -> usize {
        self.contours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contours.is_empty()
    }

    pub fn body(&self) -> SpinFlipConfig {
        self.contours
            .iter()
            .fold(SpinFlipConfig::empty(), |acc, c| acc.xor(c.body()))
    }

    /// Disjoint union of the contour interiors.
    pub fn interior(&self) -> SiteSet {
        minus_interior(&self.body())
    }

    pub fn energy_sum(&self) -> f64 {
        self.contours.iter().map(|c| c.energy()).sum()
    }

    /// Sub-polymer on the given member indices.
    pub fn select(&self, idx: &[usize]) -> Polymer {
        let mut contours: Vec<Contour> = idx.iter().map(|&i| self.contours[i].clone()).collect();
        contours.sort();
        Polymer { contours }
    }

    pub fn key(&self) -> Vec<SpinFlipConfig> {
        self.contours.iter().map(|c| c.body().clone()).collect()
    }
}

/// Compatibility of distinct polymers: all cross pairs compatible and
/// either every cross pair positively compatible, or one polymer lies
/// entirely inside a single contour of the other.
pub fn polymer_compatible(p1: &Polymer, p2: &Polymer, p: &ModelParams) -> bool {
    if p1 == p2 {
        return false;
    }
    for a in &p1.contours {
        for b in &p2.contours {
            if !contours_compatible(a, b, p) {
                return false;
            }
        }
    }
    let positive = p1.contours.iter().all(|a| {
        p2.contours
            .iter()
            .all(|b| !a.interior().intersects(b.interior()))
    });
    positive
        || p1
            .contours
            .iter()
            .any(|a| p2.contours.iter().all(|b| is_inside(b, a)))
        || p2
            .contours
            .iter()
            .any(|b| p1.contours.iter().all(|a| is_inside(a, b)))
}

/// A family of polymers, canonically sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PolymerSet {
    pub polymers: Vec<Polymer>,
    /// Pairwise compatible.
    pub compatible: bool,
}

impl PolymerSet {
    pub fn new(mut polymers: Vec<Polymer>, p: &ModelParams) -> Self {
        polymers.sort();
        let compatible = polymers.iter().enumerate().all(|(i, a)| {
            polymers[i + 1..]
                .iter()
                .all(|b| polymer_compatible(a, b, p))
        });
        PolymerSet {
            polymers,
            compatible,
        }
    }

    pub fn empty() -> Self {
        PolymerSet {
            polymers: Vec::new(),
            compatible: true,
        }
    }

    pub fn len(&self) -> usize {
        self.polymers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polymers.is_empty()
    }

    /// All contours of all polymers.
    pub fn contours(&self) -> Vec<Contour> {
        let mut v: Vec<Contour> = self
            .polymers
            .iter()
            .flat_map(|q| q.contours.iter().cloned())
            .collect();
        v.sort();
        v
    }
}
