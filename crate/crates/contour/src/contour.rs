use std::cmp::Ordering;

use serde::Serialize;

use polygas_core::{
    hamiltonian, minus_interior, Error, ModelParams, Result, SiteSet, SpinFlipConfig,
};

use crate::partition::is_irreducible_bonds;

/// An irreducible spin-flip set with cached interior, diameter and energy.
#[derive(Clone, Debug, Serialize)]
pub struct Contour {
    body: SpinFlipConfig,
    interior: SiteSet,
    diam: i64,
    energy: f64,
}

impl Contour {
    /// Validates irreducibility under `p`.
    pub fn new(body: SpinFlipConfig, p: &ModelParams) -> Result<Self> {
        if body.is_empty() {
            return Err(Error::Empty("contour body".into()));
        }
        if !is_irreducible_bonds(body.doubled(), p) {
            return Err(Error::InvalidConfig(format!(
                "{body:?} splits into compatible parts"
            )));
        }
        Ok(Contour::from_parts(body, p))
    }

    /// Caller guarantees irreducibility.
    pub(crate) fn from_parts(body: SpinFlipConfig, p: &ModelParams) -> Self {
        let interior = minus_interior(&body);
        let energy = polygas_core::interior_energy(&interior, p);
        Contour {
            diam: body.diam(),
            body,
            interior,
            energy,
        }
    }

    pub fn body(&self) -> &SpinFlipConfig {
        &self.body
    }

    pub fn interior(&self) -> &SiteSet {
        &self.interior
    }

    pub fn diam(&self) -> i64 {
        self.diam
    }

    /// `H(body)` in double precision.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn shifted(&self, k: i64) -> Contour {
        Contour {
            body: self.body.shifted(k),
            interior: self.interior.shifted(k),
            diam: self.diam,
            energy: self.energy,
        }
    }

    /// Recomputes the energy in another scalar type.
    pub fn energy_in<R: polygas_core::Real>(&self, p: &ModelParams) -> R {
        hamiltonian(&self.body, p)
    }
}

impl PartialEq for Contour {
    fn eq(&self, other: &Self) -> bool {
        self.body == other.body
    }
}

impl Eq for Contour {}

impl PartialOrd for Contour {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Leftmost bond first, then the rest of the body lexicographically.
impl Ord for Contour {
    fn cmp(&self, other: &Self) -> Ordering {
        self.body.cmp(&other.body)
    }
}

impl std::hash::Hash for Contour {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.body.hash(state)
    }
}

/// Minimal distance between bonds, in lattice units.
pub fn dist_dual(a: &SpinFlipConfig, b: &SpinFlipConfig) -> Result<i64> {
    a.dist(b)
}

/// `dist > M * min(diam)^a`; a contour is never compatible with itself.
pub fn is_compatible(g1: &Contour, g2: &Contour, p: &ModelParams) -> Result<bool> {
    if g1 == g2 {
        return Ok(false);
    }
    if !g1.body.is_disjoint(&g2.body) {
        return Err(Error::Overlap(format!(
            "{:?} and {:?} share bonds",
            g1.body, g2.body
        )));
    }
    let d = g1.body.dist(&g2.body)?;
    Ok(d as f64 > p.separation(g1.diam.min(g2.diam)))
}

/// Compatible with disjoint minus-interiors.
pub fn is_positively_compatible(g1: &Contour, g2: &Contour, p: &ModelParams) -> Result<bool> {
    Ok(is_compatible(g1, g2, p)? && !g1.interior.intersects(&g2.interior))
}

/// `I_-(inner) ⊆ I_-(outer)` with `inner != outer`.
pub fn is_inside(inner: &Contour, outer: &Contour) -> bool {
    inner != outer && inner.interior.is_subset(&outer.interior)
}

/// How two compatible contours sit relative to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Incompatible,
    /// Disjoint interiors.
    Positive,
    /// First lies inside the second.
    Inside,
    /// Second lies inside the first.
    Contains,
}

impl Relation {
    pub fn of(g1: &Contour, g2: &Contour, p: &ModelParams) -> Result<Relation> {
        if !is_compatible(g1, g2, p)? {
            return Ok(Relation::Incompatible);
        }
        let pos = !g1.interior.intersects(&g2.interior);
        let a = is_inside(g1, g2);
        let b = is_inside(g2, g1);
        Ok(match (pos, a, b) {
            (true, false, false) => Relation::Positive,
            (false, true, false) => Relation::Inside,
            (false, false, true) => Relation::Contains,
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "compatible pair {:?}, {:?} fits no relation",
                    g1.body, g2.body
                )))
            }
        })
    }
}
