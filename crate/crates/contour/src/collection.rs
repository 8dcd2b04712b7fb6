use serde::Serialize;

use polygas_core::{
    interior_energy, minus_interior, phi, Error, ModelParams, Real, Result, SiteSet,
    SpinFlipConfig,
};

use crate::contour::{is_compatible, is_inside, is_positively_compatible, Contour};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CollectionKind {
    /// Pairwise compatible.
    MPartition,
    /// Pairwise positively compatible.
    Positive,
    Unchecked,
}

/// A canonically sorted set of contours with disjoint bodies.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ContourCollection {
    contours: Vec<Contour>,
    kind: CollectionKind,
}

impl ContourCollection {
    pub(crate) fn new_unchecked(mut contours: Vec<Contour>, kind: CollectionKind) -> Self {
        contours.sort();
        ContourCollection { contours, kind }
    }

    /// Checks pairwise compatibility and tags the collection as an
    /// M-partition, or as positive when every pair is positively compatible.
    pub fn checked(contours: Vec<Contour>, p: &ModelParams) -> Result<Self> {
        let mut positive = true;
        for (i, a) in contours.iter().enumerate() {
            for b in &contours[i + 1..] {
                if !is_compatible(a, b, p)? {
                    return Err(Error::InvalidConfig(format!(
                        "{:?} and {:?} are not compatible",
                        a.body(),
                        b.body()
                    )));
                }
                positive &= !a.interior().intersects(b.interior());
            }
        }
        let kind = if positive {
            CollectionKind::Positive
        } else {
            CollectionKind::MPartition
        };
        Ok(ContourCollection::new_unchecked(contours, kind))
    }

    /// Requires pairwise positive compatibility.
    pub fn positive(contours: Vec<Contour>, p: &ModelParams) -> Result<Self> {
        for (i, a) in contours.iter().enumerate() {
            for b in &contours[i + 1..] {
                if !is_positively_compatible(a, b, p)? {
                    return Err(Error::InvalidConfig(format!(
                        "{:?} and {:?} are not positively compatible",
                        a.body(),
                        b.body()
                    )));
                }
            }
        }
        Ok(ContourCollection::new_unchecked(contours, CollectionKind::Positive))
    }

    pub fn empty() -> Self {
        ContourCollection {
            contours: Vec::new(),
            kind: CollectionKind::Positive,
        }
    }

    pub fn kind(&self) -> CollectionKind {
        self.kind
    }

    /// Positive collections are M-partitions too; this reports whether the
    /// stronger property holds regardless of the tag.
    pub fn is_positive(&self) -> bool {
        self.contours.iter().enumerate().all(|(i, a)| {
            self.contours[i + 1..]
                .iter()
                .all(|b| !a.interior().intersects(b.interior()))
        })
    }

    pub fn contours(&self) -> &[Contour] {
        &self.contours
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Contour> {
        self.contours.iter()
    }

    pub fn len(&self) -> usize {
        self.contours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contours.is_empty()
    }

    pub fn contains(&self, g: &Contour) -> bool {
        self.contours.binary_search(g).is_ok()
    }

    /// Union of the bodies.
    pub fn body(&self) -> SpinFlipConfig {
        self.contours
            .iter()
            .fold(SpinFlipConfig::empty(), |acc, c| acc.xor(c.body()))
    }

    pub fn without(&self, g: &Contour) -> ContourCollection {
        let contours = self.contours.iter().filter(|c| *c != g).cloned().collect();
        ContourCollection {
            contours,
            kind: self.kind,
        }
    }

    pub fn energy<R: Real>(&self, p: &ModelParams) -> R {
        interior_energy(&collection_interior(self), p)
    }
}

impl<'a> IntoIterator for &'a ContourCollection {
    type Item = &'a Contour;
    type IntoIter = std::slice::Iter<'a, Contour>;
    fn into_iter(self) -> Self::IntoIter {
        self.contours.iter()
    }
}

/// Minus-interior of the configuration carried by the whole collection.
pub fn collection_interior(g: &ContourCollection) -> SiteSet {
    minus_interior(&g.body())
}

/// Contours not strictly inside another member.
///
/// Members of an M-partition are pairwise compatible, so for any pair
/// either the interiors are disjoint or one contains the other.
pub fn external_contours(g: &ContourCollection) -> ContourCollection {
    let ext = g
        .contours
        .iter()
        .filter(|c| {
            g.contours
                .iter()
                .all(|o| o == *c || is_inside(o, c) || !o.interior().intersects(c.interior()))
        })
        .cloned()
        .collect();
    ContourCollection::new_unchecked(ext, CollectionKind::Positive)
}

/// Members compatible with `g0` and lying inside it. `g0` need not belong
/// to the collection.
pub fn interior_collection(
    g0: &Contour,
    g: &ContourCollection,
    p: &ModelParams,
) -> Result<ContourCollection> {
    let mut out = Vec::new();
    for c in &g.contours {
        if c != g0 && is_inside(c, g0) && is_compatible(c, g0, p)? {
            out.push(c.clone());
        }
    }
    Ok(ContourCollection::new_unchecked(out, CollectionKind::MPartition))
}

/// [`interior_collection`] together with `g0` itself.
pub fn iota(g0: &Contour, g: &ContourCollection, p: &ModelParams) -> Result<ContourCollection> {
    let mut inner = interior_collection(g0, g, p)?.contours;
    inner.push(g0.clone());
    Ok(ContourCollection::new_unchecked(inner, CollectionKind::MPartition))
}

/// `|H(Γ) - [sum_ext H(ι_γ) - 1/2 sum_{γ != γ'} Φ(ι_γ, ι_γ')]|`, the external
/// contours grouped with everything they enclose.
pub fn energy_decomposition_check(g: &ContourCollection, p: &ModelParams) -> Result<f64> {
    let ext = external_contours(g);
    let groups: Vec<SiteSet> = ext
        .iter()
        .map(|e| iota(e, g, p).map(|c| collection_interior(&c)))
        .collect::<Result<_>>()?;
    let whole: f64 = g.energy(p);
    let mut parts = Vec::new();
    for (i, a) in groups.iter().enumerate() {
        parts.push(interior_energy::<f64>(a, p));
        for (j, b) in groups.iter().enumerate() {
            if i != j {
                parts.push(-0.5 * phi::<f64>(a, b, p.alpha));
            }
        }
    }
    Ok((whole - polygas_core::pairwise_sum(&parts)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::m_partition;

    fn params() -> ModelParams {
        ModelParams::on_interval(2.0, 1.0, -200, 200).unwrap()
    }

    /// Bonds b1..b8 with γ1 = {b1,b4,b7,b8}, γ2 = {b2,b3}, γ3 = {b5,b6}.
    fn nested_example(p: &ModelParams) -> ContourCollection {
        let cfg = SpinFlipConfig::from_halves(&[0.5, 4.5, 5.5, 9.5, 13.5, 14.5, 18.5, 27.5])
            .unwrap();
        m_partition(&cfg, p).unwrap()
    }

    fn by_halves(g: &ContourCollection, h: &[f64]) -> Contour {
        g.iter().find(|c| c.body().halves() == h).unwrap().clone()
    }

    #[test]
    fn nested_example_structure() {
        let p = params();
        let g = nested_example(&p);
        assert_eq!(g.len(), 3);
        let g1 = by_halves(&g, &[0.5, 9.5, 18.5, 27.5]);
        let g2 = by_halves(&g, &[4.5, 5.5]);
        let g3 = by_halves(&g, &[13.5, 14.5]);
        assert!(!is_positively_compatible(&g1, &g2, &p).unwrap());
        assert!(is_positively_compatible(&g1, &g3, &p).unwrap());
        assert!(is_positively_compatible(&g2, &g3, &p).unwrap());
        assert!(!g.is_positive());

        let ext = external_contours(&g);
        assert_eq!(ext.contours(), &[g1.clone(), g3.clone()]);
        assert_eq!(interior_collection(&g1, &g, &p).unwrap().contours(), &[g2.clone()]);
        assert!(interior_collection(&g3, &g, &p).unwrap().is_empty());
        assert_eq!(iota(&g3, &g, &p).unwrap().contours(), &[g3]);
        assert!(energy_decomposition_check(&g, &p).unwrap() <= 1e-10);
    }

    #[test]
    fn external_of_positive_is_itself() {
        let p = params();
        let cfg = SpinFlipConfig::from_halves(&[-0.5, 0.5, 9.5, 10.5, 30.5, 33.5]).unwrap();
        let g = m_partition(&cfg, &p).unwrap();
        assert!(g.is_positive());
        assert_eq!(external_contours(&g).contours(), g.contours());
        let single = m_partition(&SpinFlipConfig::from_halves(&[-0.5, 0.5]).unwrap(), &p).unwrap();
        assert_eq!(external_contours(&single).contours(), single.contours());
        assert_eq!(energy_decomposition_check(&single, &p).unwrap(), 0.0);
    }

    #[test]
    fn positive_pair_energy() {
        let p = params();
        let cfg = SpinFlipConfig::from_halves(&[-0.5, 0.5, 9.5, 10.5]).unwrap();
        let g = m_partition(&cfg, &p).unwrap();
        let (a, b) = (&g.contours()[0], &g.contours()[1]);
        let whole: f64 = g.energy(&p);
        let split = a.energy() + b.energy() - phi::<f64>(a.interior(), b.interior(), p.alpha);
        assert!((whole - split).abs() < 1e-12);
        assert!(energy_decomposition_check(&g, &p).unwrap() < 1e-12);
    }

    #[test]
    fn interior_of_outside_reference() {
        let p = params();
        let g = nested_example(&p);
        // a reference contour not in the collection, enclosing everything
        let big = Contour::new(SpinFlipConfig::from_halves(&[-400.5, 400.5]).unwrap(), &p).unwrap();
        let inner = interior_collection(&big, &g, &p).unwrap();
        assert_eq!(inner.len(), 3);
    }
}
