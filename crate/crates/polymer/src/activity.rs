use std::collections::HashMap;

use serde::Serialize;

use polygas_contour::{is_inside, m_partition, Contour};
use polygas_core::{
    interior_energy, interior_field_energy, phi, Error, ModelParams, Real, Result, SiteSet,
    SpinFlipConfig,
};
use polygas_graphs::{connected_sum, labeled_trees, MAX_CONNECTED_EDGES, MAX_TREE_VERTICES};

use crate::polymer::{contours_compatible, Polymer};

/// Largest contour interior whose decorations are enumerated.
pub const MAX_DECORATED_SITES: usize = 18;

/// `z = Z / Z*` together with both factors.
#[derive(Clone, Debug, Serialize)]
pub struct Activity<R> {
    pub value: R,
    pub numerator: R,
    pub denominator: R,
}

/// One admissible filling of a contour's interior: the minus sites of
/// the enclosed contours, and what is left to the contour itself.
#[derive(Clone, Debug)]
pub struct Decoration<R> {
    pub inner: SiteSet,
    pub owned: SiteSet,
    /// `exp(-beta H_h(owned))`
    pub weight: R,
    /// `exp(-beta H_h(inner))`
    pub star_weight: R,
}

/// Memoized activity engine for one parameter set.
pub struct Activities<R: Real> {
    params: ModelParams,
    decorations: HashMap<SpinFlipConfig, Vec<Decoration<R>>>,
    memo: HashMap<Vec<SpinFlipConfig>, Activity<R>>,
}

impl<R: Real> Activities<R> {
    pub fn new(params: &ModelParams) -> Self {
        Activities {
            params: params.clone(),
            decorations: HashMap::new(),
            memo: HashMap::new(),
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    fn boltzmann(&self, sites: &SiteSet) -> R {
        let h: R = interior_energy::<R>(sites, &self.params)
            + interior_field_energy::<R>(sites, &self.params);
        (-(R::from_f64(self.params.beta) * h)).exp()
    }

    /// All collections that may sit inside `gamma` with `gamma` as their
    /// only external contour, the empty one first.
    pub fn decorations(&mut self, gamma: &Contour) -> Result<&[Decoration<R>]> {
        if !self.decorations.contains_key(gamma.body()) {
            let list = self.build_decorations(gamma)?;
            self.decorations.insert(gamma.body().clone(), list);
        }
        Ok(&self.decorations[gamma.body()])
    }

    fn build_decorations(&self, gamma: &Contour) -> Result<Vec<Decoration<R>>> {
        let sites = gamma.interior().as_slice();
        if sites.len() > MAX_DECORATED_SITES {
            return Err(Error::infeasible(
                "contour interior",
                sites.len(),
                MAX_DECORATED_SITES,
            ));
        }
        let mut out = Vec::new();
        for mask in 0u64..(1 << sites.len()) {
            let inner: SiteSet = sites
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &x)| x)
                .collect();
            if mask != 0 {
                let parts = m_partition(&SpinFlipConfig::from_interior(&inner), &self.params)?;
                let admissible = parts
                    .iter()
                    .all(|c| is_inside(c, gamma) && contours_compatible(c, gamma, &self.params));
                if !admissible {
                    continue;
                }
            }
            let owned = gamma.interior().difference(&inner);
            out.push(Decoration {
                weight: self.boltzmann(&owned),
                star_weight: self.boltzmann(&inner),
                inner,
                owned,
            });
        }
        Ok(out)
    }

    /// Normalization of one contour: sum of `exp(-beta H_h)` over what it
    /// may enclose. At least one, from the empty filling.
    pub fn big_z_star_contour(&mut self, gamma: &Contour) -> Result<R> {
        let terms: Vec<R> = self
            .decorations(gamma)?
            .iter()
            .map(|d| d.star_weight.clone())
            .collect();
        Ok(polygas_core::pairwise_sum(&terms))
    }

    pub fn big_z_star(&mut self, q: &Polymer) -> Result<R> {
        let mut z = R::one();
        for g in q.contours() {
            z = z * self.big_z_star_contour(g)?;
        }
        Ok(z)
    }

    /// Sum over connected graphs on the polymer and over all fillings of
    /// its contours of the Mayer-weighted Boltzmann factors.
    pub fn big_z(&mut self, q: &Polymer) -> Result<R> {
        let n = q.len();
        if n * (n - 1) / 2 > MAX_CONNECTED_EDGES {
            return Err(Error::infeasible("polymer size", n, 7));
        }
        for g in q.contours() {
            self.decorations(g)?;
        }
        let decs: Vec<&[Decoration<R>]> = q
            .contours()
            .iter()
            .map(|g| self.decorations[g.body()].as_slice())
            .collect();
        let beta = R::from_f64(self.params.beta);
        let alpha = self.params.alpha;
        let mut idx = vec![0usize; n];
        let mut terms = Vec::new();
        loop {
            let mut w = R::one();
            for (k, &i) in idx.iter().enumerate() {
                w = w * decs[k][i].weight.clone();
            }
            if n > 1 {
                let mut x = Vec::with_capacity(n * (n - 1) / 2);
                for a in 0..n {
                    for b in a + 1..n {
                        let f: R = phi(&decs[a][idx[a]].owned, &decs[b][idx[b]].owned, alpha);
                        x.push((beta.clone() * f).exp_m1());
                    }
                }
                w = w * connected_sum(n, &x);
            }
            terms.push(w);
            let mut pos = 0;
            loop {
                if pos == n {
                    return Ok(polygas_core::pairwise_sum(&terms));
                }
                idx[pos] += 1;
                if idx[pos] < decs[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    pub fn activity(&mut self, q: &Polymer) -> Result<Activity<R>> {
        let key = q.key();
        if let Some(a) = self.memo.get(&key) {
            return Ok(a.clone());
        }
        let numerator = self.big_z(q)?;
        let denominator = self.big_z_star(q)?;
        let a = Activity {
            value: numerator.clone() / denominator.clone(),
            numerator,
            denominator,
        };
        self.memo.insert(key, a.clone());
        Ok(a)
    }

    /// Tree-graph majorant of the activity: half the bare energies,
    /// spanning trees weighted by the bare interactions, and the field
    /// magnitude on the interiors.
    pub fn upper_activity(&self, q: &Polymer) -> Result<R> {
        upper_activity(q, &self.params)
    }
}

pub(crate) fn upper_activity<R: Real>(q: &Polymer, p: &ModelParams) -> Result<R> {
    let n = q.len();
    if n > MAX_TREE_VERTICES {
        return Err(Error::infeasible("polymer size", n, MAX_TREE_VERTICES));
    }
    let cs = q.contours();
    let energy: R = cs
        .iter()
        .map(|g| interior_energy::<R>(g.interior(), p))
        .fold(R::zero(), |a, b| a + b);
    let field: R = if p.has_field() {
        let abs = p.with_field(
            p.field
                .iter()
                .map(|(&x, &h)| (x, h.abs()))
                .collect(),
        )?;
        cs.iter()
            .map(|g| interior_field_energy::<R>(g.interior(), &abs))
            .fold(R::zero(), |a, b| a + b)
    } else {
        R::zero()
    };
    let beta = R::from_f64(p.beta);
    let prefactor = (beta.clone() * (field - energy / R::from_f64(2.0))).exp();
    let mut trees = Vec::new();
    for t in labeled_trees(n)? {
        let mut w = R::one();
        for &(a, b) in t.edges() {
            w = w * phi::<R>(cs[a].interior(), cs[b].interior(), p.alpha);
        }
        trees.push(w);
    }
    Ok(prefactor * polygas_core::pairwise_sum(&trees))
}
