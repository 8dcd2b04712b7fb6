use std::fmt;
use std::sync::Arc;

use polygas_core::{Error, Result};

/// `(vertex, beta) -> v_beta(vertex)`.
pub type VertexWeight = Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>;

/// Which tuples of vertices a global tree sum may visit.
#[derive(Clone, Debug, PartialEq)]
pub enum GlobalCompat {
    /// Every pair of entries has a nonzero edge weight.
    Pairwise,
    /// Every tuple is admitted.
    Always,
    /// Explicit symmetric pair table, row-major.
    Table(Vec<bool>),
}

/// Finite vertex system: positive vertex weights depending on `beta`, a
/// symmetric nonnegative edge weight and a pairwise admissibility rule for
/// global sums.
#[derive(Clone)]
pub struct VertexSystem {
    labels: Vec<String>,
    weight: VertexWeight,
    edges: Vec<f64>,
    compat: GlobalCompat,
}

impl fmt::Debug for VertexSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VertexSystem")
            .field("labels", &self.labels)
            .field("edges", &self.edges)
            .field("compat", &self.compat)
            .finish()
    }
}

impl VertexSystem {
    /// `edges` is the row-major `n x n` edge table.
    pub fn new(labels: Vec<String>, weight: VertexWeight, edges: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Empty("vertex system".into()));
        }
        if edges.len() != n * n {
            return Err(Error::param(
                "edges",
                format!("table has {} entries, expected {}", edges.len(), n * n),
            ));
        }
        for i in 0..n {
            for j in 0..n {
                let e = edges[i * n + j];
                if !(e >= 0.0 && e.is_finite()) {
                    return Err(Error::param("edges", format!("e({i},{j}) = {e}")));
                }
                if e != edges[j * n + i] {
                    return Err(Error::param("edges", format!("e({i},{j}) is not symmetric")));
                }
            }
        }
        let vs = VertexSystem {
            labels,
            weight,
            edges,
            compat: GlobalCompat::Pairwise,
        };
        for t in 0..n {
            let w = vs.vertex_weight(t, 1.0);
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::param("vertex_weight", format!("v_1({t}) = {w}")));
            }
        }
        Ok(vs)
    }

    /// Weights `v_beta(t) = c_t exp(-beta a_t)`.
    pub fn exponential(
        labels: Vec<String>,
        prefactors: Vec<f64>,
        rates: Vec<f64>,
        edges: Vec<f64>,
    ) -> Result<Self> {
        if prefactors.len() != labels.len() || rates.len() != labels.len() {
            return Err(Error::param("vertex_weight", "one prefactor and rate per vertex"));
        }
        let weight: VertexWeight = Arc::new(move |t, beta| prefactors[t] * (-beta * rates[t]).exp());
        VertexSystem::new(labels, weight, edges)
    }

    pub fn with_compat(mut self, compat: GlobalCompat) -> Result<Self> {
        if let GlobalCompat::Table(t) = &compat {
            let n = self.len();
            if t.len() != n * n {
                return Err(Error::param("global_compat", "table size mismatch"));
            }
            if (0..n).any(|i| (0..n).any(|j| t[i * n + j] != t[j * n + i])) {
                return Err(Error::param("global_compat", "table is not symmetric"));
            }
        }
        self.compat = compat;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn compat(&self) -> &GlobalCompat {
        &self.compat
    }

    pub fn vertex_weight(&self, t: usize, beta: f64) -> f64 {
        (self.weight)(t, beta)
    }

    pub fn edge_weight(&self, a: usize, b: usize) -> f64 {
        self.edges[a * self.len() + b]
    }

    /// Pair admitted in a global sum.
    pub fn compatible(&self, a: usize, b: usize) -> bool {
        match &self.compat {
            GlobalCompat::Pairwise => self.edge_weight(a, b) != 0.0,
            GlobalCompat::Always => true,
            GlobalCompat::Table(t) => t[a * self.len() + b],
        }
    }

    /// Tuple admitted in a global sum.
    pub fn tuple_compatible(&self, w: &[usize]) -> bool {
        (0..w.len()).all(|i| (i + 1..w.len()).all(|j| self.compatible(w[i], w[j])))
    }

    /// Every vertex has a partner with nonzero edge weight.
    pub fn is_covering(&self) -> bool {
        (0..self.len()).all(|a| (0..self.len()).any(|b| self.edge_weight(a, b) != 0.0))
    }

    fn check_vertex(&self, t: usize) -> Result<()> {
        if t >= self.len() {
            return Err(Error::param("vertex", format!("{t} out of range")));
        }
        Ok(())
    }
}

/// `ln v_{beta/2} - ln v_beta`.
pub fn modified_vertex(vs: &VertexSystem, t: usize, beta: f64) -> Result<f64> {
    vs.check_vertex(t)?;
    if beta <= 1.0 {
        return Err(Error::param("beta", format!("{beta} must exceed 1")));
    }
    Ok(vs.vertex_weight(t, beta / 2.0).ln() - vs.vertex_weight(t, beta).ln())
}

/// `sum_s v_beta(s) e(s, t)`.
pub fn leaf_pruning(vs: &VertexSystem, t: usize, beta: f64) -> Result<f64> {
    contracting(vs, &[t], beta)
}

/// `sum_s v_beta(s) prod_i e(s, t_i)`.
pub fn contracting(vs: &VertexSystem, tuple: &[usize], beta: f64) -> Result<f64> {
    if tuple.is_empty() {
        return Err(Error::param("tuple", "needs at least one vertex"));
    }
    for &t in tuple {
        vs.check_vertex(t)?;
    }
    let terms: Vec<f64> = (0..vs.len())
        .map(|s| {
            tuple
                .iter()
                .fold(vs.vertex_weight(s, beta), |acc, &t| acc * vs.edge_weight(s, t))
        })
        .collect();
    Ok(polygas_core::pairwise_sum(&terms))
}

/// Hand-set systems used to exercise the tree identities away from the
/// contour model.
pub mod toys {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("t{i}")).collect()
    }

    /// Three vertices on a path `0 - 1 - 2`, no self edges.
    pub fn path3() -> VertexSystem {
        #[rustfmt::skip]
        let e = vec![
            0.0, 0.7, 0.0,
            0.7, 0.0, 0.4,
            0.0, 0.4, 0.0,
        ];
        VertexSystem::exponential(labels(3), vec![1.0, 0.5, 2.0], vec![0.3, 0.2, 0.6], e)
            .expect("valid toy")
    }

    /// Three vertices, all pairs and self pairs weighted.
    pub fn dense3() -> VertexSystem {
        #[rustfmt::skip]
        let e = vec![
            0.2, 0.5, 0.3,
            0.5, 0.1, 0.8,
            0.3, 0.8, 0.4,
        ];
        VertexSystem::exponential(labels(3), vec![0.9, 0.6, 0.3], vec![0.5, 0.25, 0.1], e)
            .expect("valid toy")
    }

    /// Triangle without self edges.
    pub fn triangle3() -> VertexSystem {
        #[rustfmt::skip]
        let e = vec![
            0.0, 1.0, 0.5,
            1.0, 0.0, 0.25,
            0.5, 0.25, 0.0,
        ];
        VertexSystem::exponential(labels(3), vec![0.4, 0.8, 0.6], vec![1.0, 0.5, 0.75], e)
            .expect("valid toy")
    }

    /// Four vertices: a triangle `0,1,2` and a pendant `3` on `2`.
    pub fn kite4() -> VertexSystem {
        #[rustfmt::skip]
        let e = vec![
            0.0, 0.6, 0.3, 0.0,
            0.6, 0.0, 0.5, 0.0,
            0.3, 0.5, 0.0, 0.9,
            0.0, 0.0, 0.9, 0.0,
        ];
        VertexSystem::exponential(
            labels(4),
            vec![0.5, 0.5, 0.7, 0.2],
            vec![0.2, 0.4, 0.3, 0.1],
            e,
        )
        .expect("valid toy")
    }

    pub fn all() -> Vec<(&'static str, VertexSystem)> {
        vec![
            ("path3", path3()),
            ("dense3", dense3()),
            ("triangle3", triangle3()),
            ("kite4", kite4()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_tables() {
        let l = vec!["a".to_string(), "b".to_string()];
        let w: VertexWeight = Arc::new(|_, _| 1.0);
        assert!(VertexSystem::new(l.clone(), w.clone(), vec![0.0, 1.0, 2.0, 0.0]).is_err());
        assert!(VertexSystem::new(l.clone(), w.clone(), vec![0.0, -1.0, -1.0, 0.0]).is_err());
        assert!(VertexSystem::new(l.clone(), w, vec![0.0; 3]).is_err());
        let zero: VertexWeight = Arc::new(|_, _| 0.0);
        assert!(VertexSystem::new(l, zero, vec![0.0; 4]).is_err());
    }

    #[test]
    fn constant_weight_has_zero_modified_vertex() {
        let l = vec!["a".to_string()];
        let vs = VertexSystem::new(l, Arc::new(|_, _| 3.0), vec![0.0]).unwrap();
        assert_eq!(modified_vertex(&vs, 0, 4.0).unwrap(), 0.0);
        assert!(modified_vertex(&vs, 0, 1.0).is_err());
    }

    #[test]
    fn exponential_modified_vertex_is_half_rate() {
        let vs = toys::dense3();
        let got = modified_vertex(&vs, 2, 6.0).unwrap();
        assert!((got - 0.1 * 3.0).abs() < 1e-14);
    }

    #[test]
    fn pruning_examples() {
        let l = vec!["a".to_string(), "b".to_string()];
        let zero =
            VertexSystem::new(l.clone(), Arc::new(|_, _| 1.0), vec![0.0; 4]).unwrap();
        assert_eq!(leaf_pruning(&zero, 0, 2.0).unwrap(), 0.0);
        let c = 0.37;
        let two = VertexSystem::new(
            l,
            Arc::new(move |t, _| if t == 1 { c } else { 5.0 }),
            vec![0.0, 1.0, 1.0, 0.0],
        )
        .unwrap();
        assert_eq!(leaf_pruning(&two, 0, 2.0).unwrap(), c);
        assert!(two.is_covering());
        assert!(!zero.is_covering());
    }

    #[test]
    fn contracting_reduces_to_pruning_and_single_vertex() {
        let vs = toys::kite4();
        for t in 0..4 {
            assert_eq!(
                contracting(&vs, &[t], 1.5).unwrap(),
                leaf_pruning(&vs, t, 1.5).unwrap()
            );
        }
        let one = VertexSystem::new(vec!["a".into()], Arc::new(|_, b| (-b).exp()), vec![0.5])
            .unwrap();
        let got = contracting(&one, &[0, 0, 0], 2.0).unwrap();
        assert!((got - (-2.0f64).exp() * 0.125).abs() < 1e-16);
        assert!(contracting(&vs, &[], 1.0).is_err());
        assert!(contracting(&vs, &[9], 1.0).is_err());
    }

    #[test]
    fn compat_rules() {
        let vs = toys::path3();
        assert!(vs.tuple_compatible(&[0, 1]));
        assert!(!vs.tuple_compatible(&[0, 1, 2]));
        let vs = vs.with_compat(GlobalCompat::Always).unwrap();
        assert!(vs.tuple_compatible(&[0, 2, 2]));
        assert!(toys::path3()
            .with_compat(GlobalCompat::Table(vec![true, false, true, true, true, true, true, true, true]))
            .is_err());
    }
}
