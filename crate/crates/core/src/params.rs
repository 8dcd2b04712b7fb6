use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::lattice::SiteSet;
use crate::{zeta, Error, Result};

/// External field of finite support, `site -> h_x`.
pub type Field = BTreeMap<i64, f64>;

/// Model and contour parameters shared by every module.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
    /// Contour separation constant `M`.
    pub m_param: f64,
    /// Distancing exponent `a` in `dist > M * diam^a`.
    pub dist_exponent: f64,
    pub lambda: SiteSet,
    #[serde(default)]
    pub field: Field,
    #[serde(skip)]
    zeta_alpha: f64,
}

impl ModelParams {
    pub const DEFAULT_M: f64 = 2.0;
    pub const DEFAULT_DIST_EXPONENT: f64 = 1.5;

    /// Zero field, `M = 2`, `a = 3/2`.
    pub fn new(alpha: f64, beta: f64, lambda: SiteSet) -> Result<Self> {
        ModelParams::with_all(
            alpha,
            beta,
            Self::DEFAULT_M,
            Self::DEFAULT_DIST_EXPONENT,
            lambda,
            Field::new(),
        )
    }

    /// Convenience for `Λ = [a, b]`.
    pub fn on_interval(alpha: f64, beta: f64, a: i64, b: i64) -> Result<Self> {
        ModelParams::new(alpha, beta, SiteSet::interval(a, b))
    }

    pub fn with_all(
        alpha: f64,
        beta: f64,
        m_param: f64,
        dist_exponent: f64,
        lambda: SiteSet,
        field: Field,
    ) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::param("alpha", format!("{alpha} is outside (1, 2]")));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::param("beta", format!("{beta} must be finite and >= 0")));
        }
        if !(m_param > 1.0 && m_param.is_finite()) {
            return Err(Error::param("m_param", format!("{m_param} must exceed 1")));
        }
        if !(dist_exponent > 1.0 && dist_exponent < 2.0) {
            return Err(Error::param(
                "dist_exponent",
                format!("{dist_exponent} is outside (1, 2)"),
            ));
        }
        if lambda.is_empty() {
            return Err(Error::param("lambda", "volume is empty"));
        }
        if let Some((x, _)) = field.iter().find(|(x, _)| !lambda.contains(**x)) {
            return Err(Error::param("field", format!("site {x} lies outside lambda")));
        }
        if let Some((x, h)) = field.iter().find(|(_, h)| !h.is_finite()) {
            return Err(Error::param("field", format!("h[{x}] = {h} is not finite")));
        }
        Ok(ModelParams {
            alpha,
            beta,
            m_param,
            dist_exponent,
            lambda,
            field,
            zeta_alpha: zeta(alpha)?,
        })
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        let mut p = self.clone();
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::param("beta", format!("{beta} must be finite and >= 0")));
        }
        p.beta = beta;
        Ok(p)
    }

    pub fn with_m(&self, m_param: f64) -> Result<Self> {
        ModelParams::with_all(
            self.alpha,
            self.beta,
            m_param,
            self.dist_exponent,
            self.lambda.clone(),
            self.field.clone(),
        )
    }

    pub fn with_lambda(&self, lambda: SiteSet) -> Result<Self> {
        ModelParams::with_all(
            self.alpha,
            self.beta,
            self.m_param,
            self.dist_exponent,
            lambda,
            self.field.clone(),
        )
    }

    pub fn with_field(&self, field: Field) -> Result<Self> {
        ModelParams::with_all(
            self.alpha,
            self.beta,
            self.m_param,
            self.dist_exponent,
            self.lambda.clone(),
            field,
        )
    }

    /// `zeta(alpha)`, cached at construction.
    pub fn zeta_alpha(&self) -> f64 {
        if self.zeta_alpha == 0.0 {
            // deserialized values skip the cache
            zeta(self.alpha).expect("validated alpha")
        } else {
            self.zeta_alpha
        }
    }

    /// Separation threshold `M * d^a` for a minimal diameter `d`.
    pub fn separation(&self, min_diam: i64) -> f64 {
        self.m_param * (min_diam as f64).powf(self.dist_exponent)
    }

    pub fn h(&self, x: i64) -> f64 {
        self.field.get(&x).copied().unwrap_or(0.0)
    }

    pub fn has_field(&self) -> bool {
        self.field.values().any(|h| *h != 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let lam = SiteSet::interval(0, 3);
        assert!(ModelParams::new(1.0, 1.0, lam.clone()).is_err());
        assert!(ModelParams::new(2.1, 1.0, lam.clone()).is_err());
        assert!(ModelParams::new(2.0, -1.0, lam.clone()).is_err());
        assert!(ModelParams::new(2.0, 1.0, SiteSet::empty()).is_err());
        let p = ModelParams::new(2.0, 1.0, lam.clone()).unwrap();
        assert!(p.with_m(1.0).is_err());
        let mut f = Field::new();
        f.insert(7, 0.1);
        assert_eq!(p.with_field(f).unwrap_err().code(), "invalid_param");
        assert!(ModelParams::with_all(2.0, 1.0, 2.0, 2.0, lam, Field::new()).is_err());
    }

    #[test]
    fn separation_threshold() {
        let p = ModelParams::on_interval(2.0, 1.0, 0, 3).unwrap();
        assert_eq!(p.separation(1), 2.0);
        assert!((p.separation(4) - 16.0).abs() < 1e-12);
    }

    #[test]
    fn serde_round_trip_keeps_zeta() {
        let p = ModelParams::on_interval(1.5, 2.0, 0, 3).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let q: ModelParams = serde_json::from_str(&s).unwrap();
        assert_eq!(q.zeta_alpha(), p.zeta_alpha());
    }
}
