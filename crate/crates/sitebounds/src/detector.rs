use rayon::prelude::*;
use serde::Serialize;

use polygas_contour::{enumerate_contours, is_positively_compatible, Contour};
use polygas_core::{phi, Error, ModelParams, Result};
use polygas_polymer::{polymer_compatible, polymer_universe, Polymer};

use crate::kernel::{kernel, Sides};

/// `dist(I_-(g1), I_-(g2)) <= 2 M min(diam)^a`.
pub fn detector_set_member(g1: &Contour, g2: &Contour, p: &ModelParams) -> bool {
    let d = g1
        .interior()
        .dist(g2.interior())
        .expect("contours have nonempty interiors");
    d as f64 <= 2.0 * p.separation(g1.diam().min(g2.diam()))
}

/// First contour pair of `q1 x q2` flagged by the detector.
pub fn detector_witness(q1: &Polymer, q2: &Polymer, p: &ModelParams) -> Option<(Contour, Contour)> {
    q1.contours().iter().find_map(|a| {
        q2.contours()
            .iter()
            .find(|b| detector_set_member(a, b, p))
            .map(|b| (a.clone(), b.clone()))
    })
}

/// Two polymer bodies as half-integer positions.
pub type BodyPair = (Vec<f64>, Vec<f64>);

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub max_diam: i64,
    pub polymers: usize,
    pub pairs_checked: usize,
    pub incompatible_pairs: usize,
    pub witnessed: usize,
    /// Incompatible pairs without a witness, as half-integer bodies.
    pub failures: Vec<BodyPair>,
}

/// Every incompatible pair of distinct polymers in the universe must
/// contain a detector pair.
pub fn witness_sweep(p: &ModelParams, max_diam: i64) -> Result<WitnessReport> {
    let qs = polymer_universe(p, max_diam)?;
    let n = qs.len();
    let rows: Vec<(usize, usize, Vec<BodyPair>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut incompatible = 0;
            let mut witnessed = 0;
            let mut bad = Vec::new();
            for j in i + 1..n {
                if polymer_compatible(&qs[i], &qs[j], p) {
                    continue;
                }
                incompatible += 1;
                if detector_witness(&qs[i], &qs[j], p).is_some() {
                    witnessed += 1;
                } else {
                    bad.push((qs[i].body().halves(), qs[j].body().halves()));
                }
            }
            (incompatible, witnessed, bad)
        })
        .collect();
    Ok(WitnessReport {
        max_diam,
        polymers: n,
        pairs_checked: n * n.saturating_sub(1) / 2,
        incompatible_pairs: rows.iter().map(|r| r.0).sum(),
        witnessed: rows.iter().map(|r| r.1).sum(),
        failures: rows.into_iter().flat_map(|r| r.2).collect(),
    })
}

/// Which contour-to-point inequality a pair of sides belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointCase {
    /// Both sites in one contour: `1 <= e^{alpha c0 H} C(x,y)`.
    SameContour,
    /// Positively compatible pair: `Phi <= 4^alpha e^{2 alpha c0 (H1+H2)} C(x,y)`.
    PositivePair,
    /// Detector pair: `1 <= (4M)^alpha e^{alpha c0 (H1+H2)} C(x,y)`.
    DetectorPair,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PointBound {
    pub case: PointCase,
    pub sides: Sides,
}

/// Evaluates every contour-to-point inequality whose hypotheses hold for
/// `x in I_-(g1)` and `y in I_-(g2)` (`g2 = None` means `y in I_-(g1)`).
pub fn contour_point_bounds_check(
    g1: &Contour,
    g2: Option<&Contour>,
    x: i64,
    y: i64,
    p: &ModelParams,
    c0: f64,
) -> Result<Vec<PointBound>> {
    let alpha = p.alpha;
    let c = kernel(x, y, alpha);
    if !g1.interior().contains(x) {
        return Err(Error::param("x", format!("{x} is not in the first interior")));
    }
    let Some(g2) = g2 else {
        if !g1.interior().contains(y) {
            return Err(Error::param("y", format!("{y} is not in the interior")));
        }
        let rhs = (alpha * c0 * g1.energy()).exp() * c;
        return Ok(vec![PointBound {
            case: PointCase::SameContour,
            sides: Sides { lhs: 1.0, rhs },
        }]);
    };
    if !g2.interior().contains(y) {
        return Err(Error::param("y", format!("{y} is not in the second interior")));
    }
    let h = g1.energy() + g2.energy();
    let mut out = Vec::new();
    if g1 != g2 && is_positively_compatible(g1, g2, p).unwrap_or(false) {
        let lhs: f64 = phi(g1.interior(), g2.interior(), alpha);
        let rhs = 4f64.powf(alpha) * (2.0 * alpha * c0 * h).exp() * c;
        out.push(PointBound {
            case: PointCase::PositivePair,
            sides: Sides { lhs, rhs },
        });
    }
    if detector_set_member(g1, g2, p) {
        let rhs = (4.0 * p.m_param).powf(alpha) * (alpha * c0 * h).exp() * c;
        out.push(PointBound {
            case: PointCase::DetectorPair,
            sides: Sides { lhs: 1.0, rhs },
        });
    }
    if out.is_empty() {
        return Err(Error::param(
            "contours",
            "pair is neither positively compatible nor a detector pair",
        ));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct PointSweepRow {
    pub case: PointCase,
    pub checked: usize,
    pub violations: usize,
    pub max_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointSweep {
    pub max_diam: i64,
    /// Diameter constant used on the right-hand sides.
    pub c0: f64,
    pub contours: usize,
    pub rows: Vec<PointSweepRow>,
}

impl PointSweep {
    pub fn ok(&self) -> bool {
        self.rows.iter().all(|r| r.violations == 0)
    }
}

/// All three contour-to-point inequalities over every contour (pair) of
/// bounded diameter in the volume and every admissible pair of sites.
pub fn contour_point_sweep(p: &ModelParams, max_diam: i64, c0: f64) -> Result<PointSweep> {
    let cs = enumerate_contours(p, max_diam)?;
    let n = cs.len();
    let per: Vec<Vec<PointBound>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut v = Vec::new();
            let g1 = &cs[i];
            for x in g1.interior().iter() {
                for y in g1.interior().iter() {
                    v.extend(contour_point_bounds_check(g1, None, x, y, p, c0)?);
                }
            }
            for (j, g2) in cs.iter().enumerate() {
                if j == i {
                    continue;
                }
                let positive = is_positively_compatible(g1, g2, p).unwrap_or(false);
                if !positive && !detector_set_member(g1, g2, p) {
                    continue;
                }
                for x in g1.interior().iter() {
                    for y in g2.interior().iter() {
                        v.extend(contour_point_bounds_check(g1, Some(g2), x, y, p, c0)?);
                    }
                }
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    let rows = [PointCase::SameContour, PointCase::PositivePair, PointCase::DetectorPair]
        .into_iter()
        .map(|case| {
            let all: Vec<&PointBound> = per.iter().flatten().filter(|b| b.case == case).collect();
            PointSweepRow {
                case,
                checked: all.len(),
                violations: all.iter().filter(|b| !b.sides.holds()).count(),
                max_ratio: all.iter().map(|b| b.sides.ratio()).fold(0.0, f64::max),
            }
        })
        .collect();
    Ok(PointSweep {
        max_diam,
        c0,
        contours: n,
        rows,
    })
}
