use rayon::prelude::*;
use serde::Serialize;

use polygas_core::{coupling, Error, ModelParams, Real, Result};

/// Largest volume enumerated.
pub const MAX_ORACLE_SITES: usize = 22;

const BLOCK_BITS: u32 = 12;

/// Neumaier-compensated running sum.
#[derive(Clone, Debug)]
pub struct Neumaier<R> {
    sum: R,
    carry: R,
}

impl<R: Real> Default for Neumaier<R> {
    fn default() -> Self {
        Neumaier {
            sum: R::zero(),
            carry: R::zero(),
        }
    }
}

impl<R: Real> Neumaier<R> {
    pub fn add(&mut self, x: R) {
        let t = self.sum.clone() + x.clone();
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry.clone() + ((self.sum.clone() - t.clone()) + x);
        } else {
            self.carry = self.carry.clone() + ((x - t.clone()) + self.sum.clone());
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &Neumaier<R>) {
        self.add(other.sum.clone());
        self.add(other.carry.clone());
    }

    pub fn value(&self) -> R {
        self.sum.clone() + self.carry.clone()
    }
}

/// Exact partition function with plus boundary condition.
#[derive(Clone, Debug, Serialize)]
pub struct PartitionFunction<R> {
    pub z: R,
    pub log_z: R,
    /// `sum over nonempty minus sets of exp(-beta H_h)`, so `z = 1 + rest`
    /// when no field pushes energies below zero.
    pub rest: R,
    pub configurations: u64,
}

/// Precomputed couplings on the volume. Bit `i` of a mask is site
/// `lambda[i]`, set when that spin is minus.
pub(crate) struct Engine<R> {
    pub n: usize,
    four_j: Vec<Vec<R>>,
    flip_cost: Vec<R>,
    beta: R,
    /// Lower bound on `H_h`; weights are `exp(-beta (H_h - floor))`.
    pub floor: R,
}

pub(crate) struct Totals<R> {
    /// Nonempty configurations.
    pub rest: R,
    pub empty: R,
    pub observables: Vec<R>,
}

impl<R: Real> Engine<R> {
    pub fn new(p: &ModelParams) -> Result<Self> {
        let sites = p.lambda.as_slice();
        let n = sites.len();
        if n > MAX_ORACLE_SITES {
            return Err(Error::infeasible("oracle volume", n, MAX_ORACLE_SITES));
        }
        let four_zeta = 4.0 * p.zeta_alpha();
        let four_j = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            R::zero()
                        } else {
                            R::from_f64(4.0 * coupling(sites[i] - sites[j], p.alpha))
                        }
                    })
                    .collect()
            })
            .collect();
        let flip_cost = sites
            .iter()
            .map(|&x| R::from_f64(four_zeta) + R::from_f64(2.0 * p.h(x)))
            .collect();
        let floor = sites
            .iter()
            .map(|&x| R::from_f64((2.0 * p.h(x)).min(0.0)))
            .fold(R::zero(), |a, b| a + b);
        Ok(Engine {
            n,
            four_j,
            flip_cost,
            beta: R::from_f64(p.beta),
            floor,
        })
    }

    /// `H_h` of a mask and the interaction of each site with the minus set.
    fn direct(&self, mask: u64) -> (R, Vec<R>) {
        let mut h = R::zero();
        let mut field = vec![R::zero(); self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                if mask >> j & 1 == 1 {
                    field[i] = field[i].clone() + self.four_j[i][j].clone();
                }
            }
        }
        for i in 0..self.n {
            if mask >> i & 1 == 1 {
                // each pair is counted from both ends
                h = h + self.flip_cost[i].clone() - field[i].clone() / R::from_f64(2.0);
            }
        }
        (h, field)
    }

    fn weight(&self, h: &R) -> R {
        (-(self.beta.clone() * (h.clone() - self.floor.clone()))).exp()
    }

    /// Visits every configuration; `f(mask, weight, acc)` adds observable
    /// contributions into `acc`.
    pub fn run<F>(&self, k: usize, f: F) -> Totals<R>
    where
        F: Fn(u64, &R, &mut [Neumaier<R>]) + Sync,
    {
        let total: u64 = 1 << self.n;
        let block: u64 = total.min(1 << BLOCK_BITS);
        let blocks = total / block;
        let partial: Vec<(Neumaier<R>, Neumaier<R>, Vec<Neumaier<R>>)> = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut rest = Neumaier::default();
                let mut empty = Neumaier::default();
                let mut acc = vec![Neumaier::default(); k];
                let start = b * block;
                let mut mask = start ^ (start >> 1);
                let (mut h, mut field) = self.direct(mask);
                for step in start..start + block {
                    if step > start {
                        let i = step.trailing_zeros() as usize;
                        let delta = self.flip_cost[i].clone() - field[i].clone();
                        let sign = if mask >> i & 1 == 0 { R::one() } else { -R::one() };
                        h = h + sign.clone() * delta;
                        mask ^= 1 << i;
                        for (j, fj) in field.iter_mut().enumerate() {
                            *fj = fj.clone() + sign.clone() * self.four_j[j][i].clone();
                        }
                    }
                    let w = if mask == 0 { self.weight(&R::zero()) } else { self.weight(&h) };
                    if mask == 0 {
                        empty.add(w.clone());
                    } else {
                        rest.add(w.clone());
                    }
                    f(mask, &w, &mut acc);
                }
                (rest, empty, acc)
            })
            .collect();
        let mut rest = Neumaier::default();
        let mut empty = Neumaier::default();
        let mut acc = vec![Neumaier::default(); k];
        for (r, e, a) in &partial {
            rest.merge(r);
            empty.merge(e);
            for (x, y) in acc.iter_mut().zip(a) {
                x.merge(y);
            }
        }
        Totals {
            rest: rest.value(),
            empty: empty.value(),
            observables: acc.iter().map(|a| a.value()).collect(),
        }
    }

    pub fn partition_function(&self, t: &Totals<R>) -> PartitionFunction<R> {
        // Z = exp(-beta floor) (empty + rest)
        let shift = -(self.beta.clone() * self.floor.clone());
        let log_z = if self.floor.is_zero() {
            t.rest.ln_1p()
        } else {
            shift.clone() + (t.empty.clone() + t.rest.clone()).ln()
        };
        let scale = shift.exp();
        PartitionFunction {
            z: scale.clone() * (t.empty.clone() + t.rest.clone()),
            log_z,
            rest: scale * t.rest.clone(),
            configurations: 1 << self.n,
        }
    }
}

pub fn exact_partition_function<R: Real>(p: &ModelParams) -> Result<PartitionFunction<R>> {
    let e = Engine::<R>::new(p)?;
    let t = e.run(0, |_, _, _| {});
    Ok(e.partition_function(&t))
}

/// Gibbs average of `obs`, which sees the spins of the volume in site order.
pub fn expectation<F>(obs: F, p: &ModelParams) -> Result<f64>
where
    F: Fn(&[i8]) -> f64 + Sync,
{
    let e = Engine::<f64>::new(p)?;
    let n = e.n;
    let t = e.run(1, |mask, w, acc| {
        let spins: Vec<i8> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        acc[0].add(w * obs(&spins));
    });
    Ok(t.observables[0] / (t.empty + t.rest))
}

/// `<prod_{i in B} n_i>` for each index mask `B` (bit `i` is site
/// `lambda[i]`); the empty mask gives one.
pub fn indicator_moments<R: Real>(masks: &[u64], p: &ModelParams) -> Result<Vec<R>> {
    let e = Engine::<R>::new(p)?;
    let t = e.run(masks.len(), |mask, w, acc| {
        for (a, &b) in acc.iter_mut().zip(masks) {
            if mask & b == b {
                a.add(w.clone());
            }
        }
    });
    let z = t.empty.clone() + t.rest.clone();
    Ok(t.observables.into_iter().map(|x| x / z.clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use polygas_core::{hamiltonian, zeta, Hp, SiteSet, SpinFlipConfig};

    #[test]
    fn single_site_and_zero_beta() {
        let p = ModelParams::on_interval(2.0, 1.0, 0, 0).unwrap();
        let z = exact_partition_function::<f64>(&p).unwrap();
        let want = 1.0 + (-4.0 * zeta(2.0).unwrap()).exp();
        assert!((z.z - want).abs() < 1e-15);
        assert!((z.z - 1.0013882).abs() < 1e-7);
        for l in 0..8 {
            let p = ModelParams::on_interval(1.5, 0.0, 0, l).unwrap();
            let z = exact_partition_function::<f64>(&p).unwrap();
            assert_eq!(z.z, 2f64.powi(l as i32 + 1));
        }
    }

    #[test]
    fn two_sites_by_hand() {
        let p = ModelParams::on_interval(2.0, 1.0, 0, 1).unwrap();
        let z2 = zeta(2.0).unwrap();
        let want = 1.0 + 2.0 * (-4.0 * z2 + 2.0).exp() * (-2.0f64).exp() + (-(8.0 * z2 - 4.0)).exp();
        let got = exact_partition_function::<f64>(&p).unwrap().z;
        assert!((got - want).abs() <= 1e-15 * want);
    }

    #[test]
    fn incremental_energies_match_direct_sums() {
        // block boundaries are crossed at 13 sites
        let p = ModelParams::on_interval(1.3, 0.7, -6, 6).unwrap();
        let e = Engine::<f64>::new(&p).unwrap();
        let sites = p.lambda.as_slice().to_vec();
        let direct: f64 = (0u64..1 << 13)
            .map(|m| {
                let s: SiteSet = (0..13).filter(|i| m >> i & 1 == 1).map(|i| sites[i]).collect();
                (-0.7 * hamiltonian::<f64>(&SpinFlipConfig::from_interior(&s), &p)).exp()
            })
            .sum();
        let t = e.run(0, |_, _, _| {});
        assert!(((t.empty + t.rest) - direct).abs() <= 1e-12 * direct);
    }

    #[test]
    fn deterministic_and_precise() {
        let p = ModelParams::on_interval(2.0, 6.0, 0, 4).unwrap();
        let a = exact_partition_function::<f64>(&p).unwrap();
        let b = exact_partition_function::<f64>(&p).unwrap();
        assert_eq!(a.log_z.to_bits(), b.log_z.to_bits());
        let h = exact_partition_function::<Hp>(&p).unwrap();
        // log Z is tiny at low temperature and must not be lost in 1 + x
        assert!(a.log_z > 0.0 && a.log_z < 1e-15);
        assert!((h.log_z.to_f64() - a.log_z).abs() <= 1e-12 * a.log_z);
    }

    #[test]
    fn field_shift() {
        let mut f = polygas_core::Field::new();
        f.insert(0, -3.0);
        f.insert(1, 0.5);
        let p = ModelParams::on_interval(2.0, 2.0, 0, 2).unwrap().with_field(f).unwrap();
        let z = exact_partition_function::<f64>(&p).unwrap();
        let direct: f64 = (0u64..8)
            .map(|m| {
                let s: SiteSet = (0..3).filter(|i| m >> i & 1 == 1).collect();
                (-2.0 * polygas_core::hamiltonian_h::<f64>(&SpinFlipConfig::from_interior(&s), &p)).exp()
            })
            .sum();
        assert!((z.z - direct).abs() <= 1e-13 * direct);
        assert!((z.log_z - direct.ln()).abs() <= 1e-13);
    }

    #[test]
    fn expectations() {
        let p = ModelParams::on_interval(2.0, 0.0, 0, 4).unwrap();
        assert!((expectation(|_| 1.0, &p).unwrap() - 1.0).abs() < 1e-15);
        assert!(expectation(|s| s[2] as f64, &p).unwrap().abs() < 1e-15);
        let p = p.with_beta(2.0).unwrap();
        let m = expectation(|s| s[2] as f64, &p).unwrap();
        assert!(m > 0.0 && m < 1.0);
        // at beta 6 the minus density is far below double resolution of m
        let n = indicator_moments::<f64>(&[1 << 2], &p.with_beta(6.0).unwrap()).unwrap()[0];
        assert!(n > 0.0 && n < 1e-15);
        let big = MAX_ORACLE_SITES as i64;
        assert!(exact_partition_function::<f64>(&ModelParams::on_interval(2.0, 1.0, 0, big).unwrap()).is_err());
    }
}
