use serde::{Deserialize, Serialize};

use polygas_core::{coupling, Error, ModelParams, Result};

/// Spins outside the volume.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Plus,
    Minus,
}

impl Boundary {
    fn sign(self) -> f64 {
        match self {
            Boundary::Plus => 1.0,
            Boundary::Minus => -1.0,
        }
    }
}

/// `sum over pairs meeting the volume of J (w_x w_y - s_x s_y)` plus the
/// field term `-sum h_x (s_x - w)`, with the outside sum in closed form:
/// a site sees `2 zeta - sum_{y in volume} J` from the exterior.
pub fn spin_energy(spins: &[i8], omega: Boundary, p: &ModelParams) -> f64 {
    let sites = p.lambda.as_slice();
    let w = omega.sign();
    let z2 = 2.0 * p.zeta_alpha();
    let mut h = 0.0;
    for (i, &x) in sites.iter().enumerate() {
        let si = spins[i] as f64;
        let mut inside = 0.0;
        for (j, &y) in sites.iter().enumerate() {
            if j != i {
                let j_xy = coupling(x - y, p.alpha);
                inside += j_xy;
                if j > i {
                    h += j_xy * (1.0 - si * spins[j] as f64);
                }
            }
        }
        h += (z2 - inside) * (1.0 - w * si);
        h -= p.h(x) * (si - w);
    }
    h
}

/// Direct double-sum partition function, independent of the bond
/// representation and of the incremental engine.
pub fn spin_partition_function(p: &ModelParams, omega: Boundary) -> Result<f64> {
    let n = p.lambda.len();
    if n > 16 {
        return Err(Error::infeasible("spin-sum volume", n, 16));
    }
    let mut z = 0.0;
    for mask in 0u64..1 << n {
        let spins: Vec<i8> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        z += (-p.beta * spin_energy(&spins, omega, p)).exp();
    }
    Ok(z)
}
