//! Configuration algebra on the dual lattice of the one-dimensional
//! long-range Ising chain with coupling `J(r) = r^(-alpha)`, `1 < alpha <= 2`.
//!
//! Spin configurations with plus boundary condition are encoded by their
//! spin flips: the finite, even set of dual bonds where the sign changes.
//! A dual bond between sites `x` and `x + 1` is stored as the odd integer
//! `2x + 1`, so every position is exact.
//!
//! Energies are resolved in closed form: the infinite plus tail is absorbed
//! into `4 zeta(alpha)` per minus site, so no truncation enters `H`.

mod energy;
mod error;
mod lattice;
mod params;
mod real;
mod sum;
mod zeta;

pub use energy::{
    coupling, field_energy, hamiltonian, hamiltonian_h, interior_energy, interior_field_energy, phi,
    phi_checked,
};
pub use error::{Error, Result};
pub use lattice::{boundary, minus_interior, spins_on, SiteSet, SpinFlipConfig};
pub use params::{Field, ModelParams};
pub use real::{Hp, Real, HP_BITS};
pub use sum::pairwise_sum;
pub use zeta::{zeta, ZETA_ABS_ERROR};
