use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;

/// Scalar field used by the energy, oracle and polymer code.
///
/// `f64` is the default. [`Hp`] carries [`HP_BITS`] bits and is used where
/// identities must be resolved far below double precision, e.g. when the
/// successive errors of a cluster series sit fifty digits under `log Z`.
pub trait Real:
    Clone
    + PartialOrd
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Exact lift of a double.
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn exp(&self) -> Self;
    /// `exp(x) - 1` without cancellation near zero.
    fn exp_m1(&self) -> Self;
    fn ln(&self) -> Self;
    fn ln_1p(&self) -> Self;
    fn abs(&self) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn from_usize(n: usize) -> Self {
        Self::from_f64(n as f64)
    }

    fn is_zero(&self) -> bool {
        self.to_f64() == 0.0 && *self == Self::zero()
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn exp_m1(&self) -> Self {
        f64::exp_m1(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn ln_1p(&self) -> Self {
        f64::ln_1p(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
}

/// Working precision of [`Hp`], in bits (about 96 decimal digits).
pub const HP_BITS: usize = 320;

type Big = FBig<HalfEven, 2>;

/// Binary floating point number with [`HP_BITS`] bits of mantissa.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Hp(Big);

impl Hp {
    fn wrap(x: Big) -> Self {
        Hp(x.with_precision(HP_BITS).value())
    }
}

impl fmt::Debug for Hp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hp({:e})", self.to_f64())
    }
}

impl fmt::Display for Hp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

macro_rules! hp_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Hp {
            type Output = Hp;
            fn $m(self, rhs: Hp) -> Hp {
                Hp::wrap($tr::$m(self.0, rhs.0))
            }
        }
    };
}

hp_binop!(Add, add);
hp_binop!(Sub, sub);
hp_binop!(Mul, mul);
hp_binop!(Div, div);

impl Neg for Hp {
    type Output = Hp;
    fn neg(self) -> Hp {
        Hp(-self.0)
    }
}

impl Real for Hp {
    fn from_f64(x: f64) -> Self {
        let b = Big::try_from(x).expect("finite double");
        Hp::wrap(b)
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }
    fn exp(&self) -> Self {
        Hp::wrap(self.0.exp())
    }
    fn exp_m1(&self) -> Self {
        Hp::wrap(self.0.exp_m1())
    }
    fn ln(&self) -> Self {
        Hp::wrap(self.0.ln())
    }
    fn ln_1p(&self) -> Self {
        Hp::wrap(self.0.ln_1p())
    }
    fn abs(&self) -> Self {
        if self.0 < Big::ZERO {
            Hp(-self.0.clone())
        } else {
            self.clone()
        }
    }
    fn is_zero(&self) -> bool {
        self.0 == Big::ZERO
    }
}
