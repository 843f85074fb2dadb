//! Scalar abstraction over the floating-point carrier type.
//!
//! The numeric routines (series summation, quadrature, zeta evaluation) are
//! written once, generically, against this trait. `f32`/`f64` give fast
//! machine-precision instances; [`crate::Real`] gives arbitrary precision.
//! Constructors carry a precision argument in bits which machine floats
//! simply ignore (they clamp to their native precision).

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Floating-point carrier for the numeric engine.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Zero
    + One
    + Send
    + Sync
    + 'static
{
    fn from_u64_p(v: u64, prec: u32) -> Self;
    fn from_i64_p(v: i64, prec: u32) -> Self;
    fn from_u128_p(v: u128, prec: u32) -> Self;
    fn from_f64_p(v: f64, prec: u32) -> Self;
    fn from_bigint_p(v: &BigInt, prec: u32) -> Self;
    fn from_rational_p(q: &BigRational, prec: u32) -> Self;

    /// The constant pi at the given precision.
    fn pi_p(prec: u32) -> Self;

    /// Precision in bits carried by this value (53 for `f64`).
    fn precision(&self) -> u32;

    /// Rounds to a lower precision; a no-op for machine floats.
    fn round_to(&self, prec: u32) -> Self;

    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn sinh(&self) -> Self;
    fn cosh(&self) -> Self;
    fn abs(&self) -> Self;
    fn recip(&self) -> Self;

    /// Integer power with a non-negative exponent.
    fn powi(&self, n: u64) -> Self;

    /// Multiplies by 2^e exactly.
    fn ldexp(&self, e: i32) -> Self;

    /// Nearest `f64`, saturating on overflow. Used for reporting only.
    fn to_f64_lossy(&self) -> f64;

    fn is_negative(&self) -> bool;

    fn max_val(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    fn min_val(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }
}

/// Converts a big integer to `f64` through its top 64 mantissa bits.
///
/// `BigInt::to_f64` already does this correctly (round-to-nearest with
/// saturation), so this is a thin alias kept for symmetry with the
/// rational conversion below.
pub(crate) fn bigint_to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Converts a big rational to `f64` without overflowing on huge
/// numerator/denominator pairs: both are scaled down by a common power of
/// two before the division.
pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    let numer = q.numer();
    let denom = q.denom();
    if numer.is_zero() {
        return 0.0;
    }
    let nb = numer.bits() as i64;
    let db = denom.bits() as i64;
    // Keep ~80 significant bits in each operand.
    let ns = (nb - 80).max(0);
    let ds = (db - 80).max(0);
    let n = bigint_to_f64(&(numer >> ns as u64));
    let d = bigint_to_f64(&(denom >> ds as u64));
    let mut x = n / d;
    let shift = ns - ds;
    if shift != 0 {
        x *= 2f64.powi(shift.clamp(-2000, 2000) as i32);
    }
    x
}

macro_rules! impl_scalar_machine {
    ($t:ty, $bits:expr) => {
        impl Scalar for $t {
            fn from_u64_p(v: u64, _prec: u32) -> Self {
                v as $t
            }
            fn from_i64_p(v: i64, _prec: u32) -> Self {
                v as $t
            }
            fn from_u128_p(v: u128, _prec: u32) -> Self {
                v as $t
            }
            fn from_f64_p(v: f64, _prec: u32) -> Self {
                v as $t
            }
            fn from_bigint_p(v: &BigInt, _prec: u32) -> Self {
                bigint_to_f64(v) as $t
            }
            fn from_rational_p(q: &BigRational, _prec: u32) -> Self {
                rational_to_f64(q) as $t
            }
            fn pi_p(_prec: u32) -> Self {
                std::f64::consts::PI as $t
            }
            fn precision(&self) -> u32 {
                $bits
            }
            fn round_to(&self, _prec: u32) -> Self {
                *self
            }
            fn exp(&self) -> Self {
                <$t>::exp(*self)
            }
            fn ln(&self) -> Self {
                <$t>::ln(*self)
            }
            fn sqrt(&self) -> Self {
                <$t>::sqrt(*self)
            }
            fn sinh(&self) -> Self {
                <$t>::sinh(*self)
            }
            fn cosh(&self) -> Self {
                <$t>::cosh(*self)
            }
            fn abs(&self) -> Self {
                <$t>::abs(*self)
            }
            fn recip(&self) -> Self {
                <$t>::recip(*self)
            }
            fn powi(&self, n: u64) -> Self {
                // binary exponentiation; f64::powi takes i32 only
                let mut base = *self;
                let mut e = n;
                let mut acc: $t = 1.0;
                while e > 0 {
                    if e & 1 == 1 {
                        acc *= base;
                    }
                    base *= base;
                    e >>= 1;
                }
                acc
            }
            fn ldexp(&self, e: i32) -> Self {
                self * (2.0 as $t).powi(e)
            }
            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }
            fn is_negative(&self) -> bool {
                *self < 0.0
            }
        }
    };
}

impl_scalar_machine!(f64, 53);
impl_scalar_machine!(f32, 24);

/// Exact check used by tests: `q` in canonical form (reduced, positive denominator).
pub fn rational_is_canonical(q: &BigRational) -> bool {
    use num_integer::Integer;
    let g = q.numer().gcd(q.denom());
    q.denom().is_positive() && (g.is_one() || q.numer().is_zero())
}
