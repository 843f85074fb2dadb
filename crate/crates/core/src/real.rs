//! Arbitrary-precision real numbers.
//!
//! [`Real`] wraps `astro_float::BigFloat` and carries an explicit working
//! precision in bits. Binary operations produce results at the larger of the
//! two operand precisions, rounded to even. Transcendental functions are
//! evaluated at the operand's precision.
//!
//! A value at precision `p` produced by a single operation carries relative
//! error at most `2^(1-p)`; composite routines in this crate work internally
//! at `p + WORK_GUARD_BITS` so their results honor the documented
//! `2^(-p + GUARD_BITS)` contract.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Mutex;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Guard-digit allowance: results of the documented operations carry
/// relative error at most `2^(-precision + GUARD_BITS)`.
pub const GUARD_BITS: u32 = 8;

/// Extra bits of internal working precision used by composite routines to
/// stay within the [`GUARD_BITS`] contract.
pub const WORK_GUARD_BITS: u32 = 32;

/// Smallest precision carried by `Real` values such as `Zero::zero()` that
/// are created without an explicit precision. Since operations take the
/// maximum precision of their operands, these neutral values never lower
/// the precision of a computation.
const NEUTRAL_PREC: u32 = 64;

const RM: RoundingMode = RoundingMode::ToEven;

/// Shared cache of fundamental constants (pi, e, ln 2, ln 10) used by
/// astro-float. Protected by a mutex so concurrent callers are safe.
static CONSTS: Lazy<Mutex<Consts>> =
    Lazy::new(|| Mutex::new(Consts::new().expect("constants cache allocation")));

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    let mut cc = CONSTS.lock().expect("constants cache lock");
    f(&mut cc)
}

/// Arbitrary-precision binary floating-point number with explicit precision.
#[derive(Clone)]
pub struct Real {
    inner: BigFloat,
    prec: u32,
}

impl Real {
    /// Zero at the given precision.
    pub fn zero_p(prec: u32) -> Self {
        Real {
            inner: BigFloat::from_word(0, prec as usize),
            prec,
        }
    }

    pub fn from_u64(v: u64, prec: u32) -> Self {
        Real {
            inner: BigFloat::from_u64(v, prec as usize),
            prec,
        }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Real {
            inner: BigFloat::from_i64(v, prec as usize),
            prec,
        }
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        Real {
            inner: BigFloat::from_f64(v, prec.max(64) as usize),
            prec,
        }
    }

    pub fn from_u128(v: u128, prec: u32) -> Self {
        let hi = (v >> 64) as u64;
        let lo = v as u64;
        if hi == 0 {
            return Real::from_u64(lo, prec);
        }
        let mut x = BigFloat::from_u64(hi, 128.max(prec as usize));
        shift_exponent(&mut x, 64);
        // add_full_prec misbehaves on zero operands; skip them
        if lo != 0 {
            x = x.add_full_prec(&BigFloat::from_u64(lo, 64));
        }
        Real::from_bigfloat(x, prec)
    }

    /// Converts an arbitrary-precision integer exactly, then rounds once to
    /// `prec` bits.
    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        let (sign, digits) = v.to_u64_digits();
        // digits are little-endian; accumulate from the most significant word
        let mut acc: Option<BigFloat> = None;
        for d in digits.iter().rev() {
            match acc {
                Some(mut x) => {
                    shift_exponent(&mut x, 64);
                    if *d != 0 {
                        x = x.add_full_prec(&BigFloat::from_u64(*d, 64));
                    }
                    acc = Some(x);
                }
                None => {
                    // the leading word of a normalized BigInt is nonzero
                    acc = Some(BigFloat::from_u64(*d, 64));
                }
            }
        }
        let mut x = acc.unwrap_or_else(|| BigFloat::from_word(0, 64));
        if sign == num_bigint::Sign::Minus {
            x = BigFloat::neg(&x);
        }
        Real::from_bigfloat(x, prec)
    }

    /// Converts an exact rational with a single correctly-rounded division.
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let n = Real::from_bigint_exact(q.numer());
        let d = Real::from_bigint_exact(q.denom());
        Real {
            inner: n.div(&d, prec as usize, RM),
            prec,
        }
    }

    fn from_bigint_exact(v: &BigInt) -> BigFloat {
        let bits = v.bits().max(64);
        Real::from_bigint(v, bits as u32).inner
    }

    fn from_bigfloat(mut x: BigFloat, prec: u32) -> Self {
        let _ = x.set_precision(prec as usize, RM);
        Real { inner: x, prec }
    }

    /// pi at the given precision (computed with guard bits, rounded once).
    pub fn pi(prec: u32) -> Self {
        let raw = with_consts(|cc| cc.pi((prec + WORK_GUARD_BITS) as usize, RM));
        Real::from_bigfloat(raw, prec)
    }

    pub fn precision_bits(&self) -> u32 {
        self.prec
    }

    /// Re-rounds the value to a different precision.
    pub fn with_precision(&self, prec: u32) -> Self {
        let mut x = self.inner.clone();
        let _ = x.set_precision(prec as usize, RM);
        Real { inner: x, prec }
    }

    pub fn is_zero_val(&self) -> bool {
        self.inner.is_zero()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.inner.is_negative()
    }

    pub fn abs_val(&self) -> Self {
        Real {
            inner: self.inner.abs(),
            prec: self.prec,
        }
    }

    pub fn recip_val(&self) -> Self {
        Real {
            inner: self.inner.reciprocal(self.prec as usize, RM),
            prec: self.prec,
        }
    }

    pub fn exp_val(&self) -> Self {
        Real {
            inner: with_consts(|cc| self.inner.exp(self.prec as usize, RM, cc)),
            prec: self.prec,
        }
    }

    pub fn ln_val(&self) -> Self {
        Real {
            inner: with_consts(|cc| self.inner.ln(self.prec as usize, RM, cc)),
            prec: self.prec,
        }
    }

    pub fn sqrt_val(&self) -> Self {
        Real {
            inner: self.inner.sqrt(self.prec as usize, RM),
            prec: self.prec,
        }
    }

    pub fn sinh_val(&self) -> Self {
        Real {
            inner: with_consts(|cc| self.inner.sinh(self.prec as usize, RM, cc)),
            prec: self.prec,
        }
    }

    pub fn cosh_val(&self) -> Self {
        Real {
            inner: with_consts(|cc| self.inner.cosh(self.prec as usize, RM, cc)),
            prec: self.prec,
        }
    }

    pub fn powi_val(&self, n: u64) -> Self {
        if n == 0 {
            return Real::from_u64(1, self.prec);
        }
        Real {
            inner: self.inner.powi(n as usize, self.prec as usize, RM),
            prec: self.prec,
        }
    }

    /// Multiplies by `2^e` exactly (exponent manipulation, no rounding).
    pub fn ldexp_val(&self, e: i32) -> Self {
        if self.inner.is_zero() || self.inner.is_inf() || self.inner.is_nan() {
            return self.clone();
        }
        let mut x = self.inner.clone();
        shift_exponent(&mut x, e);
        Real {
            inner: x,
            prec: self.prec,
        }
    }

    pub fn to_f64(&self) -> f64 {
        bigfloat_to_f64(&self.inner)
    }

    /// Renders with `sig` significant decimal digits, round-half-even on the
    /// decimal digit string. Output is scientific (`d.ddd...e±k`) when the
    /// decimal exponent falls outside `[-4, sig + 4]`, positional otherwise.
    pub fn to_decimal(&self, sig: usize) -> String {
        decimal_string(&self.inner, sig.max(1))
    }

    /// Parses a decimal string (integer, fixed-point, or scientific).
    pub fn parse_decimal(s: &str, prec: u32) -> Result<Self> {
        let inner = with_consts(|cc| BigFloat::parse(s, Radix::Dec, prec as usize, RM, cc));
        if inner.is_nan() {
            return Err(Error::Parse(format!("invalid decimal number: {s:?}")));
        }
        Ok(Real { inner, prec })
    }

    fn binop(&self, rhs: &Real, f: impl FnOnce(&BigFloat, &BigFloat, usize) -> BigFloat) -> Real {
        let p = self.prec.max(rhs.prec);
        Real {
            inner: f(&self.inner, &rhs.inner, p as usize),
            prec: p,
        }
    }
}

fn shift_exponent(x: &mut BigFloat, delta: i32) {
    if let Some(e) = x.exponent() {
        x.set_exponent(e + delta);
    }
}

fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    if x.is_zero() {
        return 0.0;
    }
    // value = m * 2^e with the mantissa words little-endian and the top bit
    // of the last word set (m interpreted as a fraction in [0.5, 1)).
    let e = x.exponent().unwrap_or(0);
    let words = x.mantissa_digits().unwrap_or(&[]);
    let mut frac = 0.0f64;
    let n = words.len();
    if n >= 1 {
        frac += words[n - 1] as f64 / 2f64.powi(64);
    }
    if n >= 2 {
        frac += words[n - 2] as f64 / 2f64.powi(127) / 2.0;
    }
    let mag = if e > 1030 {
        f64::INFINITY
    } else if e < -1060 {
        0.0
    } else {
        frac * 2f64.powi(e)
    };
    if x.is_negative() {
        -mag
    } else {
        mag
    }
}

/// Decimal rendering with round-half-even at `sig` digits.
fn decimal_string(x: &BigFloat, sig: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_inf_pos() {
        return "inf".into();
    }
    if x.is_inf_neg() {
        return "-inf".into();
    }
    if x.is_zero() {
        return "0".into();
    }
    let (sign, digits, exp10) =
        match with_consts(|cc| x.convert_to_radix(Radix::Dec, RoundingMode::None, cc)) {
            Ok(t) => t,
            Err(_) => return "nan".into(),
        };
    // value = 0.d1 d2 ... * 10^exp10
    let mut ds: Vec<u8> = digits;
    // Strip leading zeros that convert_to_radix may emit.
    let mut exp = exp10 as i64;
    while ds.first() == Some(&0) {
        ds.remove(0);
        exp -= 1;
    }
    if ds.is_empty() {
        return "0".into();
    }
    // Round half-even at `sig` digits.
    if ds.len() > sig {
        let next = ds[sig];
        let rest_nonzero = ds[sig + 1..].iter().any(|&d| d != 0);
        let round_up = next > 5 || (next == 5 && (rest_nonzero || ds[sig - 1] % 2 == 1));
        ds.truncate(sig);
        if round_up {
            let mut i = sig;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    exp += 1;
                    ds.truncate(sig);
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
    }
    // Trim trailing zeros (keep at least one digit).
    while ds.len() > 1 && ds.last() == Some(&0) {
        ds.pop();
    }
    let neg = sign == Sign::Neg;
    format_digits(&ds, exp, neg, sig)
}

fn format_digits(ds: &[u8], exp: i64, neg: bool, sig: usize) -> String {
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    let dig = |d: u8| (b'0' + d) as char;
    if exp >= -3 && exp <= sig as i64 + 4 {
        // positional
        if exp <= 0 {
            s.push_str("0.");
            for _ in 0..(-exp) {
                s.push('0');
            }
            for &d in ds {
                s.push(dig(d));
            }
        } else if (exp as usize) >= ds.len() {
            for &d in ds {
                s.push(dig(d));
            }
            for _ in 0..(exp as usize - ds.len()) {
                s.push('0');
            }
        } else {
            for (i, &d) in ds.iter().enumerate() {
                if i == exp as usize {
                    s.push('.');
                }
                s.push(dig(d));
            }
        }
    } else {
        // scientific: d.ddd e (exp-1)
        s.push(dig(ds[0]));
        if ds.len() > 1 {
            s.push('.');
            for &d in &ds[1..] {
                s.push(dig(d));
            }
        }
        s.push('e');
        let e = exp - 1;
        if e >= 0 {
            s.push('+');
        }
        s.push_str(&e.to_string());
    }
    s
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({}, {} bits)", self.to_decimal(20), self.prec)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = ((self.prec as f64) * std::f64::consts::LOG10_2).floor() as usize;
        write!(f, "{}", self.to_decimal(sig.max(6)))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.inner.partial_cmp(&other.inner)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $astro:ident) => {
        impl $trait for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.binop(&rhs, |a, b, p| a.$astro(b, p, RM))
            }
        }
        impl<'a> $trait<&'a Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &'a Real) -> Real {
                self.binop(rhs, |a, b, p| a.$astro(b, p, RM))
            }
        }
        impl<'a> $trait<Real> for &'a Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.binop(&rhs, |a, b, p| a.$astro(b, p, RM))
            }
        }
        impl<'a, 'b> $trait<&'b Real> for &'a Real {
            type Output = Real;
            fn $method(self, rhs: &'b Real) -> Real {
                self.binop(rhs, |a, b, p| a.$astro(b, p, RM))
            }
        }
    };
}

impl_binop!(Add, add, add);
impl_binop!(Sub, sub, sub);
impl_binop!(Mul, mul, mul);
impl_binop!(Div, div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real {
            inner: BigFloat::neg(&self.inner),
            prec: self.prec,
        }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real {
            inner: BigFloat::neg(&self.inner),
            prec: self.prec,
        }
    }
}

impl AddAssign for Real {
    fn add_assign(&mut self, rhs: Real) {
        *self = self.clone() + rhs;
    }
}
impl SubAssign for Real {
    fn sub_assign(&mut self, rhs: Real) {
        *self = self.clone() - rhs;
    }
}
impl MulAssign for Real {
    fn mul_assign(&mut self, rhs: Real) {
        *self = self.clone() * rhs;
    }
}
impl DivAssign for Real {
    fn div_assign(&mut self, rhs: Real) {
        *self = self.clone() / rhs;
    }
}

impl Zero for Real {
    fn zero() -> Self {
        Real::zero_p(NEUTRAL_PREC)
    }
    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }
}

impl One for Real {
    fn one() -> Self {
        Real::from_u64(1, NEUTRAL_PREC)
    }
}

impl Scalar for Real {
    fn from_u64_p(v: u64, prec: u32) -> Self {
        Real::from_u64(v, prec)
    }
    fn from_i64_p(v: i64, prec: u32) -> Self {
        Real::from_i64(v, prec)
    }
    fn from_u128_p(v: u128, prec: u32) -> Self {
        Real::from_u128(v, prec)
    }
    fn from_f64_p(v: f64, prec: u32) -> Self {
        Real::from_f64(v, prec)
    }
    fn from_bigint_p(v: &BigInt, prec: u32) -> Self {
        Real::from_bigint(v, prec)
    }
    fn from_rational_p(q: &BigRational, prec: u32) -> Self {
        Real::from_rational(q, prec)
    }
    fn pi_p(prec: u32) -> Self {
        Real::pi(prec)
    }
    fn precision(&self) -> u32 {
        self.prec
    }
    fn round_to(&self, prec: u32) -> Self {
        self.with_precision(prec)
    }
    fn exp(&self) -> Self {
        self.exp_val()
    }
    fn ln(&self) -> Self {
        self.ln_val()
    }
    fn sqrt(&self) -> Self {
        self.sqrt_val()
    }
    fn sinh(&self) -> Self {
        self.sinh_val()
    }
    fn cosh(&self) -> Self {
        self.cosh_val()
    }
    fn abs(&self) -> Self {
        self.abs_val()
    }
    fn recip(&self) -> Self {
        self.recip_val()
    }
    fn powi(&self, n: u64) -> Self {
        self.powi_val(n)
    }
    fn ldexp(&self, e: i32) -> Self {
        self.ldexp_val(e)
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64()
    }
    fn is_negative(&self) -> bool {
        self.is_sign_negative()
    }
}
