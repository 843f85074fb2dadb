//! Euler sums of hyperharmonic numbers, `sigma(r, m) = sum_{n>=1} H_n^(r)/n^m`,
//! computed by three independent routes that cross-validate each other:
//!
//! - an exact symbolic closed form over zeta values and Stirling numbers
//!   ([`expr::sigma_closed_form`]),
//! - high-precision series summation, both of the defining series and of the
//!   Hurwitz-zeta form ([`series`]),
//! - double-exponential quadrature of the integral representation
//!   ([`quadrature::sigma_integral`]).
//!
//! The numeric layer is generic over the scalar carrier through the
//! [`Scalar`] trait: `f32`/`f64` for machine precision, [`Real`] (an
//! arbitrary-precision float with explicit precision in bits) for everything
//! serious. Exact combinatorics live on [`Rational`]/[`Natural`].

pub mod error;
pub mod exact;
pub mod expr;
pub mod numeric;
pub mod quadrature;
pub mod real;
pub mod scalar;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use expr::{Basis, ZetaExpression, ZetaMonomial};
pub use quadrature::{QuadratureParams, QuadratureResult};
pub use real::{Real, GUARD_BITS, WORK_GUARD_BITS};
pub use scalar::Scalar;
pub use series::{SeriesParams, SeriesResult, SeriesStatus, DEFAULT_TERM_CAP};
pub use verify::{CheckResult, Report, SuiteGrid};

/// Exact rational value type used by the combinatorial layer.
pub type Rational = num_rational::BigRational;
/// Exact non-negative integer type.
pub type Natural = num_bigint::BigUint;
