//! Truncated-series routes for the Euler sum `sigma(r, m)`: the defining
//! series `sum H_n^(r)/n^m` and the Hurwitz-zeta form
//! `sum H_n^(r-1) zeta(m, n)`.
//!
//! Each route reports a rigorous tail bound. The hyperharmonic growth bound
//! used throughout comes from the Conway–Guy identity:
//!
//! `H_n^(r) = C(n+r-1, r-1) (H_{n+r-1} - H_{r-1}) <= r n^(r-1) (1 + ln n)`
//!
//! since `C(n+r-1, r-1) = prod_{i<r} (n+i)/i <= r n^(r-1)` and the harmonic
//! difference is at most `H_n <= 1 + ln n`. Sums over `n > N` are then
//! bounded by integral comparison (the summands are decreasing):
//!
//! `sum_{n>N} n^-a <= N^(1-a)/(a-1)` and
//! `sum_{n>N} (1+ln n) n^-a <= N^(1-a) ((1+ln N)/(a-1) + 1/(a-1)^2)`.

use num_bigint::BigInt;

use crate::error::{check_precision, Error, Result};
use crate::numeric::zeta_numeric;
use crate::real::WORK_GUARD_BITS;
use crate::scalar::Scalar;

/// Default cap on the number of series terms.
pub const DEFAULT_TERM_CAP: u64 = 10_000_000;

/// Whether a truncated series met the requested tolerance or ran into the
/// term cap first.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SeriesStatus {
    TolMet,
    CapReached,
    /// The caller requested a fixed number of terms.
    FixedTerms,
}

/// A truncated series value together with a rigorous bound on the
/// truncation error (plus accumulated rounding slack).
#[derive(Clone, Debug)]
pub struct SeriesResult<T> {
    pub value: T,
    pub tail_bound: T,
    pub terms_used: u64,
    pub status: SeriesStatus,
}

/// Knobs shared by the series routes.
#[derive(Clone, Copy, Debug)]
pub struct SeriesParams {
    pub prec: u32,
    pub term_cap: u64,
}

impl Default for SeriesParams {
    fn default() -> Self {
        SeriesParams {
            prec: 128,
            term_cap: DEFAULT_TERM_CAP,
        }
    }
}

/// Inflation factor applied to tail bounds so that the handful of floating
/// operations used to evaluate them can never round a true bound downward.
fn inflate<T: Scalar>(wp: u32) -> T {
    T::from_f64_p(1.0 + 1e-6, wp)
}

/// Upper bound for `sum_{n>N} n^-a`, `a >= 2`.
fn s0_bound<T: Scalar>(a: u32, n: u64, wp: u32) -> T {
    let nf = T::from_u64_p(n, wp);
    let am1 = T::from_u64_p(a as u64 - 1, wp);
    nf.powi(a as u64 - 1).recip() / am1 * inflate::<T>(wp)
}

/// Upper bound for `sum_{n>N} (1 + ln n) n^-a`, `a >= 2`.
fn s1_bound<T: Scalar>(a: u32, n: u64, wp: u32) -> T {
    let nf = T::from_u64_p(n, wp);
    let am1 = T::from_u64_p(a as u64 - 1, wp);
    let one = T::from_u64_p(1, wp);
    let log_part = (one.clone() + nf.ln()) / am1.clone() + (am1.clone() * am1).recip();
    nf.powi(a as u64 - 1).recip() * log_part * inflate::<T>(wp)
}

/// Tail bound for the direct series: `sum_{n>N} H_n^(r)/n^m <= r * S1(m-r+1, N)`.
fn direct_tail_bound<T: Scalar>(r: u32, m: u32, n: u64, wp: u32) -> T {
    let a = m - r + 1; // >= 2 whenever m > r
    T::from_u64_p(r as u64, wp) * s1_bound::<T>(a, n, wp)
}

/// Tail bound for the Hurwitz form. Uses
/// `zeta(m, n) <= n^-m + n^(1-m)/(m-1)` (first term plus integral) and the
/// hyperharmonic growth bound on `H_n^(r-1)`.
fn hurwitz_tail_bound<T: Scalar>(r: u32, m: u32, n: u64, wp: u32) -> T {
    let inv_m1 = T::from_u64_p(m as u64 - 1, wp).recip();
    if r == 1 {
        // H_n^(0) = 1/n
        s0_bound::<T>(m + 1, n, wp) + inv_m1 * s0_bound::<T>(m, n, wp)
    } else {
        let a = m - r + 1; // m > r ensures a >= 2; second piece uses a+1
        let growth = T::from_u64_p(r as u64 - 1, wp);
        growth * (s1_bound::<T>(a + 1, n, wp) + inv_m1 * s1_bound::<T>(a, n, wp))
    }
}

/// Finds the smallest `N <= cap` whose tail bound is at most `tol`, or `cap`
/// if none qualifies.
fn choose_terms<T: Scalar>(tol: &T, cap: u64, bound: impl Fn(u64) -> T) -> (u64, T, SeriesStatus) {
    let mut hi = 16u64;
    while hi < cap && &bound(hi) > tol {
        hi = (hi * 2).min(cap);
    }
    let b_hi = bound(hi);
    if &b_hi > tol {
        return (cap, bound(cap), SeriesStatus::CapReached);
    }
    let mut lo = hi / 2; // bound(lo) > tol unless hi == 16
    if hi == 16 {
        lo = 1;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if &bound(mid) <= tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (hi, bound(hi), SeriesStatus::TolMet)
}

/// `1 / n^m` at working precision; goes through `u128` when it fits.
fn inv_int_pow<T: Scalar>(n: u64, m: u32, wp: u32) -> T {
    let wide = (n as u128).checked_pow(m);
    match wide {
        Some(v) => T::from_u128_p(v, wp).recip(),
        None => T::from_bigint_p(&BigInt::from(n).pow(m), wp).recip(),
    }
}

fn validate(r: u32, m: u32, prec: u32) -> Result<()> {
    check_precision(prec)?;
    if r < 1 {
        return Err(Error::domain("sigma(r, m) requires r >= 1"));
    }
    if m <= r {
        return Err(Error::domain(format!(
            "sigma({r}, {m}) diverges: convergence requires m > r"
        )));
    }
    Ok(())
}

/// Direct summation of the defining series `sigma(r, m) = sum H_n^(r)/n^m`.
///
/// Hyperharmonic values are carried as a rolling row of `r` prefix sums in
/// floating point, mirroring the recursion exactly. The reported
/// `tail_bound` adds the accumulated-rounding slack
/// `|value| * (N + 4) * 2^(2 - wp)` to the analytic truncation bound, so it
/// bounds the total absolute error of `value`.
pub fn sigma_series_direct<T: Scalar>(
    r: u32,
    m: u32,
    tol: &T,
    params: &SeriesParams,
) -> Result<SeriesResult<T>> {
    validate(r, m, params.prec)?;
    if tol <= &T::zero() {
        return Err(Error::domain("tolerance must be positive"));
    }
    let wp = params.prec + WORK_GUARD_BITS;
    let (n_terms, tail, status) = choose_terms(tol, params.term_cap, |n| {
        direct_tail_bound::<T>(r, m, n, wp)
    });

    let mut levels = vec![T::zero(); r as usize + 1];
    let mut value = T::zero();
    for n in 1..=n_terms {
        levels[0] = T::from_u64_p(n, wp).recip();
        for j in 1..=r as usize {
            let prev = levels[j - 1].clone();
            levels[j] += prev;
        }
        value += levels[r as usize].clone() * inv_int_pow::<T>(n, m, wp);
    }
    let slack = value.abs() * T::from_u64_p(n_terms + 4, wp).ldexp(2 - wp as i32);
    Ok(SeriesResult {
        value: value.round_to(params.prec),
        tail_bound: (tail + slack).round_to(params.prec),
        terms_used: n_terms,
        status,
    })
}

/// The Hurwitz-zeta form `sigma(r, m) = sum_{n>=1} H_n^(r-1) zeta(m, n)`.
///
/// `zeta(m, n) = zeta(m) - sum_{k<n} k^-m` is updated incrementally, so the
/// whole run needs a single zeta evaluation. The subtraction loses relative
/// accuracy as `zeta(m, n) -> 0`, but its absolute error stays at
/// `~zeta(m) 2^-wp` per term; the reported bound accounts for it through a
/// slack term proportional to `zeta(m) * H_N^(r)`.
pub fn sigma_series_hurwitz<T: Scalar>(
    r: u32,
    m: u32,
    tol: &T,
    params: &SeriesParams,
) -> Result<SeriesResult<T>> {
    validate(r, m, params.prec)?;
    if tol <= &T::zero() {
        return Err(Error::domain("tolerance must be positive"));
    }
    let wp = params.prec + WORK_GUARD_BITS;
    let (n_terms, tail, status) = choose_terms(tol, params.term_cap, |n| {
        hurwitz_tail_bound::<T>(r, m, n, wp)
    });

    let zeta_m: T = zeta_numeric(m, wp)?;
    let mut correction = T::zero(); // sum_{k<n} k^-m
    let mut levels = vec![T::zero(); r as usize]; // H_n^(0..r-1)
    let mut hyper_running = T::zero(); // sum_{k<=n} H_k^(r-1) = H_n^(r)
    let mut value = T::zero();
    for n in 1..=n_terms {
        let hurwitz = zeta_m.clone() - correction.clone();
        levels[0] = T::from_u64_p(n, wp).recip();
        for j in 1..r as usize {
            let prev = levels[j - 1].clone();
            levels[j] += prev;
        }
        let hyper = if r == 1 {
            levels[0].clone()
        } else {
            levels[r as usize - 1].clone()
        };
        hyper_running += hyper.clone();
        value += hyper * hurwitz;
        correction += inv_int_pow::<T>(n, m, wp);
    }
    let ops = T::from_u64_p(n_terms + 4, wp).ldexp(2 - wp as i32);
    let slack = (value.abs() + zeta_m * hyper_running) * ops;
    Ok(SeriesResult {
        value: value.round_to(params.prec),
        tail_bound: (tail + slack).round_to(params.prec),
        terms_used: n_terms,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::sigma_closed_form;
    use crate::real::Real;

    fn params(prec: u32) -> SeriesParams {
        SeriesParams {
            prec,
            term_cap: DEFAULT_TERM_CAP,
        }
    }

    #[test]
    fn rejects_divergent_and_bad_inputs() {
        let tol = Real::from_f64(1e-6, 128);
        assert!(sigma_series_direct::<Real>(2, 2, &tol, &params(128)).is_err());
        assert!(sigma_series_direct::<Real>(0, 3, &tol, &params(128)).is_err());
        assert!(sigma_series_hurwitz::<Real>(3, 2, &tol, &params(128)).is_err());
        let bad = Real::from_f64(0.0, 128);
        assert!(sigma_series_direct::<Real>(1, 3, &bad, &params(128)).is_err());
        assert!(sigma_series_direct::<Real>(1, 3, &tol, &params(40)).is_err());
    }

    #[test]
    fn example_sigma_1_2() {
        // m = r + 1 converges like (ln N)/N; a 1e-5 tolerance is reachable
        let tol = Real::from_f64(1e-5, 128);
        let res = sigma_series_direct::<Real>(1, 2, &tol, &params(128)).unwrap();
        assert_eq!(res.status, SeriesStatus::TolMet);
        assert!(res.tail_bound.to_f64() <= 1.01e-5);
        let target = Real::parse_decimal("2.40411380631918857079947632302", 160).unwrap();
        let err = (res.value.clone() - target.clone()).abs_val().to_f64();
        assert!(
            err <= res.tail_bound.to_f64(),
            "err {err:.3e} > bound {:.3e}",
            res.tail_bound.to_f64()
        );
        // a tolerance that needs ~2e9 terms must stop at the cap and say so
        let tight = SeriesParams {
            prec: 128,
            term_cap: 100_000,
        };
        let strict = Real::from_f64(1e-8, 128);
        let capped = sigma_series_direct::<Real>(1, 2, &strict, &tight).unwrap();
        assert_eq!(capped.status, SeriesStatus::CapReached);
        assert_eq!(capped.terms_used, 100_000);
        let err = (capped.value.clone() - target).abs_val().to_f64();
        assert!(err <= capped.tail_bound.to_f64());
    }

    #[test]
    fn example_sigma_2_3_matches_closed_form() {
        let tol = Real::from_f64(1e-6, 128);
        let res = sigma_series_direct::<Real>(2, 3, &tol, &params(128)).unwrap();
        let closed: Real = sigma_closed_form(2, 3).unwrap().evaluate(160).unwrap();
        let err = (res.value.clone() - closed).abs_val().to_f64();
        assert!(err <= res.tail_bound.to_f64());
        // value approaches 2.1120837816...
        assert!((res.value.to_f64() - 2.112083781609885).abs() < 1e-5);
    }

    #[test]
    fn example_sigma_1_3_and_1_4() {
        // sigma(1, 3) = pi^4 / 72
        let tol = Real::from_f64(1e-10, 128);
        let res = sigma_series_direct::<Real>(1, 3, &tol, &params(128)).unwrap();
        let target = Real::pi(192).powi_val(4) / Real::from_u64(72, 192);
        let err = (res.value.clone() - target).abs_val().to_f64();
        assert!(err <= res.tail_bound.to_f64(), "sigma(1,3) err {err:.3e}");

        // sigma(1, 4) = 3 zeta(5) - zeta(2) zeta(3)
        let res = sigma_series_direct::<Real>(1, 4, &tol, &params(128)).unwrap();
        let closed: Real = sigma_closed_form(1, 4).unwrap().evaluate(192).unwrap();
        let err = (res.value.clone() - closed).abs_val().to_f64();
        assert!(err <= res.tail_bound.to_f64(), "sigma(1,4) err {err:.3e}");
        assert!((res.value.to_f64() - 1.1334789151328137).abs() < 1e-9);
    }

    #[test]
    fn hurwitz_route_agrees_with_direct() {
        for (r, m, t) in [(1u32, 2u32, 1e-4), (2, 3, 1e-4), (2, 4, 1e-6), (3, 5, 1e-6)] {
            let tol = Real::from_f64(t, 128);
            let a = sigma_series_direct::<Real>(r, m, &tol, &params(128)).unwrap();
            let b = sigma_series_hurwitz::<Real>(r, m, &tol, &params(128)).unwrap();
            let gap = (a.value.clone() - b.value.clone()).abs_val().to_f64();
            let allowed = a.tail_bound.to_f64() + b.tail_bound.to_f64();
            assert!(gap <= allowed, "({r},{m}): gap {gap:.3e} > {allowed:.3e}");
        }
    }

    #[test]
    fn cap_reached_is_reported() {
        let tol = Real::from_f64(1e-30, 64);
        let tight = SeriesParams {
            prec: 64,
            term_cap: 1000,
        };
        let res = sigma_series_direct::<Real>(1, 3, &tol, &tight).unwrap();
        assert_eq!(res.status, SeriesStatus::CapReached);
        assert_eq!(res.terms_used, 1000);
        assert!(res.tail_bound.to_f64() > 1e-30);
        // the bound is still honest
        let closed: Real = sigma_closed_form(1, 3).unwrap().evaluate(128).unwrap();
        let err = (res.value.clone() - closed).abs_val().to_f64();
        assert!(err <= res.tail_bound.to_f64());
    }

    /// The reported bound must hold on the whole 1 <= r <= 4, m <= r+4 grid
    /// against 192-bit closed forms (slow m = r+1 cells run at a looser
    /// stopping tolerance; the bound must contain the error either way).
    #[test]
    fn bound_honesty_grid() {
        for r in 1..=4u32 {
            for m in (r + 1)..=(r + 4) {
                let tol = Real::from_f64(if m == r + 1 { 1e-4 } else { 1e-7 }, 128);
                let res = sigma_series_direct::<Real>(r, m, &tol, &params(128)).unwrap();
                let closed: Real = sigma_closed_form(r, m).unwrap().evaluate(192).unwrap();
                let err = (res.value.clone() - closed).abs_val().to_f64();
                assert!(
                    err <= res.tail_bound.to_f64(),
                    "({r},{m}): err {err:.3e} > bound {:.3e}",
                    res.tail_bound.to_f64()
                );
            }
        }
    }

    /// f64 instantiation of the generic engine stays sane.
    #[test]
    fn f64_instance_works() {
        let res = sigma_series_direct::<f64>(
            1,
            3,
            &1e-6,
            &SeriesParams {
                prec: 53,
                term_cap: DEFAULT_TERM_CAP,
            },
        )
        .unwrap();
        assert!((res.value - 1.3529040421389227).abs() < 2e-6);
    }
}
