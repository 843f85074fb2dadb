//! Double-exponential (tanh-sinh) quadrature for the integral
//! representation of `sigma(r, m)` and for the inner integrals of the
//! alternate series-of-integrals form.
//!
//! The semi-infinite integral
//! `I = int_0^inf t^(m-1) ln(1-e^-t) / (1-e^-t)^r dt`
//! is mapped by `u = 1 - e^-t` onto the unit interval:
//! `I = int_0^1 (-ln(1-u))^(m-1) ln(u) / (u^r (1-u)) du`,
//! whose endpoint singularities (`u^(m-1-r) ln u` at 0, a log power at 1)
//! tanh-sinh absorbs. Then `sigma(r, m) = -I/(m-1)!`.
//!
//! Abscissas use `u = 1/(1 + e^(-2g))`, `1-u = e^(-2g)/(1 + e^(-2g))` with
//! `g = (pi/2) sinh(t)`, so `u` and `1-u` are obtained separately without
//! cancellation, arbitrarily close to the endpoints. The weight simplifies
//! to `w = h pi cosh(t) u (1-u)`.

use crate::error::{check_precision, Error, Result};
use crate::exact::factorial;
use crate::real::WORK_GUARD_BITS;
use crate::scalar::Scalar;
use crate::series::{SeriesResult, SeriesStatus};

/// Quadrature outcome: value, level-difference error estimate (heuristic),
/// and the number of integrand evaluations.
#[derive(Clone, Debug)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub error_estimate: T,
    pub evaluations: u64,
    /// Deepest tanh-sinh level used (step `h = 2^-level`).
    pub levels: u32,
}

/// Tanh-sinh refinement limits.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureParams {
    pub prec: u32,
    pub min_level: u32,
    pub max_level: u32,
}

impl Default for QuadratureParams {
    fn default() -> Self {
        QuadratureParams {
            prec: 128,
            min_level: 3,
            max_level: 12,
        }
    }
}

impl QuadratureParams {
    pub fn with_prec(prec: u32) -> Self {
        QuadratureParams {
            prec,
            ..Default::default()
        }
    }
}

/// One abscissa of the substituted integrand: `u`, `1-u`, both logarithms,
/// and the weight factor `c = pi cosh(t) u (1-u)` (the step `h` is applied
/// at summation time).
struct GridPoint<T> {
    u: T,
    omu: T,
    ln_u: T,
    neg_ln_omu: T,
    c: T,
}

/// `ln(x)` where `complement = 1 - x` is known exactly enough; switches to
/// the series `ln(1-c) = -c (1 + c/2 + c^2/3 + ...)` once `x` is so close
/// to 1 that it rounds to 1 at working precision.
fn ln_via_complement<T: Scalar>(x: &T, complement: &T, wp: u32) -> T {
    let tiny = T::from_u64_p(1, wp).ldexp(-(wp as i32) / 2);
    if complement < &tiny {
        let half = T::from_f64_p(0.5, wp);
        let third = T::from_u64_p(3, wp).recip();
        let c2 = complement.clone() * complement.clone();
        -(complement.clone() + c2.clone() * half + c2 * complement.clone() * third)
    } else {
        x.ln()
    }
}

/// Generates the new grid points of the given refinement level (positive
/// `t` side; each yields the mirrored point too). Level 0 holds the integer
/// abscissas including `t = 0`.
fn build_level<T: Scalar>(level: u32, t_max: f64, wp: u32) -> Vec<GridPoint<T>> {
    let mut pts = Vec::new();
    let pi = T::pi_p(wp);
    let half_pi = pi.clone().ldexp(-1);
    let indices: Vec<u64> = if level == 0 {
        (0..=t_max.floor() as u64).collect()
    } else {
        let h = 0.5f64.powi(level as i32);
        (1..)
            .map(|j| 2 * j - 1)
            .take_while(|&j| (j as f64) * h <= t_max)
            .collect()
    };
    for j in indices {
        let t = T::from_u64_p(j, wp).ldexp(-(level as i32));
        let g = half_pi.clone() * t.sinh();
        let em2g = (-(g.clone() + g)).exp();
        let u = (T::from_u64_p(1, wp) + em2g.clone()).recip();
        let omu = em2g * u.clone();
        let c = pi.clone() * t.cosh() * u.clone() * omu.clone();
        let lu = ln_via_complement(&u, &omu, wp);
        let lo = ln_via_complement(&omu, &u, wp);
        if j == 0 {
            // t = 0: u = 1-u = 1/2, single point
            pts.push(GridPoint {
                u,
                omu,
                ln_u: lu.clone(),
                neg_ln_omu: -lo,
                c,
            });
        } else {
            pts.push(GridPoint {
                u: u.clone(),
                omu: omu.clone(),
                ln_u: lu.clone(),
                neg_ln_omu: -lo.clone(),
                c: c.clone(),
            });
            // mirrored point t -> -t swaps u and 1-u
            pts.push(GridPoint {
                u: omu,
                omu: u,
                ln_u: lo,
                neg_ln_omu: -lu,
                c,
            });
        }
    }
    pts
}

/// Truncation point of the doubly-exponential tails: far enough out that
/// `u (1-u) ~ e^(-2g)` underflows the working precision with a margin for
/// the integrand's polynomial-log growth.
fn t_cutoff(wp: u32, growth_margin_bits: u32) -> f64 {
    let g_max = std::f64::consts::LN_2 * 0.5 * (wp + 48 + growth_margin_bits) as f64;
    (2.0 * g_max / std::f64::consts::PI).asinh()
}

struct Integration<T> {
    value: T,
    error_estimate: T,
    evaluations: u64,
    level: u32,
    grid: Vec<(u32, Vec<GridPoint<T>>)>,
}

/// Adaptive tanh-sinh driver. Each level halves the step; the estimate
/// `I_L = h_L sum c_i f_i` converges doubly exponentially, and the
/// level-to-level difference serves as the (strongly conservative) error
/// estimate.
fn integrate<T: Scalar>(
    f: impl Fn(&GridPoint<T>) -> T,
    params: &QuadratureParams,
    growth_margin_bits: u32,
    keep_grid: bool,
) -> Integration<T> {
    let wp = params.prec + WORK_GUARD_BITS;
    let t_max = t_cutoff(wp, growth_margin_bits);
    let eps = T::from_u64_p(1, wp).ldexp(-(params.prec as i32) - 4);
    let floor = T::from_u64_p(1, wp).ldexp(-2 * wp as i32);

    let mut grid = Vec::new();
    let mut sum = T::zero();
    let mut evaluations = 0u64;
    let mut prev: Option<T> = None;
    let mut estimate = T::zero();
    let mut value = T::zero();
    let mut level = 0u32;
    for lv in 0..=params.max_level {
        level = lv;
        let pts = build_level::<T>(lv, t_max, wp);
        for p in &pts {
            sum += p.c.clone() * f(p);
            evaluations += 1;
        }
        if keep_grid {
            grid.push((lv, pts));
        }
        value = sum.clone().ldexp(-(lv as i32));
        if let Some(p) = prev {
            estimate = (value.clone() - p).abs();
            let scale = value.abs().max_val(&floor);
            if lv >= params.min_level && estimate <= scale * eps.clone() {
                break;
            }
        }
        prev = Some(value.clone());
    }
    let floor_est = value.abs().ldexp(-(params.prec as i32) + 2);
    Integration {
        value,
        error_estimate: estimate.max_val(&floor_est),
        evaluations,
        level,
        grid,
    }
}

fn validate_sigma(r: u32, m: u32, prec: u32) -> Result<()> {
    check_precision(prec)?;
    if r < 1 {
        return Err(Error::domain("sigma(r, m) requires r >= 1"));
    }
    if m <= r {
        return Err(Error::domain(format!(
            "sigma({r}, {m}) diverges: the integral requires m > r"
        )));
    }
    Ok(())
}

/// The substituted integrand `(-ln(1-u))^(m-1) ln(u) / (u^r (1-u))`.
fn sigma_point<T: Scalar>(p: &GridPoint<T>, m: u32, r: u32) -> T {
    p.neg_ln_omu.powi(m as u64 - 1) * p.ln_u.clone() / (p.u.powi(r as u64) * p.omu.clone())
}

/// `sigma(r, m)` by tanh-sinh quadrature of the integral representation.
pub fn sigma_integral<T: Scalar>(r: u32, m: u32, prec: u32) -> Result<QuadratureResult<T>> {
    sigma_integral_with(r, m, &QuadratureParams::with_prec(prec))
}

/// As [`sigma_integral`] with explicit refinement limits.
pub fn sigma_integral_with<T: Scalar>(
    r: u32,
    m: u32,
    params: &QuadratureParams,
) -> Result<QuadratureResult<T>> {
    validate_sigma(r, m, params.prec)?;
    let out = integrate(
        |p: &GridPoint<T>| sigma_point(p, m, r),
        params,
        10 * (m + r),
        false,
    );
    // sigma = -I/(m-1)!
    let scale = T::from_bigint_p(
        &factorial(m as u64 - 1).into(),
        params.prec + WORK_GUARD_BITS,
    )
    .recip();
    Ok(QuadratureResult {
        value: (-out.value * scale.clone()).round_to(params.prec),
        error_estimate: (out.error_estimate * scale).round_to(params.prec),
        evaluations: out.evaluations,
        levels: out.level,
    })
}

/// The raw integral `int_0^inf t^(m-1) ln(1-e^-t)/(1-e^-t)^r dt`
/// (`= -(m-1)! sigma(r, m)`, negative for all valid parameters).
pub fn sigma_integral_raw<T: Scalar>(r: u32, m: u32, prec: u32) -> Result<QuadratureResult<T>> {
    let s = sigma_integral::<T>(r, m, prec)?;
    let fact = T::from_bigint_p(&factorial(m as u64 - 1).into(), prec + WORK_GUARD_BITS);
    Ok(QuadratureResult {
        value: (-s.value * fact.clone()).round_to(prec),
        error_estimate: (s.error_estimate * fact).round_to(prec),
        evaluations: s.evaluations,
        levels: s.levels,
    })
}

/// The raw integrand in the original variable,
/// `t^(m-1) ln(1-e^-t) / (1-e^-t)^r`, negative for all `t > 0`.
///
/// Below `t = 2^-10` the factored form
/// `t^(m-1-r) (ln t + ln w) / w^r` with `w = (1-e^-t)/t` is used, which
/// avoids the cancellation in `1 - e^-t`.
pub fn integrand<T: Scalar>(t: &T, m: u32, r: u32) -> Result<T> {
    if t <= &T::zero() {
        return Err(Error::domain("the integrand is defined for t > 0"));
    }
    if m < 1 {
        return Err(Error::domain("the integrand requires m >= 1"));
    }
    let prec = t.precision();
    let wp = prec + WORK_GUARD_BITS;
    let threshold = T::from_u64_p(1, wp).ldexp(-10);
    let v = if t < &threshold {
        // w = (1 - e^-t)/t = sum_k (-t)^k/(k+1)!
        let mut w = T::from_u64_p(1, wp);
        let mut term = T::from_u64_p(1, wp);
        let tiny = T::from_u64_p(1, wp).ldexp(-(wp as i32) - 8);
        let mut k = 1u64;
        loop {
            term = term * -t.clone() / T::from_u64_p(k + 1, wp);
            w += term.clone();
            if term.abs() < tiny {
                break;
            }
            k += 1;
        }
        let log_part = t.ln() + w.ln();
        t.powi((m - 1 - r) as u64) * log_part / w.powi(r as u64)
    } else {
        let em = (-t.clone()).exp();
        let omu = T::from_u64_p(1, wp) - em.clone();
        let ln_omu = ln_via_complement(&omu, &em, wp);
        t.powi(m as u64 - 1) * ln_omu / omu.powi(r as u64)
    };
    Ok(v.round_to(prec))
}

fn validate_alt_inner(n: u64, m: u32, r: u32) -> Result<()> {
    if r < 1 || n < 1 || m < 1 {
        return Err(Error::domain(
            "the inner integral requires n >= 1, m >= 1, r >= 1",
        ));
    }
    if m < r {
        // integrand ~ t^(m-r) at the origin; m >= r keeps it integrable
        return Err(Error::domain(format!(
            "inner integral diverges at 0 for m = {m}, r = {r} (needs m > r - 1)"
        )));
    }
    Ok(())
}

/// Inner integral of the alternate representation:
/// `int_0^inf t^(m-1) e^(-nt) / (1-e^-t)^(r-1) dt`,
/// computed in the `u` variable as
/// `int_0^1 (-ln(1-u))^(m-1) (1-u)^(n-1) / u^(r-1) du`.
///
/// For `r = 1` this is the Gamma integral `(m-1)!/n^m`.
pub fn alt_inner_integral<T: Scalar>(n: u64, m: u32, r: u32, prec: u32) -> Result<T> {
    check_precision(prec)?;
    validate_alt_inner(n, m, r)?;
    let params = QuadratureParams::with_prec(prec);
    let out = integrate(
        |p: &GridPoint<T>| {
            p.neg_ln_omu.powi(m as u64 - 1) * p.omu.powi(n - 1) / p.u.powi(r as u64 - 1)
        },
        &params,
        10 * (m + r),
        false,
    );
    Ok(out.value.round_to(prec))
}

/// Rigorous tail bound for the alternate-representation partial sum,
/// `sum_{n>N} H_n I_n/(m-1)!`, from the geometric expansion of the inner
/// integral: `I_n/(m-1)! = sum_j C(j+r-2, r-2) (n+j)^-m`, so
/// `I_n/(m-1)! <= n^-m` (r = 1), `<= n^-m + n^(1-m)/(m-1)` (r = 2), and
/// `<= (n^(r-2-m) + n^(r-1-m)/(m-r+1))/(r-2)!` for `r >= 3, n >= r-2`.
fn alt_partial_tail_bound<T: Scalar>(r: u32, m: u32, n: u64, wp: u32) -> T {
    // sum_{n>N} (1+ln n) n^-a <= N^(1-a) ((1+ln N)/(a-1) + 1/(a-1)^2)
    let s1 = |a: u32| -> T {
        let nf = T::from_u64_p(n, wp);
        let am1 = T::from_u64_p(a as u64 - 1, wp);
        let one = T::from_u64_p(1, wp);
        let log_part = (one.clone() + nf.ln()) / am1.clone() + (am1.clone() * am1).recip();
        nf.powi(a as u64 - 1).recip() * log_part * T::from_f64_p(1.0 + 1e-6, wp)
    };
    match r {
        1 => s1(m),
        2 => s1(m) + s1(m - 1) / T::from_u64_p(m as u64 - 1, wp),
        _ => {
            let inv_fact = T::from_bigint_p(&factorial(r as u64 - 2).into(), wp).recip();
            let a = m - r + 2;
            inv_fact * (s1(a) + s1(a - 1) / T::from_u64_p((m - r + 1) as u64, wp))
        }
    }
}

/// Partial sum of the alternate representation,
/// `(1/(m-1)!) sum_{n=1}^{N} H_n * int_0^inf t^(m-1) e^(-nt)/(1-e^-t)^(r-1) dt`.
///
/// All inner integrals share one tanh-sinh grid: the factor `(1-u)^(n-1)`
/// is carried incrementally per node (one multiplication per node per `n`),
/// and nodes whose contribution has decayed below relevance are dropped.
/// The grid level is fixed one past the level at which the hardest inner
/// integral (`n = 1`) converged.
pub fn sigma_alt_partial<T: Scalar>(
    r: u32,
    m: u32,
    n_terms: u64,
    prec: u32,
) -> Result<SeriesResult<T>> {
    validate_sigma(r, m, prec)?;
    validate_alt_inner(1, m, r)?;
    if n_terms < 1 {
        return Err(Error::domain("the partial sum needs at least one term"));
    }
    let wp = prec + WORK_GUARD_BITS;
    let params = QuadratureParams::with_prec(prec);
    let probe = integrate(
        |p: &GridPoint<T>| p.neg_ln_omu.powi(m as u64 - 1) / p.u.powi(r as u64 - 1),
        &params,
        10 * (m + r),
        true,
    );
    let level = (probe.level + 1).min(params.max_level);
    // Flatten every level's points; refresh by rebuilding the deepest level.
    let mut nodes: Vec<(T, T)> = Vec::new(); // (A_k with h folded in, running (1-u)^(n-1))
    let mut assemble = |pts: &[GridPoint<T>]| {
        for p in pts {
            let a = p.c.clone() * p.neg_ln_omu.powi(m as u64 - 1) / p.u.powi(r as u64 - 1);
            nodes.push((a.ldexp(-(level as i32)), p.omu.clone()));
        }
    };
    for (lv, pts) in &probe.grid {
        let _ = lv;
        assemble(pts);
    }
    for lv in probe.level + 1..=level {
        let extra = build_level::<T>(lv, t_cutoff(wp, 10 * (m + r)), wp);
        assemble(&extra);
    }
    let mut active: Vec<(T, T)> = nodes; // (a, p): contribution = a*p, p *= omu
                                         // seed running powers at n = 1 (p = 1 implicitly: fold into first use)
    let mut powers: Vec<T> = vec![T::from_u64_p(1, wp); active.len()];

    let inv_fact = T::from_bigint_p(&factorial(m as u64 - 1).into(), wp).recip();
    let mut harmonic = T::zero();
    let mut value = T::zero();
    for n in 1..=n_terms {
        harmonic += T::from_u64_p(n, wp).recip();
        let mut inner = T::zero();
        for ((a, _), p) in active.iter().zip(powers.iter()) {
            inner += a.clone() * p.clone();
        }
        value += harmonic.clone() * inner.clone() * inv_fact.clone();
        // advance (1-u)^(n-1) and drop spent nodes
        let cutoff = inner.to_f64_lossy().abs() * 1e-28;
        let mut keep = Vec::with_capacity(active.len());
        let mut kept_powers = Vec::with_capacity(active.len());
        for ((a, omu), p) in active.into_iter().zip(powers) {
            let contribution = a.to_f64_lossy().abs() * p.to_f64_lossy();
            if contribution >= cutoff || n < 8 {
                kept_powers.push(p * omu.clone());
                keep.push((a, omu));
            }
        }
        active = keep;
        powers = kept_powers;
    }
    let tail = alt_partial_tail_bound::<T>(r, m, n_terms, wp);
    let slack = value.abs() * T::from_u64_p(n_terms + 4, wp).ldexp(-(prec as i32) + 2);
    Ok(SeriesResult {
        value: value.round_to(prec),
        tail_bound: (tail + slack).round_to(prec),
        terms_used: n_terms,
        status: SeriesStatus::FixedTerms,
    })
}
