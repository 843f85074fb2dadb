//! Cross-validation harness: every identity gets exercised on a finite grid
//! and scored into a deterministic, machine-readable report.
//!
//! Exact identities (hyperharmonic recursion vs. the Conway–Guy form,
//! Stirling row sums) require discrepancy exactly zero. Floating checks
//! compare routes only up to the sum of their reported error bounds plus an
//! explicit tolerance; there is no bare float equality anywhere.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{check_precision, Error, Result};
use crate::exact::{
    binomial, factorial, harmonic, hyperharmonic_conway_guy, hyperharmonic_recursive,
    stirling_first,
};
use crate::expr::{mu_expression, sigma_closed_form};
use crate::quadrature::{sigma_alt_partial, sigma_integral};
use crate::real::{Real, GUARD_BITS, WORK_GUARD_BITS};
use crate::scalar::rational_to_f64;
use crate::series::{sigma_series_direct, sigma_series_hurwitz, SeriesParams};

/// Outcome of a single check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub check_name: String,
    pub parameters: BTreeMap<String, String>,
    pub passed: bool,
    pub observed_discrepancy: f64,
    pub allowed_discrepancy: f64,
}

impl CheckResult {
    fn new(name: &str, parameters: BTreeMap<String, String>, observed: f64, allowed: f64) -> Self {
        CheckResult {
            check_name: name.to_string(),
            parameters,
            passed: observed <= allowed,
            observed_discrepancy: observed,
            allowed_discrepancy: allowed,
        }
    }
}

fn params_of(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

/// Pass/fail tallies; always equal to the list they summarize.
#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

/// Grid dimensions for the sigma-consistency cells: orders `1..=r_max` and
/// weights `r+1..=r+m_offset_max`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SuiteGrid {
    pub r_max: u32,
    pub m_offset_max: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub grid: SuiteGrid,
    pub precision_bits: u32,
    pub consistency_tolerance: f64,
    pub series_term_cap: u64,
}

/// Deterministically ordered collection of check results.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: SuiteConfig,
    pub results: Vec<CheckResult>,
    pub summary: Summary,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

/// Exact equality of the two hyperharmonic routes over the full grid.
pub fn check_hyperharmonic_identity(n_max: u64, r_max: u32) -> CheckResult {
    let mut worst = 0.0f64;
    for r in 1..=r_max {
        for n in 1..=n_max {
            let a = hyperharmonic_recursive(n, r).expect("n >= 1");
            let b = hyperharmonic_conway_guy(n, r).expect("valid arguments");
            if a != b {
                worst = worst.max(rational_to_f64(&(a - b).abs()));
            }
        }
    }
    CheckResult::new(
        "hyperharmonic_identity",
        params_of(&[("n_max", n_max.to_string()), ("r_max", r_max.to_string())]),
        worst,
        0.0,
    )
}

/// Exact row-sum identity `sum_k s(r, k) = r!` for `r <= r_max`.
pub fn check_stirling_row_sums(r_max: u32) -> CheckResult {
    let mut mismatches = 0.0f64;
    for r in 1..=r_max {
        let mut acc = num_bigint::BigUint::zero();
        for k in 1..=r {
            acc += stirling_first(r, k).expect("1 <= k <= r");
        }
        if acc != factorial(r as u64) {
            mismatches += 1.0;
        }
    }
    CheckResult::new(
        "stirling_row_sums",
        params_of(&[("r_max", r_max.to_string())]),
        mismatches,
        0.0,
    )
}

/// Truncated generating function `sum_{n<=N} H_n^(r) z^n` against the
/// closed form `-ln(1-z)/(1-z)^r`, within a rigorous tail bound.
///
/// The partial sum is exact rational arithmetic. The tail is bounded by a
/// geometric majorant built from the Conway–Guy coefficient bound: with
/// `a_n = C(n+r-1, r-1) H_{n+r-1} z^n` the term ratio is at most
/// `rho z` for `rho = (N+1+r)/(N+2) * H_{N+r+1}/H_{N+r}` (both factors
/// decreasing in `n`), so `sum_{n>N} a_n <= a_{N+1}/(1 - rho z)`.
pub fn check_generating_function(
    r: u32,
    z: &BigRational,
    n_terms: u64,
    prec: u32,
) -> Result<CheckResult> {
    check_precision(prec)?;
    if r < 1 {
        return Err(Error::domain("the generating function check needs r >= 1"));
    }
    if z <= &BigRational::zero() || z >= &BigRational::one() {
        return Err(Error::domain("z must lie strictly inside (0, 1)"));
    }
    let wp = prec + WORK_GUARD_BITS;

    // exact partial sum via the recursion row and a running z power
    let mut levels = vec![BigRational::zero(); r as usize + 1];
    let mut z_pow = BigRational::one();
    let mut partial = BigRational::zero();
    for n in 1..=n_terms {
        levels[0] = BigRational::new(BigInt::one(), BigInt::from(n));
        for j in 1..=r as usize {
            let prev = levels[j - 1].clone();
            levels[j] += prev;
        }
        z_pow *= z;
        partial += levels[r as usize].clone() * &z_pow;
    }

    // target: -ln(1-z)/(1-z)^r
    let one_minus_z = BigRational::one() - z;
    let omz = Real::from_rational(&one_minus_z, wp);
    let target = -omz.ln_val() / omz.powi_val(r as u64);
    let lhs = Real::from_rational(&partial, wp);
    let observed = (lhs - target.clone()).abs_val().to_f64();

    // rigorous geometric tail bound, evaluated in exact rationals
    let n = n_terms;
    let h_nr = harmonic(n + r as u64);
    let h_nr1 = harmonic(n + r as u64 + 1);
    let rho = BigRational::new(BigInt::from(n + 1 + r as u64), BigInt::from(n + 2))
        * (h_nr1 / h_nr.clone());
    let rho_z = rho * z;
    if rho_z >= BigRational::one() {
        return Err(Error::domain(
            "tail majorant is not geometric here; increase the term count",
        ));
    }
    let first =
        BigRational::from(BigInt::from(binomial(n + r as u64, r as u64 - 1))) * h_nr * z_pow * z;
    let bound = first / (BigRational::one() - rho_z);
    let allowed = rational_to_f64(&bound) * (1.0 + 1e-9)
        + target.abs_val().to_f64() * 2f64.powi(GUARD_BITS as i32 - prec as i32);

    Ok(CheckResult::new(
        "generating_function",
        params_of(&[
            ("r", r.to_string()),
            ("z", format!("{}/{}", z.numer(), z.denom())),
            ("n_terms", n_terms.to_string()),
            ("precision", prec.to_string()),
        ]),
        observed,
        allowed,
    ))
}

/// The partial-fraction closed form of `mu(r, j)` against a brute-force
/// partial sum of `sum 1/(n^r (n+j))`, within the integral tail bound
/// `1/(r N^r)` plus the stated tolerance.
pub fn check_mu_formula(
    r: u32,
    j: u64,
    brute_terms: u64,
    prec: u32,
    tol: f64,
) -> Result<CheckResult> {
    check_precision(prec)?;
    let wp = prec + WORK_GUARD_BITS;
    let value: Real = mu_expression(r, j)?.evaluate(prec)?;
    let mut brute = Real::zero_p(wp);
    for n in (1..=brute_terms).rev() {
        let denom = (n as u128).pow(r) * (n + j) as u128;
        brute += Real::from_u128(denom, wp).recip_val();
    }
    let observed = (value - brute).abs_val().to_f64();
    let tail = 1.0 / (r as f64 * (brute_terms as f64).powi(r as i32));
    Ok(CheckResult::new(
        "mu_formula",
        params_of(&[
            ("r", r.to_string()),
            ("j", j.to_string()),
            ("brute_terms", brute_terms.to_string()),
        ]),
        observed,
        tail + tol,
    ))
}

/// Pairwise agreement of the four sigma routes: exact closed form
/// (evaluated), direct series, Hurwitz-form series, and quadrature.
///
/// Every pair must agree within the sum of its reported error bounds plus
/// `tol`; the observed discrepancy is the worst pairwise excess over the
/// reported bounds (clamped at zero).
pub fn check_sigma_consistency(r: u32, m: u32, prec: u32, tol: f64) -> Result<CheckResult> {
    check_precision(prec)?;
    let series_tol = if m == r + 1 { 1e-4 } else { 1e-10 };
    let sp = SeriesParams {
        prec,
        ..Default::default()
    };
    let closed: Real = sigma_closed_form(r, m)?.evaluate(prec)?;
    let closed_bound = closed.abs_val().to_f64() * 2f64.powi(GUARD_BITS as i32 - prec as i32);
    let tol_r = Real::from_f64(series_tol, prec);
    let direct = sigma_series_direct::<Real>(r, m, &tol_r, &sp)?;
    let hurwitz = sigma_series_hurwitz::<Real>(r, m, &tol_r, &sp)?;
    let quad = sigma_integral::<Real>(r, m, prec)?;

    let routes: [(&str, &Real, f64); 4] = [
        ("closed_form", &closed, closed_bound),
        ("series_direct", &direct.value, direct.tail_bound.to_f64()),
        (
            "series_hurwitz",
            &hurwitz.value,
            hurwitz.tail_bound.to_f64(),
        ),
        ("integral", &quad.value, quad.error_estimate.to_f64()),
    ];
    let mut observed = 0.0f64;
    for i in 0..routes.len() {
        for jx in i + 1..routes.len() {
            let gap = (routes[i].1.clone() - routes[jx].1.clone())
                .abs_val()
                .to_f64();
            let excess = gap - (routes[i].2 + routes[jx].2);
            observed = observed.max(excess.max(0.0));
        }
    }
    Ok(CheckResult::new(
        "sigma_consistency",
        params_of(&[
            ("r", r.to_string()),
            ("m", m.to_string()),
            ("precision", prec.to_string()),
            ("series_tol", format!("{series_tol:e}")),
        ]),
        observed,
        tol,
    ))
}

/// The alternate-representation partial sum lands within its reported tail
/// bound of the closed-form value.
pub fn check_alt_partial(r: u32, m: u32, n_terms: u64, prec: u32) -> Result<CheckResult> {
    let partial = sigma_alt_partial::<Real>(r, m, n_terms, prec)?;
    let closed: Real = sigma_closed_form(r, m)?.evaluate(prec + 32)?;
    let observed = (partial.value.clone() - closed).abs_val().to_f64();
    Ok(CheckResult::new(
        "alt_partial_sum",
        params_of(&[
            ("r", r.to_string()),
            ("m", m.to_string()),
            ("n_terms", n_terms.to_string()),
        ]),
        observed,
        partial.tail_bound.to_f64(),
    ))
}

/// Monotonicity of the alternate-representation partial sums in `N`
/// (all terms are positive).
pub fn check_alt_monotone(r: u32, m: u32, prec: u32) -> Result<CheckResult> {
    let mut violations = 0.0f64;
    let mut prev = Real::zero_p(prec);
    for n in [10u64, 100, 1000] {
        let res = sigma_alt_partial::<Real>(r, m, n, prec)?;
        if res.value <= prev {
            violations += 1.0;
        }
        prev = res.value;
    }
    Ok(CheckResult::new(
        "alt_partial_monotone",
        params_of(&[("r", r.to_string()), ("m", m.to_string())]),
        violations,
        0.0,
    ))
}

/// Runs every check the grid covers, in a fixed order, collecting all
/// failures rather than aborting on the first.
pub fn run_suite(grid: SuiteGrid, prec: u32) -> Result<Report> {
    check_precision(prec)?;
    let consistency_tol = 1e-8;
    let mut results = Vec::new();

    if grid.r_max >= 1 {
        results.push(check_hyperharmonic_identity(50, 50));
        results.push(check_stirling_row_sums(20));

        for r in 1..=grid.r_max.min(3) {
            for (num, den) in [(1u64, 4u64), (1, 2), (3, 4)] {
                let z = BigRational::new(BigInt::from(num), BigInt::from(den));
                results.push(check_generating_function(r, &z, 80, prec)?);
            }
        }

        for r in 2..=6 {
            for j in 1..=5 {
                results.push(check_mu_formula(r, j, 100_000, prec, 1e-9)?);
            }
        }

        for r in 1..=grid.r_max {
            for m in r + 1..=r + grid.m_offset_max {
                results.push(check_sigma_consistency(r, m, prec, consistency_tol)?);
            }
        }

        for (r, m) in [(1u32, 2u32), (2, 3), (2, 4)] {
            if r <= grid.r_max && m - r <= grid.m_offset_max {
                results.push(check_alt_partial(r, m, 10_000, 64)?);
                results.push(check_alt_monotone(r, m, 64)?);
            }
        }
    }

    let passed = results.iter().filter(|c| c.passed).count();
    let failed = results.len() - passed;
    Ok(Report {
        config: SuiteConfig {
            grid,
            precision_bits: prec,
            consistency_tolerance: consistency_tol,
            series_term_cap: SeriesParams::default().term_cap,
        },
        results,
        summary: Summary { passed, failed },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_checks_pass_with_zero_discrepancy() {
        let c = check_hyperharmonic_identity(10, 10);
        assert!(c.passed);
        assert_eq!(c.observed_discrepancy, 0.0);
        assert_eq!(c.allowed_discrepancy, 0.0);
        let c = check_stirling_row_sums(12);
        assert!(c.passed);
        assert_eq!(c.observed_discrepancy, 0.0);
    }

    #[test]
    fn generating_function_examples() {
        // r = 1, z = 1/2: target 2 ln 2
        let z = BigRational::new(BigInt::from(1), BigInt::from(2));
        let c = check_generating_function(1, &z, 60, 128).unwrap();
        assert!(
            c.passed,
            "observed {} allowed {}",
            c.observed_discrepancy, c.allowed_discrepancy
        );
        // r = 2, z = 1/3: target (9/4) ln(3/2)
        let z = BigRational::new(BigInt::from(1), BigInt::from(3));
        let c = check_generating_function(2, &z, 60, 128).unwrap();
        assert!(c.passed);
        // z outside (0,1) rejected
        let z = BigRational::new(BigInt::from(3), BigInt::from(2));
        assert!(check_generating_function(1, &z, 10, 128).is_err());
    }

    /// With one term the truncation error is visible and the bound must
    /// still contain it: both sides are z + O(z^2).
    #[test]
    fn generating_function_single_term() {
        let z = BigRational::new(BigInt::from(1), BigInt::from(64));
        for r in 1..=3 {
            let c = check_generating_function(r, &z, 1, 128).unwrap();
            assert!(
                c.passed,
                "r={r}: {} > {}",
                c.observed_discrepancy, c.allowed_discrepancy
            );
            assert!(c.observed_discrepancy > 0.0, "truncation should be visible");
        }
    }

    #[test]
    fn mu_check_cell() {
        let c = check_mu_formula(2, 1, 50_000, 128, 1e-9).unwrap();
        assert!(c.passed, "observed {}", c.observed_discrepancy);
    }

    #[test]
    fn sigma_consistency_cell() {
        let c = check_sigma_consistency(1, 3, 128, 1e-9).unwrap();
        assert!(c.passed, "observed {}", c.observed_discrepancy);
        assert!(check_sigma_consistency(2, 2, 128, 1e-9).is_err());
    }

    #[test]
    fn alt_partial_cells() {
        let c = check_alt_partial(1, 2, 1000, 64).unwrap();
        assert!(
            c.passed,
            "observed {} allowed {}",
            c.observed_discrepancy, c.allowed_discrepancy
        );
        let c = check_alt_monotone(2, 3, 64).unwrap();
        assert!(c.passed);
    }

    #[test]
    fn empty_grid_gives_empty_report() {
        let report = run_suite(
            SuiteGrid {
                r_max: 0,
                m_offset_max: 0,
            },
            128,
        )
        .unwrap();
        assert_eq!(report.results.len(), 0);
        assert_eq!(report.summary.passed, 0);
        assert_eq!(report.summary.failed, 0);
        assert!(report.all_passed());
    }

    #[test]
    fn reports_are_deterministic() {
        let grid = SuiteGrid {
            r_max: 1,
            m_offset_max: 2,
        };
        let a = serde_json::to_string(&run_suite(grid, 96).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(grid, 96).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn summary_counts_match() {
        let report = run_suite(
            SuiteGrid {
                r_max: 1,
                m_offset_max: 1,
            },
            96,
        )
        .unwrap();
        let passed = report.results.iter().filter(|c| c.passed).count();
        assert_eq!(report.summary.passed, passed);
        assert_eq!(report.summary.failed, report.results.len() - passed);
    }
}
