//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured runtime (run with `--nocapture` to see them on success).
//!
//! Criteria:
//! 1. sigma(1,2) closed form is structurally 2*zeta(3); quadrature agrees
//!    within 1e-10. Under 5 s.
//! 2. sigma(2,3) renders as `2*zeta(3) + 5/4*zeta(4) - zeta(2)`; the raw
//!    integral for (m=3, r=2) equals 2*zeta(2)-4*zeta(3)-(5/2)*zeta(4)
//!    (derived numerically) within 1e-10. Under 5 s.
//! 3. Hyperharmonic recursion = Conway-Guy on 1..=50 x 1..=50 and Stirling
//!    row sums up to r = 20, both with zero discrepancy. Under 30 s.
//! 4. All four routes agree pairwise within reported bounds + 1e-8 on the
//!    grid r <= 4, m <= r+4, at 128-bit precision. Under 10 min.
//! 5. Generating-function check passes for r in {1,2,3},
//!    z in {1/4, 1/2, 3/4}, N = 80.
//! 6. mu closed form matches brute force (1e5 terms + tail) within 1e-9
//!    for 2 <= r <= 6, 1 <= j <= 5.
//! 7. Alternate-representation partial sums are monotone in N and land
//!    within their tail bound at N = 1e4 for (1,2), (2,3), (2,4).

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use hypersum_core::exact;
use hypersum_core::expr::{sigma_closed_form, Basis, ZetaExpression, ZetaMonomial};
use hypersum_core::numeric::zeta_numeric;
use hypersum_core::quadrature::{sigma_alt_partial, sigma_integral, sigma_integral_raw};
use hypersum_core::verify;
use hypersum_core::Real;

fn report(criterion: u32, name: &str, start: Instant, budget_s: f64) {
    let elapsed = start.elapsed().as_secs_f64();
    println!("criterion {criterion} ({name}): PASS in {elapsed:.2}s (budget {budget_s}s)");
    assert!(
        elapsed < budget_s,
        "criterion {criterion} exceeded its runtime budget: {elapsed:.2}s >= {budget_s}s"
    );
}

#[test]
fn criterion_1_sigma_1_2_reproduction() {
    let start = Instant::now();
    // structural: sigma(1,2) = 2*zeta(3), exact rational coefficient 2
    let closed = sigma_closed_form(1, 2).expect("valid domain");
    let two_zeta3 = ZetaExpression::from_monomial(
        ZetaMonomial::zeta_odd(3).unwrap(),
        BigRational::new(BigInt::from(2), BigInt::one()),
    );
    assert_eq!(
        closed, two_zeta3,
        "sigma(1,2) is not structurally 2*zeta(3)"
    );

    let evaluated: Real = closed.evaluate(160).unwrap();
    let quad = sigma_integral::<Real>(1, 2, 128).unwrap();
    let gap = (quad.value.clone() - evaluated).abs_val().to_f64();
    assert!(gap <= 1e-10, "quadrature vs closed form: {gap:.3e} > 1e-10");
    report(1, "sigma(1,2) reproduction", start, 5.0);
}

#[test]
fn criterion_2_sigma_2_3_reproduction() {
    let start = Instant::now();
    let closed = sigma_closed_form(2, 3).expect("valid domain");
    assert_eq!(
        closed.render(Basis::ZetaDisplay),
        "2*zeta(3) + 5/4*zeta(4) - zeta(2)",
        "sigma(2,3) rendering mismatch"
    );

    // raw integral target derived from zeta_numeric, not from printed digits
    let z2: Real = zeta_numeric(2, 160).unwrap();
    let z3: Real = zeta_numeric(3, 160).unwrap();
    let z4: Real = zeta_numeric(4, 160).unwrap();
    let expected = Real::from_u64(2, 160) * z2
        - Real::from_u64(4, 160) * z3
        - Real::from_rational(&BigRational::new(BigInt::from(5), BigInt::from(2)), 160) * z4;
    let raw = sigma_integral_raw::<Real>(2, 3, 128).unwrap();
    let gap = (raw.value.clone() - expected).abs_val().to_f64();
    assert!(gap <= 1e-10, "raw integral gap {gap:.3e} > 1e-10");
    assert!(raw.value.is_sign_negative());
    report(2, "sigma(2,3) reproduction", start, 5.0);
}

#[test]
fn criterion_3_exact_identity_suite() {
    let start = Instant::now();
    let hyper = verify::check_hyperharmonic_identity(50, 50);
    assert!(hyper.passed, "hyperharmonic identity failed: {hyper:?}");
    assert_eq!(hyper.observed_discrepancy, 0.0);

    let stirling = verify::check_stirling_row_sums(20);
    assert!(stirling.passed, "stirling row sums failed: {stirling:?}");
    assert_eq!(stirling.observed_discrepancy, 0.0);

    // spot-check the grid really is exact equality of rationals
    for (n, r) in [(1u64, 1u32), (50, 50), (17, 3)] {
        assert_eq!(
            exact::hyperharmonic_recursive(n, r).unwrap(),
            exact::hyperharmonic_conway_guy(n, r).unwrap()
        );
    }
    report(3, "exact identities", start, 30.0);
}

#[test]
fn criterion_4_route_consistency_grid() {
    let start = Instant::now();
    for r in 1..=4u32 {
        for m in (r + 1)..=(r + 4) {
            let check = verify::check_sigma_consistency(r, m, 128, 1e-8).unwrap();
            assert!(
                check.passed,
                "route consistency failed at (r={r}, m={m}): observed {:.3e} > {:.3e}",
                check.observed_discrepancy, check.allowed_discrepancy
            );
        }
    }
    report(4, "route consistency 4x4", start, 600.0);
}

#[test]
fn criterion_5_generating_function() {
    let start = Instant::now();
    for r in 1..=3u32 {
        for (num, den) in [(1u64, 4u64), (1, 2), (3, 4)] {
            let z = BigRational::new(BigInt::from(num), BigInt::from(den));
            let check = verify::check_generating_function(r, &z, 80, 128).unwrap();
            assert!(
                check.passed,
                "generating function failed at r={r}, z={num}/{den}: {:.3e} > {:.3e}",
                check.observed_discrepancy, check.allowed_discrepancy
            );
        }
    }
    report(5, "generating function", start, 60.0);
}

#[test]
fn criterion_6_mu_formula() {
    let start = Instant::now();
    for r in 2..=6u32 {
        for j in 1..=5u64 {
            let check = verify::check_mu_formula(r, j, 100_000, 128, 1e-9).unwrap();
            assert!(
                check.passed,
                "mu formula failed at r={r}, j={j}: {:.3e} > {:.3e}",
                check.observed_discrepancy, check.allowed_discrepancy
            );
        }
    }
    report(6, "mu formula", start, 120.0);
}

#[test]
fn criterion_7_alternate_partial_sums() {
    let start = Instant::now();
    for (r, m) in [(1u32, 2u32), (2, 3), (2, 4)] {
        // monotonically nondecreasing in N
        let mut prev = Real::zero_p(64);
        for n in [10u64, 100, 1_000, 10_000] {
            let partial = sigma_alt_partial::<Real>(r, m, n, 64).unwrap();
            assert!(
                partial.value >= prev,
                "partial sums not monotone at (r={r}, m={m}), N={n}"
            );
            prev = partial.value;
        }
        // lands within the reported tail bound of the closed form at N = 1e4
        let partial = sigma_alt_partial::<Real>(r, m, 10_000, 64).unwrap();
        let closed: Real = sigma_closed_form(r, m).unwrap().evaluate(128).unwrap();
        let gap = (partial.value.clone() - closed).abs_val().to_f64();
        assert!(
            gap <= partial.tail_bound.to_f64(),
            "(r={r}, m={m}): gap {gap:.3e} > tail bound {:.3e}",
            partial.tail_bound.to_f64()
        );
    }
    report(7, "alternate representation partial sums", start, 300.0);
}
