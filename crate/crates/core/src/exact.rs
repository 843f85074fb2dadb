//! Exact big-rational combinatorics: harmonic and hyperharmonic numbers,
//! binomial coefficients, factorials, unsigned Stirling numbers of the first
//! kind, and Bernoulli numbers.
//!
//! Everything here is a pure function returning values in canonical form
//! (`BigRational` reduces automatically and keeps denominators positive).

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// The ordinary harmonic number `H_n = 1 + 1/2 + ... + 1/n`, with `H_0 = 0`.
pub fn harmonic(n: u64) -> BigRational {
    let mut acc = BigRational::zero();
    for k in 1..=n {
        acc += ratio(1, k);
    }
    acc
}

/// Hyperharmonic number `H_n^(r)` by the defining recursion
/// `H_n^(0) = 1/n`, `H_n^(r) = sum_{k=1}^{n} H_k^(r-1)`.
///
/// Computed with a rolling row of partial sums, O(n*r) exact additions.
pub fn hyperharmonic_recursive(n: u64, r: u32) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::domain("hyperharmonic H_0^(r) is undefined (n >= 1)"));
    }
    // level[j] holds H_k^(j) while k sweeps 1..=n
    let mut level = vec![BigRational::zero(); r as usize + 1];
    for k in 1..=n {
        level[0] = ratio(1, k);
        for j in 1..=r as usize {
            let prev = level[j - 1].clone();
            level[j] += prev;
        }
    }
    Ok(level[r as usize].clone())
}

/// Hyperharmonic number by the Conway–Guy identity
/// `H_n^(r) = C(n+r-1, r-1) * (H_{n+r-1} - H_{r-1})`, valid for `r >= 1`.
pub fn hyperharmonic_conway_guy(n: u64, r: u32) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::domain("hyperharmonic H_0^(r) is undefined (n >= 1)"));
    }
    if r == 0 {
        return Err(Error::domain(
            "the Conway-Guy identity is stated for r >= 1",
        ));
    }
    let r = r as u64;
    let b = binomial(n + r - 1, r - 1);
    let h = harmonic(n + r - 1) - harmonic(r - 1);
    Ok(BigRational::from(BigInt::from(b)) * h)
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        // exact at every step: acc * (n-k+i) is divisible by i
        acc = acc * BigUint::from(n - k + i) / BigUint::from(i);
    }
    acc
}

/// `n!` exactly.
pub fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc
}

/// Unsigned Stirling number of the first kind via the recurrence
/// `s(r+1, k) = r*s(r, k) + s(r, k-1)` with `s(1, 1) = 1`.
///
/// Counts permutations of `r` elements with exactly `k` cycles.
pub fn stirling_first(r: u32, k: u32) -> Result<BigUint> {
    if k == 0 || k > r {
        return Err(Error::domain(format!(
            "stirling_first requires 1 <= k <= r, got r={r}, k={k}"
        )));
    }
    let r = r as usize;
    let k = k as usize;
    // row[j] = s(i, j); grow i from 1 to r
    let mut row = vec![BigUint::zero(); r + 1];
    row[1] = BigUint::one();
    for i in 1..r {
        let mut next = vec![BigUint::zero(); r + 1];
        let top = (i + 1).min(r);
        for (j, slot) in next.iter_mut().enumerate().take(top + 1).skip(1) {
            *slot = BigUint::from(i) * &row[j] + &row[j - 1];
        }
        row = next;
    }
    Ok(row[k].clone())
}

/// Bernoulli number `B_n` with the convention `B_1 = -1/2`, by the
/// recurrence `sum_{j=0}^{n} C(n+1, j) B_j = 0`.
pub fn bernoulli(n: u32) -> BigRational {
    let n = n as u64;
    let mut b: Vec<BigRational> = Vec::with_capacity(n as usize + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        if m > 1 && m % 2 == 1 {
            // odd Bernoulli numbers beyond B_1 vanish
            b.push(BigRational::zero());
            continue;
        }
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            let c = BigInt::from(binomial(m + 1, j as u64));
            acc += BigRational::from(c) * bj;
        }
        b.push(-acc / ratio(m + 1, 1));
    }
    b[n as usize].clone()
}
