//! Slow, independent counts of r_k(m) for cross-checking [`crate::qseries`].

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Counts integer vectors of length `k` with squared norm `m` by peeling off
/// the last coordinate:
///
/// `count(k, m) = sum_{j^2 <= m} s(j) * count(k - 1, m - j^2)`, with `s(0) = 1`,
/// `s(j) = 2` otherwise, `count(0, 0) = 1` and `count(0, m > 0) = 0`.
///
/// Memoised over `(dimension, remainder)`; intended for small `k` and `m`.
pub fn brute_force_rk(k: u32, m: u64) -> BigInt {
    let m = m as usize;
    // counts[r] = count(d, r) for the current dimension d.
    let mut counts = vec![BigInt::zero(); m + 1];
    counts[0] = BigInt::one();
    for _ in 0..k {
        let mut next = vec![BigInt::zero(); m + 1];
        for (r, slot) in next.iter_mut().enumerate() {
            let mut j = 0usize;
            while j * j <= r {
                let prev = &counts[r - j * j];
                if !prev.is_zero() {
                    if j == 0 {
                        *slot += prev;
                    } else {
                        *slot += prev * 2u32;
                    }
                }
                j += 1;
            }
        }
        counts = next;
    }
    counts.swap_remove(m)
}

/// Jacobi's four-square count: `8 * sigma(m)` for odd `m`, and 24 times the
/// sum of the odd divisors of `m` for even `m`.
pub fn jacobi_r4(m: u64) -> Result<BigInt> {
    if m == 0 {
        return Err(Error::Domain("jacobi_r4 needs m >= 1".into()));
    }
    let odd_only = m.is_multiple_of(2);
    let mut sum: u128 = 0;
    let mut d = 1u64;
    while d.saturating_mul(d) <= m {
        if m.is_multiple_of(d) {
            let e = m / d;
            if !odd_only || d % 2 == 1 {
                sum += d as u128;
            }
            if e != d && (!odd_only || e % 2 == 1) {
                sum += e as u128;
            }
        }
        d += 1;
    }
    let factor = if odd_only { 24u32 } else { 8 };
    Ok(BigInt::from(sum) * factor)
}
