//! Reference implementations used to check the Λ path.
//!
//! Nothing here shares code with [`crate::lambda`]: primality comes from plain
//! trial division and a bit sieve, and the non-generator set is built by
//! enumerating the generator matrix directly. None of it is meant to be fast.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::residue::{matrix_element, MatrixIndex};

/// Largest sieve the oracle will allocate (one bit per integer, 128 MiB).
pub const SIEVE_LIMIT_MAX: u64 = 1 << 30;

/// Largest bound accepted by [`brute_force_a_tilde`].
pub const ENUMERATION_BOUND_MAX: u64 = 10_000;

/// `|n|` is prime. The sign is ignored.
pub fn is_prime_trial(n: i64) -> bool {
    let n = n.unsigned_abs();
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while (d as u128) * (d as u128) <= n as u128 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Eratosthenes bit table over `[0, limit]`.
#[derive(Debug, Clone)]
pub struct SieveTable {
    limit: u64,
    bits: Vec<u64>,
}

impl SieveTable {
    pub fn new(limit: u64) -> Result<Self> {
        if limit > SIEVE_LIMIT_MAX {
            return Err(Error::Resource(format!(
                "sieve limit {limit} exceeds oracle budget {SIEVE_LIMIT_MAX}"
            )));
        }
        let words = (limit / 64 + 1) as usize;
        let mut bits = vec![!0u64; words];
        let mut clear = |k: u64| bits[(k / 64) as usize] &= !(1u64 << (k % 64));
        clear(0);
        if limit >= 1 {
            clear(1);
        }
        let mut p = 2u64;
        while p * p <= limit {
            if bits[(p / 64) as usize] >> (p % 64) & 1 == 1 {
                let mut m = p * p;
                while m <= limit {
                    bits[(m / 64) as usize] &= !(1u64 << (m % 64));
                    m += p;
                }
            }
            p += 1;
        }
        // Bits past `limit` in the last word stay set; mask them out.
        let tail = (limit % 64) + 1;
        if tail < 64 {
            let last = bits.len() - 1;
            bits[last] &= (1u64 << tail) - 1;
        }
        Ok(SieveTable { limit, bits })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n <= self.limit, "{n} beyond sieve limit {}", self.limit);
        self.bits[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    /// Number of primes `<= x` (`x` clamped to the table).
    pub fn count_upto(&self, x: u64) -> u64 {
        let x = x.min(self.limit);
        let full = (x / 64) as usize;
        let whole: u64 = self.bits[..full]
            .iter()
            .map(|w| w.count_ones() as u64)
            .sum();
        let rem = x % 64 + 1;
        let mask = if rem == 64 { !0 } else { (1u64 << rem) - 1 };
        whole + (self.bits[full] & mask).count_ones() as u64
    }
}

/// π(h) from a fresh sieve; zero for `h < 2`.
pub fn oracle_pi(h: i64) -> Result<u64> {
    if h < 2 {
        return Ok(0);
    }
    Ok(SieveTable::new(h as u64)?.count_upto(h as u64))
}

/// Off-axis, deduplicated matrix elements with `|a(i, j)| <= bound`.
///
/// Follows the naive procedure directly: generate `a(i, j)` for every
/// `i, j ∈ [-(bound+1), bound+1]`, drop the axes, then sort and deduplicate.
pub fn brute_force_a_tilde(bound: u64) -> Result<BTreeSet<i64>> {
    if bound > ENUMERATION_BOUND_MAX {
        return Err(Error::Resource(format!(
            "enumeration bound {bound} exceeds {ENUMERATION_BOUND_MAX}"
        )));
    }
    let bound = bound as i64;
    let reach = bound + 1;
    let mut set = BTreeSet::new();
    for i in -reach..=reach {
        for j in -reach..=reach {
            let idx = MatrixIndex::new(i, j);
            if !idx.is_off_axis() {
                continue;
            }
            let a = matrix_element(idx)?;
            if a.abs() <= bound {
                set.insert(a);
            }
        }
    }
    Ok(set)
}

/// Checks that the complement of the sieved set in `[-bound, bound]` is
/// exactly the set of indices `n` with `|6n + 1|` prime, allowing `n = 0`
/// whose candidate is the unit.
pub fn leopoldo_check(bound: u64) -> Result<bool> {
    let sieved = brute_force_a_tilde(bound)?;
    let bound = bound as i64;
    let survivors: BTreeSet<i64> = (-bound..=bound).filter(|n| !sieved.contains(n)).collect();
    let generators: BTreeSet<i64> = (-bound..=bound)
        .filter(|&n| {
            let v = 6 * n + 1;
            v.abs() == 1 || is_prime_trial(v)
        })
        .collect();
    Ok(survivors == generators)
}
