//! Deterministic primality and neighbor-prime queries on `u64`.
//!
//! `is_prime` runs trial division by the primes below 100 and then a
//! strong-probable-prime test on the first twelve prime bases, which is
//! exact for every n < 3.3 * 10^24 and therefore for all of `u64`.
//! Modular products are computed in `u128`.

use crate::error::{Error, Result};

/// Primes below 100, used for trial division before Miller-Rabin.
pub const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Largest prime below 2^64.
pub const LARGEST_U64_PRIME: u64 = 18_446_744_073_709_551_557;

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Strong probable-prime test of odd `n > 2` to base `a`.
fn is_strong_probable_prime(n: u64, d: u64, s: u32, a: u64) -> bool {
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Exact primality for every `u64`. 0 and 1 are not prime.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // No factor below 100, so anything below 100^2 is prime.
    if n < 10_000 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    WITNESSES
        .iter()
        .all(|&a| is_strong_probable_prime(n, d, s, a))
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> Result<u64> {
    if n >= LARGEST_U64_PRIME {
        return Err(Error::Overflow(format!(
            "no prime above {n} fits in 64 bits"
        )));
    }
    if n < 2 {
        return Ok(2);
    }
    // Walk odd candidates; termination is guaranteed by the guard above.
    let mut c = if n % 2 == 0 { n + 1 } else { n + 2 };
    while !is_prime(c) {
        c += 2;
    }
    Ok(c)
}

/// Largest prime strictly less than `n`, or `None` when `n <= 2`.
pub fn prev_prime(n: u64) -> Option<u64> {
    match n {
        0..=2 => None,
        3 => Some(2),
        _ => {
            let mut c = if n % 2 == 0 { n - 1 } else { n - 2 };
            while !is_prime(c) {
                c -= 2;
            }
            Some(c)
        }
    }
}

/// The primes adjacent to `x`, closest first with ties going to the smaller
/// prime. If `x` is itself prime the result is `[x]`.
pub fn nearest_primes(x: u64) -> Result<Vec<u64>> {
    if x < 2 {
        return Err(Error::domain(format!(
            "nearest_primes needs x >= 2, got {x}"
        )));
    }
    if is_prime(x) {
        return Ok(vec![x]);
    }
    let above = next_prime(x)?;
    // x >= 4 here, so a smaller prime always exists.
    let below = prev_prime(x).expect("composite x >= 4 has a smaller prime");
    if above - x < x - below {
        Ok(vec![above, below])
    } else {
        Ok(vec![below, above])
    }
}
