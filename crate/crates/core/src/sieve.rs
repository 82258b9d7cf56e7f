//! Segmented, odd-only sieve of Eratosthenes and the prime-counting checks
//! built on it (Bertrand's postulate and the `pi(x) >= x / (2 ln x)` bound).

use crate::error::{Error, Result};

/// Environment variable overriding [`SieveConfig::budget_bytes`].
pub const BUDGET_ENV: &str = "PRIME_RATIO_SIEVE_BUDGET";

/// Default workspace budget for a materialized [`PrimeTable`]: 2 GiB.
pub const DEFAULT_BUDGET_BYTES: u64 = 1 << 31;

/// Odd numbers per segment. 32 KiB of flags fits in L1 on most desktops.
pub const DEFAULT_SEGMENT_LEN: usize = 1 << 15;

/// Relative slack applied against `ln x` so the lower-bound check can only
/// err toward failing.
const LN_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    pub budget_bytes: u64,
    pub segment_len: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            budget_bytes: DEFAULT_BUDGET_BYTES,
            segment_len: DEFAULT_SEGMENT_LEN,
        }
    }
}

impl SieveConfig {
    /// Default configuration with the budget taken from `PRIME_RATIO_SIEVE_BUDGET`
    /// when it is set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = SieveConfig::default();
        if let Ok(raw) = std::env::var(BUDGET_ENV) {
            cfg.budget_bytes = raw.trim().parse().map_err(|e| Error::Parse {
                arg: BUDGET_ENV.into(),
                input: raw.clone(),
                reason: format!("{e}"),
            })?;
        }
        Ok(cfg)
    }

    /// Upper estimate of the bytes needed to hold every prime up to `limit`.
    pub fn bytes_needed(&self, limit: u64) -> u64 {
        let words = pi_upper_estimate(limit);
        words
            .saturating_mul(std::mem::size_of::<u64>() as u64)
            .saturating_add(self.segment_len as u64)
    }
}

/// Rosser-Schoenfeld style upper bound `1.25506 x / ln x` (valid for x > 1),
/// with a small floor for tiny inputs.
fn pi_upper_estimate(x: u64) -> u64 {
    if x < 17 {
        return 7;
    }
    let xf = x as f64;
    (1.25506 * xf / xf.ln()).ceil() as u64 + 1
}

/// Every prime in `[2, limit]`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Number of primes `<= x`, for `x <= limit`.
    pub fn count_up_to(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }

    /// Membership by binary search.
    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.primes
    }
}

/// Odd primes up to `n` by a plain sieve; used as the base set for segments.
fn base_odd_primes(n: u64) -> Vec<u64> {
    if n < 3 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    let mut i = 3;
    while i <= n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out
}

/// Calls `emit` for every prime in `[lo, hi]` in ascending order, holding at
/// most one segment of flags in memory.
pub fn for_each_prime_in(lo: u64, hi: u64, segment_len: usize, mut emit: impl FnMut(u64)) {
    if hi < 2 || lo > hi {
        return;
    }
    if lo <= 2 {
        emit(2);
    }
    let base = base_odd_primes(hi.isqrt());
    let segment_len = segment_len.max(1);
    let mut flags = vec![true; segment_len];
    // segment covers odd numbers start, start + 2, ..., start + 2 * (count - 1)
    let mut start = lo.max(3) | 1;
    while start <= hi {
        let count = ((hi - start) / 2 + 1).min(segment_len as u64) as usize;
        let last = start + 2 * (count as u64 - 1);
        flags[..count].fill(true);
        for &p in &base {
            if p * p > last {
                break;
            }
            let mut m = (p * p).max(start.div_ceil(p) * p);
            if m % 2 == 0 {
                m += p;
            }
            let mut i = ((m - start) / 2) as usize;
            while i < count {
                flags[i] = false;
                i += p as usize;
            }
        }
        for (i, &f) in flags[..count].iter().enumerate() {
            if f {
                emit(start + 2 * i as u64);
            }
        }
        match last.checked_add(2) {
            Some(s) => start = s,
            None => break,
        }
    }
}

/// All primes up to `limit` under the default configuration.
pub fn primes_up_to(limit: u64) -> Result<PrimeTable> {
    primes_up_to_with(limit, &SieveConfig::default())
}

pub fn primes_up_to_with(limit: u64, config: &SieveConfig) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::domain(format!(
            "primes_up_to needs limit >= 2, got {limit}"
        )));
    }
    let needed = config.bytes_needed(limit);
    if needed > config.budget_bytes {
        return Err(Error::BudgetExceeded {
            limit,
            needed,
            cap: config.budget_bytes,
        });
    }
    let mut primes = Vec::with_capacity(pi_upper_estimate(limit) as usize);
    for_each_prime_in(2, limit, config.segment_len, |p| primes.push(p));
    Ok(PrimeTable { limit, primes })
}

/// Exact `pi(x)`, streamed so no table is materialized.
pub fn prime_count(x: u64) -> u64 {
    let mut n = 0;
    for_each_prime_in(2, x, DEFAULT_SEGMENT_LEN, |_| n += 1);
    n
}

/// Whether `count >= x / (2 ln x)`, with `ln x` inflated by a relative margin
/// so rounding can never produce a false pass.
pub fn pi_bound_holds(count: u64, x: u64) -> bool {
    let ln = (x as f64).ln() * (1.0 - LN_MARGIN);
    2.0 * ln * count as f64 >= x as f64 * (1.0 + LN_MARGIN)
}

/// `pi(x) >= x / (2 ln x)`, defined for `x >= 25`.
pub fn check_pi_lower_bound(x: u64) -> Result<bool> {
    if x < 25 {
        return Err(Error::domain(format!(
            "the pi(x) lower bound is stated for x >= 25, got {x}"
        )));
    }
    Ok(pi_bound_holds(prime_count(x), x))
}

/// Checks the lower bound at every integer in `[25, x_max]` and returns the
/// first `x` where it fails.
pub fn pi_lower_bound_scan(x_max: u64) -> Result<Option<u64>> {
    if x_max < 25 {
        return Err(Error::domain(format!(
            "the pi(x) lower bound is stated for x >= 25, got {x_max}"
        )));
    }
    let table = primes_up_to(x_max)?;
    let primes = table.primes();
    let mut idx = 0;
    for x in 2..=x_max {
        while idx < primes.len() && primes[idx] <= x {
            idx += 1;
        }
        if x >= 25 && !pi_bound_holds(idx as u64, x) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Checks that `(n, 2n)` contains a prime for every `n` in `[2, n_max]`.
/// Returns the smallest failing `n`, if any.
pub fn bertrand_scan(n_max: u64) -> Result<Option<u64>> {
    if n_max < 2 {
        return Err(Error::domain(format!(
            "bertrand_scan needs n_max >= 2, got {n_max}"
        )));
    }
    let upper = n_max
        .checked_mul(2)
        .ok_or_else(|| Error::Overflow(format!("2 * {n_max}")))?;
    let table = primes_up_to(upper)?;
    let primes = table.primes();
    let mut idx = 0;
    for n in 2..=n_max {
        while idx < primes.len() && primes[idx] <= n {
            idx += 1;
        }
        match primes.get(idx) {
            Some(&p) if p < 2 * n => {}
            _ => return Ok(Some(n)),
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primality::is_prime;

    #[test]
    fn small_tables() {
        assert_eq!(primes_up_to(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert_eq!(
            primes_up_to(30).unwrap().primes(),
            &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        );
        assert_eq!(primes_up_to(2).unwrap().primes(), &[2]);
        assert_eq!(primes_up_to(3).unwrap().primes(), &[2, 3]);
        assert!(primes_up_to(1).is_err());
    }

    #[test]
    fn million_tail() {
        let t = primes_up_to(1_000_000).unwrap();
        assert_eq!(*t.primes().last().unwrap(), 999_983);
        assert_eq!(t.len(), 78_498);
        // trial-division oracle on the tail
        let naive = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
        let tail: Vec<u64> = (999_000..=1_000_000).filter(|&n| naive(n)).collect();
        let got: Vec<u64> = t
            .primes()
            .iter()
            .copied()
            .filter(|&p| p >= 999_000)
            .collect();
        assert_eq!(got, tail);
    }

    #[test]
    fn tiny_segments_agree() {
        let cfg = SieveConfig {
            segment_len: 7,
            ..SieveConfig::default()
        };
        let a = primes_up_to_with(5_000, &cfg).unwrap();
        let b = primes_up_to(5_000).unwrap();
        assert_eq!(a, b);
        let mut mid = Vec::new();
        for_each_prime_in(1_000, 1_100, 3, |p| mid.push(p));
        let expect: Vec<u64> = (1_000..=1_100).filter(|&n| is_prime(n)).collect();
        assert_eq!(mid, expect);
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = SieveConfig {
            budget_bytes: 1_000,
            ..SieveConfig::default()
        };
        match primes_up_to_with(1_000_000, &cfg) {
            Err(Error::BudgetExceeded { cap, .. }) => assert_eq!(cap, 1_000),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn counts() {
        assert_eq!(prime_count(10), 4);
        assert_eq!(prime_count(2), 1);
        assert_eq!(prime_count(100), 25);
        assert_eq!(prime_count(1), 0);
        assert_eq!(prime_count(0), 0);
        assert_eq!(prime_count(1_000_000), 78_498);
    }

    #[test]
    fn count_increments_at_primes() {
        let t = primes_up_to(3_000).unwrap();
        let mut prev = 0;
        for x in 0..=3_000u64 {
            let c = t.count_up_to(x);
            assert_eq!(c - prev, usize::from(is_prime(x)));
            prev = c;
        }
    }

    #[test]
    fn pi_bound() {
        assert!(check_pi_lower_bound(25).unwrap());
        assert!(check_pi_lower_bound(100).unwrap());
        assert!(matches!(check_pi_lower_bound(24), Err(Error::Domain(_))));
        // a count that exactly meets x / (2 ln x) in floating point must not pass
        assert!(!pi_bound_holds(0, 25));
        assert_eq!(pi_lower_bound_scan(10_000).unwrap(), None);
    }

    #[test]
    fn bertrand() {
        assert_eq!(bertrand_scan(2).unwrap(), None);
        assert_eq!(bertrand_scan(10).unwrap(), None);
        assert_eq!(bertrand_scan(10_000).unwrap(), None);
        assert!(bertrand_scan(1).is_err());
    }
}
