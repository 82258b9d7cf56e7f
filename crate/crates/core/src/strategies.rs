//! Searches for a prime pair whose normalized difference lies within `epsilon`
//! of a target `t`.
//!
//! * Targeted search walks primes `q` upward from `q_start`, rounds `q r`
//!   half up to an integer `x` and tries the primes adjacent to `x` as `p`.
//! * Direct search scans every prime pair below a bound that doubles from
//!   `direct_n0` up to `direct_n_cap`, in lexicographic `(q, p)` order inside
//!   each stage. Stage `N` only looks at pairs whose larger prime lies in
//!   `(previous N, N]`.
//! * [`approximate`] runs targeted search and falls back to direct search
//!   when targeted search runs out of budget.
//!
//! Every success is certified: the returned error is recomputed exactly and
//! checked against `epsilon` before it leaves this module.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primality::{is_prime, nearest_primes, next_prime};
use crate::ratio::{approx_error, ensure_unit_interval, rho, target_ratio, PrimePair};
use crate::rational::{to_u64, Rational};
use crate::sieve::{primes_up_to_with, SieveConfig};

pub const DEFAULT_Q_START: u64 = 2;
pub const DEFAULT_Q_CAP: u64 = 100_000_000;
pub const DEFAULT_DIRECT_N0: u64 = 100;
pub const DEFAULT_DIRECT_N_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Targeted,
    Direct,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReturnPolicy {
    /// Stop at the first pair in search order with error below epsilon.
    First,
    /// Minimum error over everything the caps allow, ties broken by smaller
    /// `p + q`, then smaller `p`.
    BestWithinCap,
}

/// Which search produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyUsed {
    Targeted,
    Direct,
}

impl fmt::Display for StrategyUsed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StrategyUsed::Targeted => "targeted",
            StrategyUsed::Direct => "direct",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxQuery {
    pub t: Rational,
    pub epsilon: Rational,
    pub mode: Mode,
    pub q_start: u64,
    pub q_cap: u64,
    pub direct_n0: u64,
    pub direct_n_cap: u64,
    pub return_policy: ReturnPolicy,
    pub sieve: SieveConfig,
}

impl ApproxQuery {
    /// A validated query with default caps, auto mode and first-hit policy.
    pub fn new(t: Rational, epsilon: Rational) -> Result<Self> {
        let q = ApproxQuery {
            t,
            epsilon,
            mode: Mode::Auto,
            q_start: DEFAULT_Q_START,
            q_cap: DEFAULT_Q_CAP,
            direct_n0: DEFAULT_DIRECT_N0,
            direct_n_cap: DEFAULT_DIRECT_N_CAP,
            return_policy: ReturnPolicy::First,
            sieve: SieveConfig::default(),
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_unit_interval(&self.t)?;
        if !self.epsilon.is_positive() {
            return Err(Error::domain(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.q_start < 2 {
            return Err(Error::domain(format!(
                "q_start must be >= 2, got {}",
                self.q_start
            )));
        }
        if self.q_cap < self.q_start {
            return Err(Error::domain(format!(
                "q_cap {} is below q_start {}",
                self.q_cap, self.q_start
            )));
        }
        if self.direct_n0 < 5 {
            return Err(Error::domain(format!(
                "direct N0 must be >= 5, got {}",
                self.direct_n0
            )));
        }
        if self.direct_n_cap < self.direct_n0 {
            return Err(Error::domain(format!(
                "direct N cap {} is below N0 {}",
                self.direct_n_cap, self.direct_n0
            )));
        }
        Ok(())
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_q_start(mut self, q_start: u64) -> Self {
        self.q_start = q_start;
        self
    }

    pub fn with_q_cap(mut self, q_cap: u64) -> Self {
        self.q_cap = q_cap;
        self
    }

    pub fn with_direct_bounds(mut self, n0: u64, n_cap: u64) -> Self {
        self.direct_n0 = n0;
        self.direct_n_cap = n_cap;
        self
    }

    pub fn with_policy(mut self, policy: ReturnPolicy) -> Self {
        self.return_policy = policy;
        self
    }
}

/// Search counters. `candidates_examined` counts pairs whose exact error was
/// evaluated; `max_prime_touched` is the largest prime used as `p` or `q`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Telemetry {
    pub candidates_examined: u64,
    pub max_prime_touched: u64,
}

impl Telemetry {
    fn touch(&mut self, prime: u64) {
        self.max_prime_touched = self.max_prime_touched.max(prime);
    }

    fn merge(self, other: Telemetry) -> Telemetry {
        Telemetry {
            candidates_examined: self.candidates_examined + other.candidates_examined,
            max_prime_touched: self.max_prime_touched.max(other.max_prime_touched),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxResult {
    pub pair: PrimePair,
    pub value: Rational,
    pub error: Rational,
    pub strategy_used: StrategyUsed,
    pub candidates_examined: u64,
    pub max_prime_touched: u64,
}

impl ApproxResult {
    pub fn telemetry(&self) -> Telemetry {
        Telemetry {
            candidates_examined: self.candidates_examined,
            max_prime_touched: self.max_prime_touched,
        }
    }
}

/// Best pair seen by a search that did not reach the tolerance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BestSoFar {
    pub pair: PrimePair,
    pub error: Rational,
}

/// Payload of [`Error::CapExceeded`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapExceeded {
    pub strategy_used: StrategyUsed,
    pub best: Option<BestSoFar>,
    pub candidates_examined: u64,
    pub max_prime_touched: u64,
}

impl fmt::Display for CapExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} search exhausted its caps", self.strategy_used)?;
        if let Some(b) = &self.best {
            write!(f, "; best pair {} with error {}", b.pair, b.error)?;
        }
        Ok(())
    }
}

/// Total order used by the best-within-cap policy.
fn better(a: &BestSoFar, b: &BestSoFar) -> bool {
    a.error
        .cmp(&b.error)
        .then(a.pair.sum().cmp(&b.pair.sum()))
        .then(a.pair.p().cmp(&b.pair.p()))
        == Ordering::Less
}

#[derive(Default)]
struct Tracker {
    tele: Telemetry,
    best: Option<BestSoFar>,
}

impl Tracker {
    /// Evaluates one pair and returns its exact error.
    fn examine(&mut self, pair: PrimePair, t: &Rational) -> Rational {
        self.tele.candidates_examined += 1;
        self.tele.touch(pair.p());
        self.tele.touch(pair.q());
        let error = approx_error(&pair, t).expect("t validated");
        let cand = BestSoFar {
            pair,
            error: error.clone(),
        };
        if self.best.as_ref().is_none_or(|b| better(&cand, b)) {
            self.best = Some(cand);
        }
        error
    }

    fn success(
        &self,
        pair: PrimePair,
        query: &ApproxQuery,
        strategy: StrategyUsed,
    ) -> ApproxResult {
        certify(pair, query, strategy, self.tele)
    }

    fn best_or_exceeded(self, query: &ApproxQuery, strategy: StrategyUsed) -> Result<ApproxResult> {
        match self.best {
            Some(b) if b.error < query.epsilon => Ok(certify(b.pair, query, strategy, self.tele)),
            best => Err(Error::CapExceeded(Box::new(CapExceeded {
                strategy_used: strategy,
                best,
                candidates_examined: self.tele.candidates_examined,
                max_prime_touched: self.tele.max_prime_touched,
            }))),
        }
    }
}

/// Builds a result, recomputing the error from scratch. Panics if the pair
/// does not actually meet the tolerance.
fn certify(
    pair: PrimePair,
    query: &ApproxQuery,
    strategy: StrategyUsed,
    tele: Telemetry,
) -> ApproxResult {
    let value = rho(&pair);
    let error = approx_error(&pair, &query.t).expect("t validated");
    assert!(
        error < query.epsilon,
        "certification failed: {pair} has error {error} >= {}",
        query.epsilon
    );
    ApproxResult {
        pair,
        value,
        error,
        strategy_used: strategy,
        candidates_examined: tele.candidates_examined,
        max_prime_touched: tele.max_prime_touched,
    }
}

/// `round_half_up(q * r)` as a `u64`.
fn rounded_target(q: u64, r: &Rational) -> Result<u64> {
    let x = (Rational::from(q) * r).round_half_up();
    to_u64(&x).ok_or_else(|| Error::Overflow(format!("round({q} * {r}) = {x} exceeds 64 bits")))
}

/// Primes `q` ascending from `q_start`; for each, the primes adjacent to
/// `round(q r)` in nearest-first order, skipping any that are not above `q`.
pub fn targeted_search(query: &ApproxQuery) -> Result<ApproxResult> {
    query.validate()?;
    let r = target_ratio(&query.t)?;
    let mut tr = Tracker::default();
    let mut q = if is_prime(query.q_start) {
        query.q_start
    } else {
        next_prime(query.q_start)?
    };
    while q <= query.q_cap {
        tr.tele.touch(q);
        let x = rounded_target(q, &r)?;
        for p in nearest_primes(x)? {
            if p <= q {
                continue;
            }
            let pair = PrimePair::new(p, q)?;
            let error = tr.examine(pair, &query.t);
            if query.return_policy == ReturnPolicy::First && error < query.epsilon {
                return Ok(tr.success(pair, query, StrategyUsed::Targeted));
            }
        }
        if q == query.q_cap {
            break;
        }
        q = next_prime(q)?;
    }
    tr.best_or_exceeded(query, StrategyUsed::Targeted)
}

/// Stage bounds for direct search: `n0, 2 n0, 4 n0, ...` while within the
/// cap, closed off with the cap itself when the doubling does not land on it.
pub fn direct_stages(n0: u64, n_cap: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut n = n0;
    while n <= n_cap {
        out.push(n);
        match n.checked_mul(2) {
            Some(m) => n = m,
            None => break,
        }
    }
    if out.last().is_some_and(|&l| l < n_cap) {
        out.push(n_cap);
    }
    out
}

/// Index of the first element of `ps` (ascending primes, all above `q`) whose
/// normalized difference with `q` exceeds `bound`. `rho` grows with `p`, so
/// the predicate is monotone.
fn first_above(ps: &[u64], q: u64, bound: &Rational) -> usize {
    ps.partition_point(|&p| {
        let v = Rational::new(p as u128 - q as u128, p as u128 + q as u128).expect("p + q > 0");
        v <= *bound
    })
}

/// Exhaustive search over prime pairs in staged lexicographic order.
///
/// Inside a stage the pairs with error below epsilon for a fixed `q` form a
/// contiguous run of `p`, so the first hit for each `q` is located by binary
/// search instead of scanning; the pair returned is the same one a linear
/// scan in the documented order would return.
pub fn direct_search(query: &ApproxQuery) -> Result<ApproxResult> {
    query.validate()?;
    match query.return_policy {
        ReturnPolicy::First => direct_first(query),
        ReturnPolicy::BestWithinCap => direct_best(query),
    }
}

fn direct_first(query: &ApproxQuery) -> Result<ApproxResult> {
    let t = &query.t;
    let lower = t - &query.epsilon;
    let mut tr = Tracker::default();
    let mut prev_bound = 0u64;
    for n in direct_stages(query.direct_n0, query.direct_n_cap) {
        let table = primes_up_to_with(n, &query.sieve)?;
        let primes = table.primes();
        // larger prime restricted to (prev_bound, n]
        let fresh_start = primes.partition_point(|&p| p <= prev_bound);
        for (i, &q) in primes.iter().enumerate() {
            let lo = fresh_start.max(i + 1);
            if lo >= primes.len() {
                break;
            }
            let run = &primes[lo..];
            let k = first_above(run, q, &lower);
            if let Some(&p) = run.get(k) {
                let pair = PrimePair::new(p, q)?;
                let error = tr.examine(pair, t);
                if error < query.epsilon {
                    return Ok(tr.success(pair, query, StrategyUsed::Direct));
                }
            }
        }
        prev_bound = n;
    }
    tr.best_or_exceeded(query, StrategyUsed::Direct)
}

fn direct_best(query: &ApproxQuery) -> Result<ApproxResult> {
    let t = &query.t;
    let mut tr = Tracker::default();
    let table = primes_up_to_with(query.direct_n_cap, &query.sieve)?;
    let primes = table.primes();
    for (i, &q) in primes.iter().enumerate() {
        let run = &primes[i + 1..];
        if run.is_empty() {
            break;
        }
        // the error is minimized at one of the two primes bracketing q r
        let k = first_above(run, q, t);
        let lo = k.saturating_sub(1);
        for &p in &run[lo..(k + 1).min(run.len())] {
            tr.examine(PrimePair::new(p, q)?, t);
        }
    }
    tr.best_or_exceeded(query, StrategyUsed::Direct)
}

fn exceeded(e: Error) -> std::result::Result<Box<CapExceeded>, Error> {
    match e {
        Error::CapExceeded(c) => Ok(c),
        other => Err(other),
    }
}

/// Dispatches on the query mode. In auto mode targeted search runs first;
/// if it exhausts `q_cap`, direct search runs with its own caps. Telemetry
/// covers both phases.
pub fn approximate(query: &ApproxQuery) -> Result<ApproxResult> {
    query.validate()?;
    match query.mode {
        Mode::Targeted => targeted_search(query),
        Mode::Direct => direct_search(query),
        Mode::Auto => {
            let first = match targeted_search(query) {
                Ok(r) => return Ok(r),
                Err(e) => exceeded(e)?,
            };
            let first_tele = Telemetry {
                candidates_examined: first.candidates_examined,
                max_prime_touched: first.max_prime_touched,
            };
            match direct_search(query) {
                Ok(mut r) => {
                    let tele = first_tele.merge(r.telemetry());
                    r.candidates_examined = tele.candidates_examined;
                    r.max_prime_touched = tele.max_prime_touched;
                    Ok(r)
                }
                Err(e) => {
                    let second = exceeded(e)?;
                    let tele = first_tele.merge(Telemetry {
                        candidates_examined: second.candidates_examined,
                        max_prime_touched: second.max_prime_touched,
                    });
                    let best = match (first.best, second.best) {
                        (Some(a), Some(b)) => Some(if better(&b, &a) { b } else { a }),
                        (a, b) => a.or(b),
                    };
                    Err(Error::CapExceeded(Box::new(CapExceeded {
                        strategy_used: StrategyUsed::Direct,
                        best,
                        candidates_examined: tele.candidates_examined,
                        max_prime_touched: tele.max_prime_touched,
                    })))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn query(t: (i64, i64), eps: (i64, i64)) -> ApproxQuery {
        ApproxQuery::new(Rational::frac(t.0, t.1), Rational::frac(eps.0, eps.1)).unwrap()
    }

    fn pq(r: &ApproxResult) -> (u64, u64) {
        (r.pair.p(), r.pair.q())
    }

    #[test]
    fn validation() {
        assert!(ApproxQuery::new(Rational::frac(3, 2), Rational::frac(1, 100)).is_err());
        assert!(ApproxQuery::new(Rational::frac(1, 2), Rational::zero()).is_err());
        let q = query((1, 2), (1, 2));
        assert!(q.clone().with_q_start(1).validate().is_err());
        assert!(q.clone().with_q_start(10).with_q_cap(5).validate().is_err());
        assert!(q.clone().with_direct_bounds(4, 100).validate().is_err());
        assert!(q.clone().with_direct_bounds(100, 50).validate().is_err());
    }

    #[test]
    fn targeted_examples() {
        let r = targeted_search(&query((1, 3), (1, 100))).unwrap();
        assert_eq!(pq(&r), (47, 23));
        assert_eq!(r.error, Rational::frac(1, 105));
        assert_eq!(r.max_prime_touched, 47);

        let r = targeted_search(&query((1, 3), (1, 100)).with_q_start(29)).unwrap();
        assert_eq!(pq(&r), (59, 29));
        assert_eq!(r.error, Rational::frac(1, 132));

        let r = targeted_search(&query((1, 10), (1, 100)).with_q_start(151)).unwrap();
        assert_eq!(pq(&r), (181, 151));
        assert_eq!(r.error, Rational::frac(4, 415));
    }

    #[test]
    fn targeted_cap() {
        let q = query((1, 3), (1, 1_000_000_000)).with_q_cap(50);
        match targeted_search(&q) {
            Err(Error::CapExceeded(c)) => {
                assert_eq!(c.strategy_used, StrategyUsed::Targeted);
                let best = c.best.unwrap();
                assert!(best.error >= q.epsilon);
                assert!(c.max_prime_touched <= 2 * 47 + 10);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn targeted_best_policy() {
        let q = query((1, 3), (1, 100))
            .with_q_cap(100)
            .with_policy(ReturnPolicy::BestWithinCap);
        let r = targeted_search(&q).unwrap();
        // the best over q <= 100 must be at least as good as the first hit
        assert!(r.error <= Rational::frac(1, 105));
    }

    #[test]
    fn direct_examples() {
        let q = query((1, 3), (1, 10)).with_mode(Mode::Direct);
        let r = direct_search(&q).unwrap();
        assert_eq!(pq(&r), (5, 2));
        assert_eq!(r.error, Rational::frac(2, 21));

        let r = direct_search(&query((1, 2), (1, 2))).unwrap();
        assert_eq!(pq(&r), (3, 2));
        assert_eq!(r.error, Rational::frac(3, 10));

        let q = query((1, 1000), (1, 1_000_000)).with_direct_bounds(100, 1_000);
        match direct_search(&q) {
            Err(Error::CapExceeded(c)) => assert!(c.best.is_some()),
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn stages() {
        assert_eq!(direct_stages(100, 1_000), vec![100, 200, 400, 800, 1_000]);
        assert_eq!(direct_stages(100, 800), vec![100, 200, 400, 800]);
        assert_eq!(direct_stages(5, 5), vec![5]);
        let s = direct_stages(100, 1_000_000);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*s.last().unwrap(), 1_000_000);
    }

    #[test]
    fn auto_mode() {
        let r = approximate(&query((1, 3), (1, 100))).unwrap();
        assert_eq!(pq(&r), (47, 23));
        assert_eq!(r.strategy_used, StrategyUsed::Targeted);

        let r = approximate(&query((999, 1000), (1, 1000))).unwrap();
        assert!(r.error < Rational::frac(1, 1000));

        // targeted cap so small it must fall back
        let q = query((1, 2), (1, 10)).with_q_start(2).with_q_cap(2);
        let q = ApproxQuery {
            t: Rational::frac(1, 100),
            ..q
        };
        let r = approximate(&q).unwrap();
        assert_eq!(r.strategy_used, StrategyUsed::Direct);
    }

    #[test]
    fn deterministic() {
        let q = query((7, 10), (1, 10_000));
        assert_eq!(approximate(&q).unwrap(), approximate(&q).unwrap());
    }
}
