#![allow(dead_code)]

use prime_ratio::Rational;

/// Direct-search bound used by the conformance fixtures; small enough for
/// the trial-division oracle to replay a full miss.
pub const CONFORMANCE_N_CAP: u64 = 10_000;

/// Targeted replays stop at this q.
pub const CONFORMANCE_Q_STOP: u64 = 10_000;

/// Twenty fixed (t, epsilon) pairs for order conformance.
pub fn conformance_fixtures() -> Vec<(Rational, Rational)> {
    [
        ("1/3", "1/100"),
        ("1/10", "1/100"),
        ("1/2", "1/1000"),
        ("2/3", "1/500"),
        ("9/10", "1/1000"),
        ("1/7", "1/200"),
        ("0.25", "1/1000"),
        ("0.37", "1/300"),
        ("0.05", "1/1000"),
        ("0.99", "1/1000"),
        ("0.618", "1/2000"),
        ("0.123", "1/500"),
        ("3/4", "1/50"),
        ("0.8", "1/1000"),
        ("0.45", "1/800"),
        ("0.29", "1/1000"),
        ("0.71", "1/400"),
        ("0.555", "1/1500"),
        ("0.02", "1/100"),
        ("0.93", "1/2500"),
    ]
    .iter()
    .map(|(t, e)| (t.parse().unwrap(), e.parse().unwrap()))
    .collect()
}
