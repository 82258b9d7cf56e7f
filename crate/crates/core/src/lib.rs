//! Approximating targets in (0, 1) by normalized prime differences
//! `(p - q) / (p + q)`.
//!
//! The crate is organized bottom-up:
//!
//! * [`primality`]: exact `u64` primality and neighbor primes.
//! * [`sieve`]: segmented sieve, `pi(x)`, and the Bertrand / `pi(x)` scans.
//! * [`rational`] and [`ratio`]: exact arithmetic for values, ratios, errors.
//! * [`strategies`]: targeted and direct searches and their combination.
//! * [`density`]: the finite sets `S_N`, gap statistics, complexity probe.
//! * [`oracle`]: slow independent reference searches for testing.
//! * [`worked_examples`]: exact re-derivation of two hand-computed search traces.
//! * [`cli`]: the command-line surface and its output envelope.

pub mod cli;
pub mod density;
pub mod error;
pub mod oracle;
pub mod primality;
pub mod ratio;
pub mod rational;
pub mod sieve;
pub mod strategies;
pub mod worked_examples;

pub use error::{Error, Result};
pub use ratio::{approx_error, error_identity_residual, ratio_to_t, rho, target_ratio, PrimePair};
pub use rational::Rational;
pub use strategies::{
    approximate, direct_search, targeted_search, ApproxQuery, ApproxResult, Mode, ReturnPolicy,
    StrategyUsed,
};

/// Version string carried in every output envelope.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
