//! The normalized difference `(p - q) / (p + q)` of a prime pair and the
//! exact algebra around it.
//!
//! For a target `t` in (0, 1) the ratio `r = (1 + t) / (1 - t)` is the value
//! of `p / q` that hits `t` exactly. The approximation error then satisfies
//! the identity
//!
//! ```text
//! rho(p, q) - t = 2 (p - q r) / ((p + q) (r + 1))
//! ```
//!
//! which the searches rely on instead of an inequality chain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primality::is_prime;
use crate::rational::Rational;

/// Two primes `p > q`. Construction checks both primality and order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PrimePair {
    p: u64,
    q: u64,
}

impl PrimePair {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if p <= q {
            return Err(Error::domain(format!(
                "prime pair needs p > q, got p = {p}, q = {q}"
            )));
        }
        for (name, v) in [("p", p), ("q", q)] {
            if !is_prime(v) {
                return Err(Error::domain(format!("{name} = {v} is not prime")));
            }
        }
        Ok(PrimePair { p, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn sum(&self) -> u128 {
        self.p as u128 + self.q as u128
    }
}

impl<'de> Deserialize<'de> for PrimePair {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            p: u64,
            q: u64,
        }
        let raw = Raw::deserialize(d)?;
        PrimePair::new(raw.p, raw.q).map_err(serde::de::Error::custom)
    }
}

impl std::fmt::Display for PrimePair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// Fails unless `0 < t < 1`.
pub fn ensure_unit_interval(t: &Rational) -> Result<()> {
    if t.is_positive() && *t < Rational::one() {
        Ok(())
    } else {
        Err(Error::domain(format!("target must lie in (0, 1), got {t}")))
    }
}

/// `(p - q) / (p + q)`, always in (0, 1).
pub fn rho(pair: &PrimePair) -> Rational {
    let p = pair.p as u128;
    let q = pair.q as u128;
    Rational::new(p - q, p + q).expect("p + q > 0")
}

/// `r = (1 + t) / (1 - t)`, the prime ratio `p / q` that would hit `t`.
pub fn target_ratio(t: &Rational) -> Result<Rational> {
    ensure_unit_interval(t)?;
    let one = Rational::one();
    Ok((&one + t) / (&one - t))
}

/// Inverse of [`target_ratio`]: `t = (r - 1) / (r + 1)`.
pub fn ratio_to_t(r: &Rational) -> Result<Rational> {
    let one = Rational::one();
    if *r <= one {
        return Err(Error::domain(format!("ratio must exceed 1, got {r}")));
    }
    Ok((r - &one) / (r + &one))
}

/// `|rho(pair) - t|`, exact.
pub fn approx_error(pair: &PrimePair, t: &Rational) -> Result<Rational> {
    ensure_unit_interval(t)?;
    Ok((rho(pair) - t).abs())
}

/// Left side minus right side of
/// `rho(p, q) - t = 2 (p - q r) / ((p + q) (r + 1))`. Always zero.
pub fn error_identity_residual(pair: &PrimePair, t: &Rational) -> Result<Rational> {
    let r = target_ratio(t)?;
    let p = Rational::from(pair.p);
    let q = Rational::from(pair.q);
    let lhs = rho(pair) - t;
    let rhs = Rational::from(2u64) * (&p - &(&q * &r)) / ((&p + &q) * (&r + &Rational::one()));
    Ok(lhs - rhs)
}
