//! Slow, independent reference searches.
//!
//! Nothing here calls the sieve, Miller-Rabin or the search code. Primality
//! is trial division, neighbors are found by walking one integer at a time,
//! and errors are computed by integer cross-multiplication from `p`, `q` and
//! the numerator and denominator of `t`. Sizes are capped at 10^4.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::ratio::PrimePair;
use crate::rational::Rational;

pub const ORACLE_MAX_N: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleAnswer {
    pub pair: PrimePair,
    pub error: Rational,
    /// 1-based position of `pair` among the pairs the oracle evaluated.
    pub rank_in_order: u64,
}

pub fn trial_division_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn primes_naive(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| trial_division_is_prime(k)).collect()
}

/// `t` as `(num, den)` with `0 < num < den`.
fn split_target(t: &Rational) -> Result<(BigInt, BigInt)> {
    let (n, d) = (t.numer().clone(), t.denom().clone());
    if !n.is_positive() || n >= d {
        return Err(Error::domain(format!(
            "oracle target must lie in (0, 1), got {t}"
        )));
    }
    Ok((n, d))
}

/// `|(p - q)/(p + q) - tn/td|` as `(numerator, denominator)`, unreduced.
fn raw_error(p: u64, q: u64, tn: &BigInt, td: &BigInt) -> (BigInt, BigInt) {
    let diff = BigInt::from(p - q);
    let sum = BigInt::from(p + q);
    let num = (&diff * td - tn * &sum).abs();
    (num, td * sum)
}

fn cmp_frac(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> Ordering {
    (&a.0 * &b.1).cmp(&(&b.0 * &a.1))
}

fn answer(p: u64, q: u64, err: (BigInt, BigInt), rank: u64) -> OracleAnswer {
    OracleAnswer {
        pair: PrimePair::new(p, q).expect("oracle only forms prime pairs p > q"),
        error: Rational::new(err.0, err.1).expect("positive denominator"),
        rank_in_order: rank,
    }
}

fn check_n(n: u64) -> Result<()> {
    if !(5..=ORACLE_MAX_N).contains(&n) {
        return Err(Error::domain(format!(
            "oracle bound must be in [5, {ORACLE_MAX_N}], got {n}"
        )));
    }
    Ok(())
}

/// Exhaustive minimizer of the error over all prime pairs `q < p <= n`.
/// Ties go to the smaller `p + q`, then the smaller `p`.
pub fn best_pair_up_to(n: u64, t: &Rational) -> Result<OracleAnswer> {
    check_n(n)?;
    let (tn, td) = split_target(t)?;
    let ps = primes_naive(n);
    let mut best: Option<(u64, u64, (BigInt, BigInt), u64)> = None;
    let mut rank = 0;
    for (i, &q) in ps.iter().enumerate() {
        for &p in &ps[i + 1..] {
            rank += 1;
            let e = raw_error(p, q, &tn, &td);
            let replace = match &best {
                None => true,
                Some((bp, bq, be, _)) => {
                    cmp_frac(&e, be)
                        .then((p + q).cmp(&(bp + bq)))
                        .then(p.cmp(bp))
                        == Ordering::Less
                }
            };
            if replace {
                best = Some((p, q, e, rank));
            }
        }
    }
    let (p, q, e, r) = best.expect("n >= 5 gives at least three pairs");
    Ok(answer(p, q, e, r))
}

fn below_eps(e: &(BigInt, BigInt), eps: &Rational) -> bool {
    cmp_frac(e, &(eps.numer().clone(), eps.denom().clone())) == Ordering::Less
}

/// Replays the targeted search order for primes `q` in `[q_start, q_stop]`:
/// `x = round_half_up(q (1 + t) / (1 - t))`, then `x` itself if prime, else
/// the nearest prime on each side, closer first and smaller first on ties,
/// skipping candidates not above `q`.
pub fn replay_targeted_order(
    t: &Rational,
    epsilon: &Rational,
    q_start: u64,
    q_stop: u64,
) -> Result<Option<OracleAnswer>> {
    let (tn, td) = split_target(t)?;
    if !epsilon.is_positive() || q_start < 2 {
        return Err(Error::domain(
            "oracle replay needs epsilon > 0 and q_start >= 2",
        ));
    }
    // r = (td + tn) / (td - tn)
    let rn = &td + &tn;
    let rd = &td - &tn;
    let mut rank = 0;
    for q in q_start..=q_stop {
        if !trial_division_is_prime(q) {
            continue;
        }
        // floor((2 q rn + rd) / (2 rd)), all terms positive
        let x: BigInt = (BigInt::from(2 * q) * &rn + &rd) / (BigInt::from(2) * &rd);
        let x: u64 = x
            .try_into()
            .map_err(|_| Error::Overflow("oracle target".into()))?;
        let candidates = if trial_division_is_prime(x) {
            vec![x]
        } else {
            let mut up = x + 1;
            while !trial_division_is_prime(up) {
                up += 1;
            }
            let mut down = x - 1;
            while !trial_division_is_prime(down) {
                down -= 1;
            }
            if up - x < x - down {
                vec![up, down]
            } else {
                vec![down, up]
            }
        };
        for p in candidates {
            if p <= q {
                continue;
            }
            rank += 1;
            let e = raw_error(p, q, &tn, &td);
            if below_eps(&e, epsilon) {
                return Ok(Some(answer(p, q, e, rank)));
            }
        }
    }
    Ok(None)
}

/// Replays the staged lexicographic order of direct search by visiting
/// every pair: stage bounds `n0, 2 n0, ...` closed off at `n_cap`, and in
/// each stage all `(q, p)` with `p` in `(previous bound, bound]`, `q`
/// ascending then `p` ascending.
pub fn replay_direct_order(
    t: &Rational,
    epsilon: &Rational,
    n0: u64,
    n_cap: u64,
) -> Result<Option<OracleAnswer>> {
    check_n(n_cap)?;
    let (tn, td) = split_target(t)?;
    if n0 < 5 || n0 > n_cap {
        return Err(Error::domain("oracle replay needs 5 <= n0 <= n_cap"));
    }
    let mut bounds = Vec::new();
    let mut b = n0;
    while b <= n_cap {
        bounds.push(b);
        b *= 2;
    }
    if *bounds.last().unwrap() != n_cap {
        bounds.push(n_cap);
    }
    let mut prev = 0;
    let mut rank = 0;
    for &bound in &bounds {
        let ps = primes_naive(bound);
        for &q in &ps {
            for &p in &ps {
                if p <= q || p <= prev {
                    continue;
                }
                rank += 1;
                let e = raw_error(p, q, &tn, &td);
                if below_eps(&e, epsilon) {
                    return Ok(Some(answer(p, q, e, rank)));
                }
            }
        }
        prev = bound;
    }
    Ok(None)
}

/// Every distinct normalized difference with both primes `<= n`, sorted,
/// built by pairwise comparison of unreduced fractions.
pub fn naive_sn(n: u64) -> Result<Vec<Rational>> {
    check_n(n)?;
    let ps = primes_naive(n);
    let mut vals: Vec<(u64, u64)> = Vec::new();
    for &q in &ps {
        for &p in &ps {
            if p > q {
                vals.push((p - q, p + q));
            }
        }
    }
    vals.sort_by(|a, b| (a.0 as u128 * b.1 as u128).cmp(&(b.0 as u128 * a.1 as u128)));
    vals.dedup_by(|a, b| a.0 as u128 * b.1 as u128 == b.0 as u128 * a.1 as u128);
    Ok(vals
        .into_iter()
        .map(|(a, b)| Rational::new(a, b).expect("positive denominator"))
        .collect())
}

/// Fixture rows frozen in `fixtures/oracle_answers.txt`.
pub enum Fixture {
    Best {
        n: u64,
        t: Rational,
    },
    Targeted {
        t: Rational,
        eps: Rational,
        q_start: u64,
        q_stop: u64,
    },
    Direct {
        t: Rational,
        eps: Rational,
        n0: u64,
        n_cap: u64,
    },
}

pub fn default_fixtures() -> Vec<Fixture> {
    let f = Rational::frac;
    vec![
        Fixture::Best { n: 7, t: f(1, 4) },
        Fixture::Best {
            n: 10,
            t: f(99, 100),
        },
        Fixture::Best { n: 100, t: f(1, 3) },
        Fixture::Best {
            n: 1_000,
            t: f(1, 10),
        },
        Fixture::Targeted {
            t: f(1, 3),
            eps: f(1, 100),
            q_start: 2,
            q_stop: 100,
        },
        Fixture::Targeted {
            t: f(1, 3),
            eps: f(1, 100),
            q_start: 29,
            q_stop: 100,
        },
        Fixture::Targeted {
            t: f(1, 10),
            eps: f(1, 100),
            q_start: 151,
            q_stop: 200,
        },
        Fixture::Targeted {
            t: f(1, 10),
            eps: f(1, 100),
            q_start: 2,
            q_stop: 1_000,
        },
        Fixture::Direct {
            t: f(1, 3),
            eps: f(1, 10),
            n0: 100,
            n_cap: 1_000,
        },
        Fixture::Direct {
            t: f(1, 2),
            eps: f(1, 2),
            n0: 100,
            n_cap: 1_000,
        },
        Fixture::Direct {
            t: f(1, 1000),
            eps: f(1, 1_000_000),
            n0: 100,
            n_cap: 1_000,
        },
    ]
}

fn opt_line(out: &mut String, head: String, ans: Option<OracleAnswer>) {
    match ans {
        Some(a) => writeln!(
            out,
            "{head}\t{}\t{}\t{}\t{}",
            a.pair.p(),
            a.pair.q(),
            a.error,
            a.rank_in_order
        ),
        None => writeln!(out, "{head}\t-\t-\t-\t-"),
    }
    .expect("writing to a String");
}

/// Tab-separated table of oracle answers for the given fixtures.
pub fn fixture_table(fixtures: &[Fixture]) -> Result<String> {
    let mut out = String::from("# kind\tparams\tp\tq\terror\trank\n");
    for fx in fixtures {
        match fx {
            Fixture::Best { n, t } => {
                let a = best_pair_up_to(*n, t)?;
                opt_line(&mut out, format!("best\tN={n} t={t}"), Some(a));
            }
            Fixture::Targeted {
                t,
                eps,
                q_start,
                q_stop,
            } => {
                let a = replay_targeted_order(t, eps, *q_start, *q_stop)?;
                opt_line(
                    &mut out,
                    format!("targeted\tt={t} eps={eps} q={q_start}..{q_stop}"),
                    a,
                );
            }
            Fixture::Direct { t, eps, n0, n_cap } => {
                let a = replay_direct_order(t, eps, *n0, *n_cap)?;
                opt_line(
                    &mut out,
                    format!("direct\tt={t} eps={eps} N0={n0} cap={n_cap}"),
                    a,
                );
            }
        }
    }
    Ok(out)
}
