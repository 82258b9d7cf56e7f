//! The finite sets `S_N = { (p - q) / (p + q) : q < p <= N both prime }`,
//! their gap statistics, and the complexity probe that tabulates how far the
//! searches have to go as epsilon shrinks.

use std::cmp::Ordering;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::PrimePair;
use crate::rational::Rational;
use crate::sieve::primes_up_to;
use crate::strategies::{approximate, ApproxQuery, StrategyUsed};

/// Largest `N` accepted by [`sample_sn`] by default. The pair count grows
/// like `N^2 / ln^2 N`.
pub const DEFAULT_SN_CAP: u64 = 10_000;

/// Smallest `N` for which `S_N` is sampled (three values at `N = 5`).
pub const MIN_SN_BOUND: u64 = 5;

/// A reduced fraction with machine-word parts, ordered by value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Frac {
    n: u64,
    d: u64,
}

impl Ord for Frac {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.n as u128 * o.d as u128).cmp(&(o.n as u128 * self.d as u128))
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl From<Frac> for Rational {
    fn from(f: Frac) -> Rational {
        Rational::new(f.n, f.d).expect("positive denominator")
    }
}

/// Distinct values of S_N in ascending order, plus the raw pair count.
fn sn_fracs(n: u64, cap: u64) -> Result<(Vec<Frac>, u64)> {
    if n < MIN_SN_BOUND {
        return Err(Error::domain(format!(
            "S_N needs N >= {MIN_SN_BOUND}, got {n}"
        )));
    }
    if n > cap {
        return Err(Error::AboveCap {
            what: "S_N bound".into(),
            value: n,
            cap,
        });
    }
    let table = primes_up_to(n)?;
    let ps = table.primes();
    let mut vals = Vec::with_capacity(ps.len() * ps.len() / 2);
    for (i, &q) in ps.iter().enumerate() {
        for &p in &ps[i + 1..] {
            let (a, b) = (p - q, p + q);
            let g = a.gcd(&b);
            vals.push(Frac { n: a / g, d: b / g });
        }
    }
    let pairs = vals.len() as u64;
    vals.sort_unstable();
    vals.dedup();
    Ok((vals, pairs))
}

/// All distinct values of S_N, strictly ascending, for `5 <= n <= cap`.
pub fn sample_sn_with_cap(n: u64, cap: u64) -> Result<Vec<Rational>> {
    let (vals, _) = sn_fracs(n, cap)?;
    Ok(vals.into_iter().map(Rational::from).collect())
}

/// [`sample_sn_with_cap`] with the default cap of 10^4.
pub fn sample_sn(n: u64) -> Result<Vec<Rational>> {
    sample_sn_with_cap(n, DEFAULT_SN_CAP)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub n: u64,
    pub pair_count: u64,
    pub distinct_count: u64,
    pub window_a: Rational,
    pub window_b: Rational,
    /// Elements of S_N inside `[a, b]`.
    pub points_in_window: u64,
    /// Largest gap between consecutive points of `{a} + (S_N within [a, b]) + {b}`.
    pub max_gap_in_window: Rational,
    /// `(max S_N - min S_N) / (distinct_count - 1)`.
    pub avg_spacing: Rational,
    /// `ln(N)^2 / N^2`, the heuristic average spacing.
    pub log_spacing_bound: f64,
}

/// Largest gap in `[a, b]` between consecutive elements of the sorted `vals`,
/// counting the boundary gaps from `a` to the first point and from the last
/// point to `b`.
pub fn max_gap_in_window(vals: &[Rational], a: &Rational, b: &Rational) -> (Rational, u64) {
    let lo = vals.partition_point(|v| v < a);
    let hi = vals.partition_point(|v| v <= b);
    let inside = &vals[lo..hi];
    let mut prev = a;
    let mut gap = Rational::zero();
    for v in inside.iter().chain(std::iter::once(b)) {
        let g = v - prev;
        if g > gap {
            gap = g;
        }
        prev = v;
    }
    (gap, inside.len() as u64)
}

pub fn density_report(n: u64, a: &Rational, b: &Rational) -> Result<DensityReport> {
    density_report_with_cap(n, a, b, DEFAULT_SN_CAP)
}

pub fn density_report_with_cap(
    n: u64,
    a: &Rational,
    b: &Rational,
    cap: u64,
) -> Result<DensityReport> {
    if !(a.is_positive() && a < b && *b < Rational::one()) {
        return Err(Error::domain(format!(
            "window must satisfy 0 < a < b < 1, got [{a}, {b}]"
        )));
    }
    let (fracs, pair_count) = sn_fracs(n, cap)?;
    let vals: Vec<Rational> = fracs.into_iter().map(Rational::from).collect();
    let (max_gap, points) = max_gap_in_window(&vals, a, b);
    let distinct = vals.len() as u64;
    let span = vals.last().expect("N >= 5") - vals.first().expect("N >= 5");
    let avg_spacing = if distinct > 1 {
        span / Rational::from(distinct - 1)
    } else {
        Rational::zero()
    };
    let ln = (n as f64).ln();
    Ok(DensityReport {
        n,
        pair_count,
        distinct_count: distinct,
        window_a: a.clone(),
        window_b: b.clone(),
        points_in_window: points,
        max_gap_in_window: max_gap,
        avg_spacing,
        log_spacing_bound: ln * ln / (n as f64 * n as f64),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeStatus {
    Ok,
    CapExceeded,
}

/// One measurement of the approximation search. Failed runs are kept and
/// flagged, with their telemetry, rather than dropped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityProbeRow {
    pub t: Rational,
    pub epsilon: Rational,
    pub status: ProbeStatus,
    pub pair: Option<PrimePair>,
    pub error: Option<Rational>,
    pub max_prime_touched: u64,
    pub candidates_examined: u64,
    pub strategy_used: StrategyUsed,
}

/// Runs [`approximate`] for every `(t, epsilon)` in the grid product, `t`
/// outermost. `template` supplies mode, caps and policy.
pub fn complexity_probe_with(
    t_grid: &[Rational],
    eps_grid: &[Rational],
    template: &ApproxQuery,
) -> Result<Vec<ComplexityProbeRow>> {
    if t_grid.is_empty() || eps_grid.is_empty() {
        return Err(Error::domain("probe grids must be nonempty"));
    }
    let mut rows = Vec::with_capacity(t_grid.len() * eps_grid.len());
    for t in t_grid {
        for eps in eps_grid {
            let query = ApproxQuery {
                t: t.clone(),
                epsilon: eps.clone(),
                ..template.clone()
            };
            query.validate()?;
            let row = match approximate(&query) {
                Ok(r) => ComplexityProbeRow {
                    t: t.clone(),
                    epsilon: eps.clone(),
                    status: ProbeStatus::Ok,
                    pair: Some(r.pair),
                    error: Some(r.error),
                    max_prime_touched: r.max_prime_touched,
                    candidates_examined: r.candidates_examined,
                    strategy_used: r.strategy_used,
                },
                Err(Error::CapExceeded(c)) => ComplexityProbeRow {
                    t: t.clone(),
                    epsilon: eps.clone(),
                    status: ProbeStatus::CapExceeded,
                    pair: c.best.as_ref().map(|b| b.pair),
                    error: c.best.map(|b| b.error),
                    max_prime_touched: c.max_prime_touched,
                    candidates_examined: c.candidates_examined,
                    strategy_used: c.strategy_used,
                },
                Err(e) => return Err(e),
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Probe with default caps in auto mode.
pub fn complexity_probe(
    t_grid: &[Rational],
    eps_grid: &[Rational],
) -> Result<Vec<ComplexityProbeRow>> {
    let template = ApproxQuery::new(Rational::frac(1, 2), Rational::frac(1, 2))?;
    complexity_probe_with(t_grid, eps_grid, &template)
}

/// Per-epsilon maximum of `max_prime_touched` over all `t`, in the order the
/// epsilons first appear.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrendPoint {
    pub epsilon: Rational,
    pub max_prime_touched: u64,
    pub ok_rows: u64,
    pub rows: u64,
}

pub fn probe_trend(rows: &[ComplexityProbeRow]) -> Vec<TrendPoint> {
    let mut out: Vec<TrendPoint> = Vec::new();
    for row in rows {
        let idx = match out.iter().position(|p| p.epsilon == row.epsilon) {
            Some(i) => i,
            None => {
                out.push(TrendPoint {
                    epsilon: row.epsilon.clone(),
                    max_prime_touched: 0,
                    ok_rows: 0,
                    rows: 0,
                });
                out.len() - 1
            }
        };
        let p = &mut out[idx];
        p.rows += 1;
        if row.status == ProbeStatus::Ok {
            p.ok_rows += 1;
        }
        p.max_prime_touched = p.max_prime_touched.max(row.max_prime_touched);
    }
    out
}

/// For each `t`, compares consecutive rows ordered by decreasing epsilon and
/// counts `(nondecreasing, total)` comparisons of `max_prime_touched`.
pub fn monotone_comparisons(rows: &[ComplexityProbeRow]) -> (usize, usize) {
    let mut ts: Vec<&Rational> = Vec::new();
    for r in rows {
        if !ts.contains(&&r.t) {
            ts.push(&r.t);
        }
    }
    let mut good = 0;
    let mut total = 0;
    for t in ts {
        let mut series: Vec<&ComplexityProbeRow> = rows.iter().filter(|r| &r.t == t).collect();
        series.sort_by(|a, b| b.epsilon.cmp(&a.epsilon));
        for w in series.windows(2) {
            total += 1;
            if w[1].max_prime_touched >= w[0].max_prime_touched {
                good += 1;
            }
        }
    }
    (good, total)
}
