//! Two hand traces of the targeted search, re-derived exactly.
//!
//! Each printed number (ratio, target `q r`, fraction, rounded value, rounded
//! error, and the comparison against the tolerance) is recomputed as an exact
//! rational and rounded to the number of decimals that was printed.

use serde::{Deserialize, Serialize};

use crate::primality::is_prime;
use crate::ratio::{approx_error, rho, target_ratio, PrimePair};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Match,
    /// Agrees only when the ratio is first rounded to its printed decimals.
    MatchWithRoundedRatio,
    Mismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleCheck {
    pub example: u8,
    pub q: Option<u64>,
    pub p: Option<u64>,
    pub quantity: String,
    pub exact: String,
    pub printed: String,
    pub derived: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExamplesReport {
    pub checks: Vec<ExampleCheck>,
    pub mismatches: u64,
    pub notes: Vec<String>,
}

/// Decimal places in a printed number.
fn places(printed: &str) -> usize {
    printed.split_once('.').map_or(0, |(_, f)| f.len())
}

struct Trace {
    example: u8,
    t: Rational,
    eps: Rational,
    checks: Vec<ExampleCheck>,
}

impl Trace {
    fn new(example: u8, t: Rational, eps: Rational) -> Self {
        Trace {
            example,
            t,
            eps,
            checks: Vec::new(),
        }
    }

    fn push(
        &mut self,
        q: Option<u64>,
        p: Option<u64>,
        quantity: &str,
        exact: String,
        printed: &str,
        derived: String,
        verdict: Verdict,
    ) {
        self.checks.push(ExampleCheck {
            example: self.example,
            q,
            p,
            quantity: quantity.into(),
            exact,
            printed: printed.into(),
            derived,
            verdict,
        });
    }

    fn number(
        &mut self,
        q: Option<u64>,
        p: Option<u64>,
        quantity: &str,
        x: &Rational,
        printed: &str,
    ) {
        let derived = x.to_fixed(places(printed));
        let verdict = if derived == printed {
            Verdict::Match
        } else {
            Verdict::Mismatch
        };
        self.push(q, p, quantity, x.to_string(), printed, derived, verdict);
    }

    fn ratio(&mut self, printed: &str) {
        let r = target_ratio(&self.t).expect("example targets lie in (0, 1)");
        self.number(None, None, "ratio", &r, printed);
    }

    /// `q r`, compared against the printed target. When `rounded_ratio` is
    /// given, a mismatch is re-checked using that rounded ratio instead.
    fn target(&mut self, q: u64, printed: &str, rounded_ratio: Option<&str>) {
        let r = target_ratio(&self.t).expect("example targets lie in (0, 1)");
        let x = Rational::from(q) * &r;
        let derived = x.to_fixed(places(printed));
        let verdict = if derived == printed {
            Verdict::Match
        } else {
            match rounded_ratio {
                Some(rr) => {
                    let rr: Rational = rr.parse().expect("literal");
                    if (Rational::from(q) * rr).to_fixed(places(printed)) == printed {
                        Verdict::MatchWithRoundedRatio
                    } else {
                        Verdict::Mismatch
                    }
                }
                None => Verdict::Mismatch,
            }
        };
        self.push(
            Some(q),
            None,
            "target_p",
            x.to_string(),
            printed,
            derived,
            verdict,
        );
    }

    /// A target claimed to be composite.
    fn not_prime(&mut self, q: u64, target: u64) {
        let verdict = if is_prime(target) {
            Verdict::Mismatch
        } else {
            Verdict::Match
        };
        self.push(
            Some(q),
            None,
            "target_not_prime",
            target.to_string(),
            "not prime",
            if is_prime(target) {
                "prime"
            } else {
                "not prime"
            }
            .into(),
            verdict,
        );
    }

    /// `(p - q) / (p + q)` as the unreduced fraction, the reduced fraction
    /// and the rounded decimal, then the rounded error and its comparison
    /// with epsilon.
    fn pair(
        &mut self,
        p: u64,
        q: u64,
        unreduced: Option<&str>,
        reduced: Option<&str>,
        value: &str,
        error: &str,
        below_eps: bool,
    ) {
        let pair = PrimePair::new(p, q).expect("example pairs are prime pairs");
        let v = rho(&pair);
        if let Some(u) = unreduced {
            let raw = format!("{}/{}", p - q, p + q);
            let verdict = if raw == u {
                Verdict::Match
            } else {
                Verdict::Mismatch
            };
            self.push(Some(q), Some(p), "fraction", v.to_string(), u, raw, verdict);
        }
        if let Some(red) = reduced {
            let verdict = if v.to_string() == red {
                Verdict::Match
            } else {
                Verdict::Mismatch
            };
            self.push(
                Some(q),
                Some(p),
                "reduced",
                v.to_string(),
                red,
                v.to_string(),
                verdict,
            );
        }
        self.number(Some(q), Some(p), "value", &v, value);
        let e = approx_error(&pair, &self.t).expect("example targets lie in (0, 1)");
        self.number(Some(q), Some(p), "error", &e, error);
        let holds = (e < self.eps) == below_eps;
        let printed = if below_eps { "< eps" } else { "> eps" };
        let derived = if e < self.eps { "< eps" } else { ">= eps" };
        self.push(
            Some(q),
            Some(p),
            "comparison",
            e.to_string(),
            printed,
            derived.into(),
            if holds {
                Verdict::Match
            } else {
                Verdict::Mismatch
            },
        );
    }
}

fn first_trace() -> Vec<ExampleCheck> {
    let mut tr = Trace::new(1, Rational::frac(1, 3), Rational::frac(1, 100));
    tr.ratio("2");
    for q in [2u64, 3, 5, 7, 11, 13, 17] {
        tr.target(q, &(2 * q).to_string(), None);
        tr.not_prime(q, 2 * q);
    }
    tr.pair(
        37,
        17,
        Some("20/54"),
        Some("10/27"),
        "0.370",
        "0.037",
        false,
    );
    tr.target(29, "58", None);
    tr.pair(59, 29, Some("30/88"), Some("15/44"), "0.341", "0.008", true);
    tr.checks
}

fn second_trace() -> Vec<ExampleCheck> {
    let mut tr = Trace::new(2, Rational::frac(1, 10), Rational::frac(1, 100));
    tr.ratio("1.222");
    let rows: [(u64, &str, u64, Option<&str>, Option<&str>, &str, &str, bool); 6] = [
        (
            11,
            "13.44",
            13,
            Some("2/24"),
            Some("1/12"),
            "0.0833",
            "0.0167",
            false,
        ),
        (
            41,
            "50.1",
            53,
            Some("12/94"),
            Some("6/47"),
            "0.1277",
            "0.0277",
            false,
        ),
        (
            61,
            "74.5",
            73,
            Some("12/134"),
            Some("6/67"),
            "0.0896",
            "0.0104",
            false,
        ),
        (
            71,
            "86.8",
            89,
            Some("18/160"),
            Some("9/80"),
            "0.1125",
            "0.0125",
            false,
        ),
        (
            101,
            "123.4",
            127,
            Some("26/228"),
            Some("13/114"),
            "0.1140",
            "0.0140",
            false,
        ),
        (
            151,
            "184.5",
            181,
            Some("30/332"),
            Some("15/166"),
            "0.0904",
            "0.0096",
            true,
        ),
    ];
    for (q, target, p, unreduced, reduced, value, error, below) in rows {
        tr.target(q, target, Some("1.222"));
        tr.pair(p, q, unreduced, reduced, value, error, below);
    }
    tr.checks
}

pub fn verify_examples() -> ExamplesReport {
    let mut checks = first_trace();
    checks.extend(second_trace());
    let mismatches = checks
        .iter()
        .filter(|c| c.verdict == Verdict::Mismatch)
        .count() as u64;
    let notes = vec![
        "example 1 skips q = 19 and q = 23; the canonical targeted order reaches (47, 23) with error 1/105 before (59, 29)".into(),
        "example 1 picks p = 37 for target 34, where 31 and 37 are equally near".into(),
        "example 2 starts at q = 11 and skips several primes q; the canonical order from q = 2 stops at (23, 19) with error 1/210".into(),
        "example 2 targets for q = 61 and q = 151 were computed with r rounded to 1.222; exact r = 11/9 gives 74.6 and 184.6".into(),
    ];
    ExamplesReport {
        checks,
        mismatches,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_printed_number_is_reproduced() {
        let rep = verify_examples();
        let bad: Vec<_> = rep
            .checks
            .iter()
            .filter(|c| c.verdict == Verdict::Mismatch)
            .collect();
        assert!(bad.is_empty(), "{bad:#?}");
        assert_eq!(rep.mismatches, 0);
    }

    #[test]
    fn rounded_ratio_rows() {
        let rep = verify_examples();
        let rounded: Vec<u64> = rep
            .checks
            .iter()
            .filter(|c| c.verdict == Verdict::MatchWithRoundedRatio)
            .filter_map(|c| c.q)
            .collect();
        assert_eq!(rounded, vec![61, 151]);
    }

    #[test]
    fn specific_rows() {
        let rep = verify_examples();
        let find = |ex: u8, p: u64, qty: &str| {
            rep.checks
                .iter()
                .find(|c| c.example == ex && c.p == Some(p) && c.quantity == qty)
                .unwrap()
                .clone()
        };
        assert_eq!(find(1, 37, "value").exact, "10/27");
        assert_eq!(find(1, 37, "value").derived, "0.370");
        assert_eq!(find(2, 89, "value").exact, "9/80");
        assert_eq!(find(2, 89, "error").exact, "1/80");
        assert_eq!(find(2, 127, "error").exact, "4/285");
        assert_eq!(find(2, 127, "value").exact, "13/114");
    }
}
