//! Exact rationals for targets, tolerances, values and errors.
//!
//! `Rational` wraps [`BigRational`], which keeps every value reduced with a
//! positive denominator, so equality and ordering are structural. Input is
//! accepted as `a/b`, plain decimals (`0.1`, `-2.50`) and scientific
//! notation (`1e-3`, `2.5E4`), all parsed without going through floats.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Significant digits in the decimal rendering that accompanies every
/// exact value in reports.
pub const REPORT_SIG_DIGITS: usize = 12;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// `numer / denom`, reduced. Fails on a zero denominator.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Option<Self> {
        let d = denom.into();
        if d.is_zero() {
            return None;
        }
        Some(Rational(BigRational::new(numer.into(), d)))
    }

    /// Shorthand for small literals; panics on a zero denominator.
    pub fn frac(numer: i64, denom: i64) -> Self {
        Rational::new(numer, denom).expect("nonzero denominator")
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    /// `floor(self + 1/2)`: nearest integer with halves rounded up.
    pub fn round_half_up(&self) -> BigInt {
        let twice: BigInt = self.numer() * 2 + self.denom();
        twice.div_floor(&(self.denom() * 2))
    }

    pub fn floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }

    /// Nearest `f64`; for display and logarithms only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Positional decimal with exactly `digits` significant digits, rounded
    /// half away from zero.
    pub fn to_sig_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let n = self.numer().abs();
        let d = self.denom().clone();

        // exponent e with 10^e <= |x| < 10^(e+1)
        let mut e = n.to_string().len() as i64 - d.to_string().len() as i64;
        loop {
            let (lo_n, lo_d) = scale(&BigInt::one(), &BigInt::one(), e);
            if n.clone() * &lo_d < lo_n.clone() * &d {
                e -= 1;
                continue;
            }
            let (hi_n, hi_d) = scale(&BigInt::one(), &BigInt::one(), e + 1);
            if n.clone() * &hi_d >= hi_n * &d {
                e += 1;
                continue;
            }
            break;
        }
        let shift = digits as i64 - 1 - e;
        let mut mant = round_scaled(&n, &d, shift);
        if mant.to_string().len() > digits {
            e += 1;
            mant = round_scaled(&n, &d, digits as i64 - 1 - e);
        }
        let s = mant.to_string();
        let body = if e >= digits as i64 - 1 {
            format!("{s}{}", "0".repeat((e - (digits as i64 - 1)) as usize))
        } else if e >= 0 {
            let split = (e + 1) as usize;
            format!("{}.{}", &s[..split], &s[split..])
        } else {
            format!("0.{}{s}", "0".repeat((-e - 1) as usize))
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }

    /// Report rendering: 12 significant digits.
    pub fn to_decimal(&self) -> String {
        self.to_sig_decimal(REPORT_SIG_DIGITS)
    }

    /// Fixed-point decimal with `places` digits after the point, rounded
    /// half away from zero.
    pub fn to_fixed(&self, places: usize) -> String {
        let n = self.numer().abs();
        let m = round_scaled(&n, self.denom(), places as i64).to_string();
        let m = if m.len() <= places {
            format!("{}{m}", "0".repeat(places + 1 - m.len()))
        } else {
            m
        };
        let (int, frac) = m.split_at(m.len() - places);
        let sign = if self.is_negative() && m.chars().any(|c| c != '0') {
            "-"
        } else {
            ""
        };
        if places == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }
}

/// `(n, d) * 10^k` as a fraction.
fn scale(n: &BigInt, d: &BigInt, k: i64) -> (BigInt, BigInt) {
    let p = num_traits::pow(BigInt::from(10), k.unsigned_abs() as usize);
    if k >= 0 {
        (n * p, d.clone())
    } else {
        (n.clone(), d * p)
    }
}

/// `round(n / d * 10^k)` for nonnegative `n / d`, halves rounded up.
fn round_scaled(n: &BigInt, d: &BigInt, k: i64) -> BigInt {
    let (sn, sd) = scale(n, d, k);
    let twice: BigInt = sn * 2 + &sd;
    twice.div_floor(&(sd * 2))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseRationalError {}

fn parse_decimal(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(format!("not a decimal number: {s:?}"));
    let (neg, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(i) => {
            let exp: i64 = body[i + 1..].parse().map_err(|_| err())?;
            (&body[..i], exp)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(err());
    }
    if exp.unsigned_abs() > 10_000 {
        return Err(ParseRationalError(format!("exponent out of range: {s:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut n: BigInt = digits.parse().map_err(|_| err())?;
    if neg {
        n = -n;
    }
    let (sn, sd) = scale(&n, &BigInt::one(), exp - frac_part.len() as i64);
    Ok(Rational(BigRational::new(sn, sd)))
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let n = parse_decimal(a.trim())?;
            let d = parse_decimal(b.trim())?;
            if d.is_zero() {
                return Err(ParseRationalError(format!("zero denominator in {s:?}")));
            }
            Ok(Rational(n.0 / d.0))
        } else {
            parse_decimal(s)
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational::integer(n)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational(self.0.$m(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

/// `true` when the integer is nonnegative and fits in `u64`.
pub(crate) fn to_u64(n: &BigInt) -> Option<u64> {
    if n.sign() == Sign::Minus {
        None
    } else {
        n.to_u64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parsing() {
        assert_eq!(r("1/3"), Rational::frac(1, 3));
        assert_eq!(r("0.1"), Rational::frac(1, 10));
        assert_eq!(r(".5"), Rational::frac(1, 2));
        assert_eq!(r("2/4"), Rational::frac(1, 2));
        assert_eq!(r("1e-3"), Rational::frac(1, 1000));
        assert_eq!(r("2.5E2"), Rational::integer(250));
        assert_eq!(r("-0.25"), Rational::frac(-1, 4));
        assert_eq!(r(" 7 "), Rational::integer(7));
        assert_eq!(r("1/-2"), Rational::frac(-1, 2));
        assert_eq!(r("0.1/0.3"), Rational::frac(1, 3));
        for bad in ["", "abc", "1/0", "1.2.3", "e5", "1e", "--1", "0x10", "."] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn canonical_display() {
        assert_eq!(Rational::frac(30, 88).to_string(), "15/44");
        assert_eq!(Rational::frac(6, -4).to_string(), "-3/2");
        assert_eq!(Rational::integer(2).to_string(), "2/1");
    }

    #[test]
    fn decimals() {
        assert_eq!(Rational::frac(1, 3).to_decimal(), "0.333333333333");
        assert_eq!(Rational::frac(2, 3).to_decimal(), "0.666666666667");
        assert_eq!(Rational::frac(1, 80).to_decimal(), "0.0125000000000");
        assert_eq!(Rational::integer(2).to_decimal(), "2.00000000000");
        assert_eq!(
            Rational::frac(3, 4_003_000).to_decimal(),
            "0.000000749437921559"
        );
        assert_eq!(Rational::frac(-1, 8).to_sig_decimal(2), "-0.13");
        assert_eq!(Rational::frac(999_999, 1_000_000).to_sig_decimal(3), "1.00");
        assert_eq!(Rational::integer(123_456).to_sig_decimal(2), "120000");
        assert_eq!(Rational::zero().to_decimal(), "0");
    }

    #[test]
    fn fixed() {
        assert_eq!(Rational::frac(1, 132).to_fixed(3), "0.008");
        assert_eq!(Rational::frac(4, 415).to_fixed(4), "0.0096");
        assert_eq!(Rational::frac(1, 80).to_fixed(4), "0.0125");
        assert_eq!(Rational::frac(10, 27).to_fixed(3), "0.370");
        assert_eq!(Rational::frac(671, 9).to_fixed(1), "74.6");
        assert_eq!(Rational::frac(1, 2).to_fixed(0), "1");
        assert_eq!(Rational::frac(-1, 2000).to_fixed(3), "-0.001");
        assert_eq!(Rational::frac(-1, 20000).to_fixed(3), "0.000");
    }

    #[test]
    fn rounding() {
        assert_eq!(Rational::frac(121, 9).round_half_up(), BigInt::from(13));
        assert_eq!(Rational::frac(5, 2).round_half_up(), BigInt::from(3));
        assert_eq!(Rational::frac(-5, 2).round_half_up(), BigInt::from(-2));
        assert_eq!(Rational::integer(46).round_half_up(), BigInt::from(46));
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
            let x = Rational::frac(n, d);
            prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x.clone());
            let json = serde_json::to_string(&x).unwrap();
            prop_assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), x);
        }

        #[test]
        fn decimal_is_within_half_ulp(n in 1i64..1_000_000_000, d in 1i64..1_000_000_000) {
            let x = Rational::frac(n, d);
            let dec: Rational = x.to_decimal().parse().unwrap();
            // 12 significant digits: relative error at most 5e-12
            let rel = (&dec - &x).abs() / x.clone();
            prop_assert!(rel <= Rational::frac(5, 1_000_000_000_000));
        }
    }
}
