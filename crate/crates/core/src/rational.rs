//! Exact arbitrary-precision rationals.
//!
//! `Rat` is the only numeric carrier for float/Real constants in the whole
//! pipeline: decimal literals are parsed exactly, arithmetic never rounds,
//! and printing either produces an exact decimal or falls back to a
//! fraction form. Binary floating point appears in exactly one place in
//! the code base (the flattener's constant-division fold, which mimics a
//! double-based compiler) and is quarantined behind [`Rat::from_f64_lossy`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number with arbitrary-precision numerator and denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rat(BigRational);

/// Error produced when a decimal literal cannot be parsed exactly.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid decimal literal `{0}`")]
pub struct ParseRatError(pub String);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }

    /// Builds `num/den` in lowest terms. Panics on a zero denominator.
    pub fn from_fraction(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rat(BigRational::new(num, den))
    }

    pub fn from_i64_fraction(num: i64, den: i64) -> Self {
        Self::from_fraction(BigInt::from(num), BigInt::from(den))
    }

    /// Parses a decimal literal (optionally signed, optional fraction part,
    /// optional `e`/`E` exponent) into the exact rational it denotes.
    ///
    /// `"1.5e3"` → 1500, `"0.1"` → 1/10, `"-2"` → -2. Never rounds.
    pub fn from_decimal_str(s: &str) -> Result<Self, ParseRatError> {
        let err = || ParseRatError(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(err());
        }
        let (neg, t) = match t.as_bytes()[0] {
            b'-' => (true, &t[1..]),
            b'+' => (false, &t[1..]),
            _ => (false, t),
        };
        // Split off the exponent first, then the fraction part.
        let (mantissa, exp) = match t.find(['e', 'E']) {
            Some(i) => {
                let e: i64 = t[i + 1..].parse().map_err(|_| err())?;
                (&t[..i], e)
            }
            None => (t, 0),
        };
        let (int_part, frac_part) = match mantissa.find('.') {
            Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
            None => (mantissa, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(err());
        }
        let digits = format!("{int_part}{frac_part}");
        let mut num = BigInt::from_str(&digits).map_err(|_| err())?;
        // value = digits * 10^(exp - |frac_part|)
        let shift = exp - frac_part.len() as i64;
        let mut den = BigInt::one();
        if shift >= 0 {
            num *= BigInt::from(10u32).pow(shift as u32);
        } else {
            den = BigInt::from(10u32).pow((-shift) as u32);
        }
        if neg {
            num = -num;
        }
        Ok(Rat(BigRational::new(num, den)))
    }

    /// Converts a binary `f64` into the exact rational it denotes.
    /// The only lossy entry point; used by the double-based constant fold.
    pub fn from_f64_lossy(f: f64) -> Option<Self> {
        BigRational::from_float(f).map(Rat)
    }

    /// Nearest `f64`; used only for diagnostics and the lossy fold.
    pub fn to_f64_lossy(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
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

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rat(self.0.recip())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Integer value if the rational is integral.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.to_integer())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        self.0.abs().cmp(&other.0.abs())
    }

    /// Exact finite decimal representation with at most `max_digits`
    /// significant digits, or `None` when no such representation exists
    /// (denominator has prime factors other than 2 and 5, or too long).
    ///
    /// Integers get a trailing `.0` so the result reads as a float literal.
    pub fn to_exact_decimal(&self, max_digits: usize) -> Option<String> {
        let mut den = self.0.denom().clone();
        let mut twos = 0u32;
        let mut fives = 0u32;
        let two = BigInt::from(2);
        let five = BigInt::from(5);
        while (&den % &two).is_zero() {
            den /= &two;
            twos += 1;
        }
        while (&den % &five).is_zero() {
            den /= &five;
            fives += 1;
        }
        if !den.is_one() {
            return None;
        }
        // Scale so the denominator becomes 10^k with k = max(twos, fives).
        let k = twos.max(fives);
        let scale = BigInt::from(2).pow(k - twos) * BigInt::from(5).pow(k - fives);
        let scaled = (self.0.numer() * scale).magnitude().to_string();
        let significant = scaled.trim_start_matches('0').trim_end_matches('0');
        if significant.len().max(1) > max_digits {
            return None;
        }
        let sign = if self.is_negative() { "-" } else { "" };
        let k = k as usize;
        // Exponent of the leading digit; `scaled` has no leading zeros.
        let lead = scaled.len() as i64 - 1 - k as i64;
        if !(-6..15).contains(&lead) && !self.is_zero() {
            // scientific form d.ddd e±p for extreme magnitudes
            let digits = scaled.trim_end_matches('0');
            let mantissa = if digits.len() == 1 {
                format!("{digits}.0")
            } else {
                format!("{}.{}", &digits[..1], &digits[1..])
            };
            return Some(format!("{sign}{mantissa}e{lead}"));
        }
        let s = if k == 0 {
            format!("{sign}{scaled}.0")
        } else if scaled.len() > k {
            let (int, frac) = scaled.split_at(scaled.len() - k);
            let frac = frac.trim_end_matches('0');
            if frac.is_empty() {
                format!("{sign}{int}.0")
            } else {
                format!("{sign}{int}.{frac}")
            }
        } else {
            let frac = format!("{}{}", "0".repeat(k - scaled.len()), scaled);
            let frac = frac.trim_end_matches('0');
            format!("{sign}0.{frac}")
        };
        Some(s)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rat({self})")
    }
}

impl Add for Rat {
    type Output = Rat;
    fn add(self, rhs: Rat) -> Rat {
        Rat(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn add(self, rhs: &Rat) -> Rat {
        Rat(&self.0 + &rhs.0)
    }
}

impl Sub for Rat {
    type Output = Rat;
    fn sub(self, rhs: Rat) -> Rat {
        Rat(self.0 - rhs.0)
    }
}

impl<'a> Sub<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn sub(self, rhs: &Rat) -> Rat {
        Rat(&self.0 - &rhs.0)
    }
}

impl Mul for Rat {
    type Output = Rat;
    fn mul(self, rhs: Rat) -> Rat {
        Rat(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn mul(self, rhs: &Rat) -> Rat {
        Rat(&self.0 * &rhs.0)
    }
}

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat::from_bigint(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(Rat::from_decimal_str("0.1").unwrap(), Rat::from_i64_fraction(1, 10));
        assert_eq!(Rat::from_decimal_str("1.5e3").unwrap(), Rat::from_int(1500));
        assert_eq!(Rat::from_decimal_str("-2.5e-1").unwrap(), Rat::from_i64_fraction(-1, 4));
        assert_eq!(
            Rat::from_decimal_str("3.402823e+38").unwrap(),
            Rat::from_bigint(BigInt::from(3402823) * BigInt::from(10u8).pow(32))
        );
        assert_eq!(Rat::from_decimal_str(".5").unwrap(), Rat::from_i64_fraction(1, 2));
        assert_eq!(Rat::from_decimal_str("7.").unwrap(), Rat::from_int(7));
        assert!(Rat::from_decimal_str("").is_err());
        assert!(Rat::from_decimal_str("1.2.3").is_err());
        assert!(Rat::from_decimal_str("abc").is_err());
    }

    #[test]
    fn exact_decimal_printing() {
        assert_eq!(Rat::from_i64_fraction(1, 4).to_exact_decimal(25).unwrap(), "0.25");
        assert_eq!(Rat::from_int(3).to_exact_decimal(25).unwrap(), "3.0");
        assert_eq!(Rat::from_i64_fraction(-3, 2).to_exact_decimal(25).unwrap(), "-1.5");
        assert_eq!(Rat::from_i64_fraction(1, 3).to_exact_decimal(25), None);
        // 1/2^51 needs 51 significant digits
        let tiny = Rat::from_fraction(BigInt::from(1), BigInt::from(2).pow(51));
        assert_eq!(tiny.to_exact_decimal(25), None);
        assert!(tiny.to_exact_decimal(60).is_some());
    }

    #[test]
    fn print_parse_roundtrip() {
        for (n, d) in [(1i64, 10i64), (-7, 4), (12345, 1), (3, 8), (0, 1)] {
            let r = Rat::from_i64_fraction(n, d);
            if let Some(s) = r.to_exact_decimal(40) {
                assert_eq!(Rat::from_decimal_str(&s).unwrap(), r, "literal {s}");
            }
        }
    }

    #[test]
    fn arithmetic_is_exact() {
        let third = Rat::from_i64_fraction(1, 3);
        let sum = third.clone() + third.clone() + third.clone();
        assert_eq!(sum, Rat::one());
        assert_eq!(Rat::from_i64_fraction(7, 2) * Rat::from_i64_fraction(2, 7), Rat::one());
    }
}
