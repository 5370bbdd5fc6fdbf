//! Coordinate types for interval arithmetic.
//!
//! Cantor endpoints are generated exactly as [`Rational`]s so that membership,
//! gap census and box counting never misclassify an endpoint. Everything that
//! feeds quadrature works on `f64`.

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational coordinate.
pub type Rational = Ratio<i128>;

/// A totally ordered field element usable as an interval endpoint.
pub trait Scalar: Copy + PartialOrd + Debug + Display + num_traits::Num + Signed + Send + Sync {
    fn to_f64(self) -> f64;

    /// `floor(self / unit)`; `unit` must be positive.
    fn floor_div(self, unit: Self) -> i64;

    /// `ceil(self / unit)`; `unit` must be positive.
    fn ceil_div(self, unit: Self) -> i64;

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    fn to_f64(self) -> f64 {
        self
    }

    fn floor_div(self, unit: Self) -> i64 {
        (self / unit).floor() as i64
    }

    fn ceil_div(self, unit: Self) -> i64 {
        (self / unit).ceil() as i64
    }
}

impl Scalar for Rational {
    fn to_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    fn floor_div(self, unit: Self) -> i64 {
        (self / unit).floor().to_integer() as i64
    }

    fn ceil_div(self, unit: Self) -> i64 {
        (self / unit).ceil().to_integer() as i64
    }
}

/// Parses `p/q`, an integer, or a decimal literal (optionally with exponent)
/// into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse {
        line: 0,
        message: format!("not a number: {text:?}"),
    };
    if text.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_rational(num)?;
        let den = parse_rational(den)?;
        if den.is_zero() {
            return Err(Error::Parse {
                line: 0,
                message: format!("zero denominator in {text:?}"),
            });
        }
        return Ok(num / den);
    }

    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(idx) => {
            let exp: i32 = text[idx + 1..].parse().map_err(|_| bad())?;
            (&text[..idx], exp)
        }
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer: i128 = if all.is_empty() { 0 } else { all.parse().map_err(|_| bad())? };
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(10);
    let mut value = Rational::from_integer(numer);
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if negative { -value } else { value })
}

/// Renders a rational as `p/q` (or `p` when integral).
pub fn format_rational(value: Rational) -> String {
    if value.is_integer() {
        format!("{}", value.numer())
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Closest rational with bounded denominator, used when an `f64` has to be
/// lifted into exact arithmetic (e.g. a user-supplied window).
pub fn rational_from_f64(value: f64) -> Rational {
    Ratio::approximate_float(value).unwrap_or_else(|| Rational::from_integer(0))
}
