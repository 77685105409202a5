//! Scalar fields the matrices are built over.
//!
//! Exact rationals are the default: every identity of the forest calculus is an
//! equality, and rational arithmetic lets the tests assert it as one. `f64` is
//! available for large-parameter limits and quick exploration; there all
//! comparisons go through a `1e-9` relative tolerance.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Tolerance used by float-mode comparisons.
pub const FLOAT_TOL: f64 = 1e-9;

/// Pivots below this magnitude make a float matrix singular.
pub const FLOAT_PIVOT_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    Rational,
    Float,
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarKind::Rational => f.write_str("rational"),
            ScalarKind::Float => f.write_str("float"),
        }
    }
}

pub trait Scalar:
    Clone + fmt::Debug + fmt::Display + PartialOrd + Num + Signed + Send + Sync + 'static
{
    const KIND: ScalarKind;

    fn from_rational(r: &Rational) -> Self;

    fn from_i64(v: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// "p/q" (or an integer) for rationals, shortest round-trip decimal for floats.
    fn to_exact_string(&self) -> String;

    /// True if the value cannot serve as an elimination pivot.
    fn is_negligible(&self) -> bool;

    /// Larger is a better pivot. Rationals accept any nonzero pivot.
    fn pivot_weight(&self) -> f64;

    /// Equality: exact for rationals, within `FLOAT_TOL * max(1, scale)` for floats.
    fn near(&self, other: &Self, scale: f64) -> bool;

    /// `self > other`, with float ties (within tolerance) counted as not greater.
    fn definitely_gt(&self, other: &Self) -> bool;

    /// `self >= other`, with float values within tolerance counted as equal.
    fn at_least(&self, other: &Self) -> bool;
}

impl Scalar for Rational {
    const KIND: ScalarKind = ScalarKind::Rational;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_exact_string(&self) -> String {
        self.to_string()
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn pivot_weight(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }

    fn near(&self, other: &Self, _scale: f64) -> bool {
        self == other
    }

    fn definitely_gt(&self, other: &Self) -> bool {
        self > other
    }

    fn at_least(&self, other: &Self) -> bool {
        self >= other
    }
}

impl Scalar for f64 {
    const KIND: ScalarKind = ScalarKind::Float;

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_exact_string(&self) -> String {
        format!("{self}")
    }

    fn is_negligible(&self) -> bool {
        self.abs() < FLOAT_PIVOT_EPS
    }

    fn pivot_weight(&self) -> f64 {
        self.abs()
    }

    fn near(&self, other: &Self, scale: f64) -> bool {
        (self - other).abs() <= FLOAT_TOL * scale.max(1.0)
    }

    fn definitely_gt(&self, other: &Self) -> bool {
        self - other > FLOAT_TOL * self.abs().max(other.abs()).max(1.0)
    }

    fn at_least(&self, other: &Self) -> bool {
        other - self <= FLOAT_TOL * self.abs().max(other.abs()).max(1.0)
    }
}

/// Parses an exact rational: an integer, `p/q`, or a finite decimal with an
/// optional exponent (`0.32`, `-1.5e3`).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = |why: &str| Error::Parse {
        line: 0,
        msg: format!("'{text}' is not a rational number: {why}"),
    };
    let s = text.trim();
    if s.is_empty() {
        return Err(bad("empty"));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad("bad numerator"))?;
        let q: BigInt = q.trim().parse().map_err(|_| bad("bad denominator"))?;
        if q.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(Rational::new(p, q));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad("bad exponent"))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("no digits"));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad("unexpected character"));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str_radix(&all_digits, 10).map_err(|_| bad("bad digits"))?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn integer(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}
