//! Arithmetic modes.
//!
//! Every operator that touches vertex values is generic over [`Scalar`]:
//! `f64` is the floating mode and [`BigRational`] the exact mode. Graph
//! weights are stored as `f64` and lifted exactly (every finite double is a
//! dyadic rational), so exact-mode results are exact for the weights as
//! stored.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithmeticMode {
    Floating,
    Exact,
}

pub trait Scalar:
    Num + Signed + Clone + Debug + PartialOrd + Send + Sync + 'static
{
    const MODE: ArithmeticMode;

    /// Exact lift of a finite double. Non-finite input maps to zero.
    fn lift(x: f64) -> Self;

    fn to_f64(&self) -> f64;

    fn from_u64(n: u64) -> Self;

    /// Parses decimal or fraction text; exact in exact mode, correctly
    /// rounded otherwise.
    fn parse(text: &str) -> Result<Self>;

    /// `p/q` text of an exact value; `None` in floating mode.
    fn exact_text(&self) -> Option<String>;

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    const MODE: ArithmeticMode = ArithmeticMode::Floating;

    fn lift(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_u64(n: u64) -> Self {
        n as f64
    }

    fn parse(text: &str) -> Result<Self> {
        match text.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => parse_decimal(text).map(|r| ratio_to_f64(&r)),
        }
    }

    fn exact_text(&self) -> Option<String> {
        None
    }
}

impl Scalar for BigRational {
    const MODE: ArithmeticMode = ArithmeticMode::Exact;

    fn lift(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(BigRational::zero)
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn from_u64(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn parse(text: &str) -> Result<Self> {
        parse_decimal(text)
    }

    fn exact_text(&self) -> Option<String> {
        Some(self.to_string())
    }
}

/// Converts a rational to the nearest-ish double without overflowing on
/// large numerators and denominators.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() && (v != 0.0 || r.is_zero()) {
            return v;
        }
    }
    let num = r.numer();
    let den = r.denom();
    let shift = num.bits() as i64 - den.bits() as i64;
    // scale into [2^-60, 2^60] relative range before dividing
    let (n, d) = if shift > 0 {
        (num.clone(), den << (shift as usize))
    } else {
        (num << ((-shift) as usize), den.clone())
    };
    let q = ToPrimitive::to_f64(&BigRational::new(n, d)).unwrap_or(0.0);
    q * 2f64.powi(shift.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

/// Parses a plain decimal literal such as `0.05`, `-3`, `1e-2` or `7/10`
/// into an exact rational.
pub fn parse_decimal(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || Error::Domain(format!("not a decimal number: {text:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str_radix(n.trim(), 10).map_err(|_| bad())?;
        let d = BigInt::from_str_radix(d.trim(), 10).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    if exponent.abs() > 4096 {
        return Err(bad());
    }
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str_radix(&digits, 10).map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if neg { -value } else { value })
}
