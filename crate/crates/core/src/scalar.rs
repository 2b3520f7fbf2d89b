//! Arithmetic backends: exact rationals and `f64`.
//!
//! Exact mode is the default everywhere. `f64` exists for quantities that are
//! irrational at the point of interest, such as trigonometric thresholds.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&ratio(num, den))
    }

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn is_zero_value(&self) -> bool {
        *self == Self::zero()
    }

    /// Equality up to `tol`; exact types ignore `tol`.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.to_f64() - other.to_f64()).abs() <= tol
        }
    }

    fn abs_value(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn powi(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }

    /// Square root when it exists in the type: perfect squares for rationals.
    fn sqrt_value(&self) -> Option<Self>;

    fn max_value(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }

    fn min_value(a: Self, b: Self) -> Self {
        if a <= b {
            a
        } else {
            b
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs_value(&self) -> Self {
        self.abs()
    }
    fn sqrt_value(&self) -> Option<Self> {
        rational_sqrt(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn powi(&self, k: u32) -> Self {
        f64::powi(*self, k as i32)
    }
    fn sqrt_value(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"num/den"` or an integer. Decimals are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("expected num/den, got {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Smallest rational with denominator `den` strictly above `x`.
pub fn rational_above(x: f64, den: i64) -> Rational {
    let k = (x * den as f64).floor() as i64 + 1;
    ratio(k, den)
}

/// Largest rational with denominator `den` strictly below `x`.
pub fn rational_below(x: f64, den: i64) -> Rational {
    let k = (x * den as f64).ceil() as i64 - 1;
    ratio(k, den)
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn rational_grid(lo: &Rational, hi: &Rational, count: usize) -> Vec<Rational> {
    match count {
        0 => vec![],
        1 => vec![lo.clone()],
        _ => {
            let step = (hi - lo) / int(count as i64 - 1);
            (0..count).map(|i| lo + &step * int(i as i64)).collect()
        }
    }
}

pub fn binomial(n: u64, k: u64) -> Rational {
    if k > n {
        return int(0);
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_rejects_decimals() {
        assert_eq!(parse_rational("7/10").unwrap(), ratio(7, 10));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational(" -2/4 ").unwrap(), ratio(-1, 2));
        assert!(parse_rational("0.7").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn sqrt_of_perfect_squares_only() {
        assert_eq!(rational_sqrt(&ratio(1, 4)), Some(ratio(1, 2)));
        assert_eq!(rational_sqrt(&ratio(16, 100)), Some(ratio(2, 5)));
        assert_eq!(rational_sqrt(&ratio(1, 2)), None);
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let g = rational_grid(&ratio(1, 2), &int(1), 6);
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], ratio(1, 2));
        assert_eq!(g[5], int(1));
        assert_eq!(g[1], ratio(3, 5));
    }

    #[test]
    fn bracketing_rationals() {
        let x = 2f64.sqrt() - 1.0;
        assert!(Scalar::to_f64(&rational_above(x, 1000)) > x);
        assert!(Scalar::to_f64(&rational_below(x, 1000)) < x);
        assert_eq!(binomial(6, 3), int(20));
    }
}
