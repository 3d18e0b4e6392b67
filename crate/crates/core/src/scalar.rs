//! Coefficient field used by the formal algebra.
//!
//! Everything formal is generic over [`Scalar`] so the same recursions run in
//! double precision and in exact rational arithmetic.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Exact for rationals: every finite double is a dyadic rational.
    fn from_f64(x: f64) -> Self;

    fn from_rational(q: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    /// Equality within `tol` for floats, exact equality otherwise.
    fn close_to(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.to_f64() - other.to_f64()).abs() <= tol
        }
    }

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn from_rational(q: &Rational) -> Self {
        q.to_f64_lossy()
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite coefficient")
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        self.to_f64_lossy()
    }

    fn abs_f64(&self) -> f64 {
        self.abs().to_f64_lossy()
    }
}

trait LossyF64 {
    fn to_f64_lossy(&self) -> f64;
}

impl LossyF64 for Rational {
    fn to_f64_lossy(&self) -> f64 {
        match ToPrimitive::to_f64(self) {
            Some(v) => v,
            None => {
                let n = ToPrimitive::to_f64(self.numer()).unwrap_or(f64::NAN);
                let d = ToPrimitive::to_f64(self.denom()).unwrap_or(f64::NAN);
                n / d
            }
        }
    }
}

/// Parses `"num/den"`, `"int"` or a decimal literal into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(BigRational::from_integer(n));
    }
    parse_decimal(s)
}

/// Exact value of a decimal literal such as `-1.25e-3`.
fn parse_decimal(s: &str) -> Option<Rational> {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}0").parse::<BigInt>().ok()? / BigInt::from(10);
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut q = BigRational::from_integer(digits);
    if shift >= 0 {
        q *= BigRational::from_integer(num_traits::pow(ten, shift as usize));
    } else {
        q /= BigRational::from_integer(num_traits::pow(ten, (-shift) as usize));
    }
    Some(if neg { -q } else { q })
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `x` rendered with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    format!("{:.16e}", x)
}
