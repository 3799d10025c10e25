//! Exact non-negative rational weights.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact rational number used for world weights, probabilities,
/// possibility degrees and thresholds.
///
/// Written as `a/b` or as a decimal (`0.3`); displayed as a decimal when the
/// expansion terminates and as a reduced fraction otherwise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(BigRational);

impl Weight {
    pub fn zero() -> Self {
        Weight(BigRational::zero())
    }

    pub fn one() -> Self {
        Weight(BigRational::one())
    }

    pub fn integer(n: i64) -> Self {
        Weight(BigRational::from_integer(n.into()))
    }

    /// `num / den`; panics when `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Weight(BigRational::new(num.into(), den.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs_diff(&self, other: &Weight) -> Weight {
        Weight((&self.0 - &other.0).abs())
    }

    /// `|self - other| <= tol`, compared exactly against the decimal `tol`.
    pub fn within(&self, other: &Weight, tol: &Weight) -> bool {
        self.abs_diff(other) <= *tol
    }

    pub fn checked_div(&self, other: &Weight) -> Option<Weight> {
        (!other.is_zero()).then(|| Weight(&self.0 / &other.0))
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    fn terminating_decimal(&self) -> Option<String> {
        let mut den = self.0.denom().clone();
        let two = BigInt::from(2);
        let five = BigInt::from(5);
        let mut twos = 0u32;
        let mut fives = 0u32;
        while den.is_even() {
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
        let digits = twos.max(fives);
        let scaled = self.0.numer() * num_traits::pow(BigInt::from(10), digits as usize)
            / self.0.denom();
        let neg = scaled.is_negative();
        let mut s = scaled.abs().to_string();
        if digits > 0 {
            let d = digits as usize;
            if s.len() <= d {
                s = format!("{}{}", "0".repeat(d + 1 - s.len()), s);
            }
            s.insert(s.len() - d, '.');
        }
        if neg {
            s.insert(0, '-');
        }
        Some(s)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.terminating_decimal() {
            Some(s) => f.write_str(&s),
            None => write!(f, "{}/{}", self.0.numer(), self.0.denom()),
        }
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightParseError(pub String);

impl fmt::Display for WeightParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid number `{}` (expected a decimal or a/b)", self.0)
    }
}

impl std::error::Error for WeightParseError {}

fn digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

impl FromStr for Weight {
    type Err = WeightParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || WeightParseError(s.to_string());
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let value = if let Some((n, d)) = body.split_once('/') {
            let n = digits(n.trim()).ok_or_else(err)?;
            let d = digits(d.trim()).ok_or_else(err)?;
            if d.is_zero() {
                return Err(err());
            }
            BigRational::new(n, d)
        } else if let Some((i, frac)) = body.split_once('.') {
            let int = if i.is_empty() { BigInt::zero() } else { digits(i).ok_or_else(err)? };
            let fr = digits(frac).ok_or_else(err)?;
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            BigRational::new(int * &scale + fr, scale)
        } else {
            BigRational::from_integer(digits(body).ok_or_else(err)?)
        };
        Ok(Weight(if neg { -value } else { value }))
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Weight> for Weight {
    type Output = Weight;
    fn add(self, rhs: &'a Weight) -> Weight {
        Weight(self.0 + &rhs.0)
    }
}

impl<'a> Add<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn add(self, rhs: &'a Weight) -> Weight {
        Weight(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn sub(self, rhs: &'a Weight) -> Weight {
        Weight(&self.0 - &rhs.0)
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        Weight(self.0 - rhs.0)
    }
}

impl<'a> Mul<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn mul(self, rhs: &'a Weight) -> Weight {
        Weight(&self.0 * &rhs.0)
    }
}

/// Panics on division by zero; see [`Weight::checked_div`].
impl<'a> Div<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn div(self, rhs: &'a Weight) -> Weight {
        Weight(&self.0 / &rhs.0)
    }
}

impl Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::zero(), Add::add)
    }
}

impl<'a> Sum<&'a Weight> for Weight {
    fn sum<I: Iterator<Item = &'a Weight>>(iter: I) -> Weight {
        Weight(iter.fold(BigRational::zero(), |acc, w| acc + &w.0))
    }
}

impl From<BigRational> for Weight {
    fn from(r: BigRational) -> Self {
        Weight(r)
    }
}
