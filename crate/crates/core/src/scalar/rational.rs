//! Arbitrary-precision rational numbers.
//!
//! [`Rat`] wraps a big-integer rational kept in canonical form at all times:
//! numerator and denominator share no common factor, the denominator is
//! strictly positive, and zero is `0/1`. Construction is the only place
//! normalization can happen, so equality, hashing of renderings, and the
//! text form are all canonical by construction.

use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

use crate::scalar::Scalar;
use crate::{Error, Result};

/// An exact rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    /// `0/1`.
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    /// `1/1`.
    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    /// Builds `num/den` in canonical form; errors when `den == 0`.
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(BigRational::new(num, den)))
    }

    /// Builds `num/den` from machine integers; errors when `den == 0`.
    pub fn from_pair(num: i64, den: i64) -> Result<Self> {
        Self::new(BigInt::from(num), BigInt::from(den))
    }

    /// Embeds an integer.
    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    /// Numerator in canonical form (sign lives here).
    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Denominator in canonical form (always positive).
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
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

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    /// Multiplicative inverse; errors on zero.
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(self.0.recip()))
    }

    /// Integer power. Negative exponents invert first (erroring on zero).
    pub fn pow(&self, exp: i32) -> Result<Self> {
        if exp < 0 {
            let inv = self.recip()?;
            return inv.pow(-exp);
        }
        let mut acc = Rat::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        Ok(acc)
    }

    /// Exact division; errors on a zero divisor.
    pub fn div(&self, other: &Rat) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(&self.0 / &other.0))
    }

    /// Parses `p`, `-p`, or `p/q` (optionally signed); errors on a zero
    /// denominator or malformed text.
    pub fn parse(text: &str) -> Result<Self> {
        let s = text.trim();
        let (num_s, den_s) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num_s)
            .map_err(|_| Error::domain(format!("malformed rational literal `{text}`")))?;
        let den = BigInt::from_str(den_s)
            .map_err(|_| Error::domain(format!("malformed rational literal `{text}`")))?;
        Rat::new(num, den)
    }
}

impl Scalar for Rat {
    fn zero() -> Self {
        Rat::zero()
    }
    fn one() -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        Rat(&self.0 + &other.0)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        Rat(&self.0 - &other.0)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        Rat(&self.0 * &other.0)
    }
    fn neg_ref(&self) -> Self {
        Rat(-&self.0)
    }
    fn div_ref(&self, other: &Self) -> Result<Self> {
        self.div(other)
    }
    fn from_rat(r: Rat) -> Self {
        r
    }
    fn as_rat(&self) -> Option<Rat> {
        Some(self.clone())
    }
    fn support_size(&self) -> usize {
        usize::from(!self.is_zero())
    }

    /// Multiplies the row by the lcm of its denominators, making every
    /// entry an integer.
    fn clear_row_denominators(row: &mut [Self]) {
        let mut lcm = BigInt::one();
        for v in row.iter() {
            lcm = lcm.lcm(v.denom());
        }
        if !lcm.is_one() {
            let m = Rat::new(lcm, BigInt::one()).expect("nonzero denominator");
            for v in row.iter_mut() {
                *v = &*v * &m;
            }
        }
    }
}

crate::scalar::forward_scalar_ops!(Rat);

impl fmt::Display for Rat {
    /// Canonical text form: `p` for integers, `p/q` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
