//! Rational functions: quotients of multivariate polynomials.
//!
//! A [`RatFunc`] stores a numerator/denominator pair and keeps it tidy with
//! a reduction ladder applied after every operation:
//!
//! 1. constant denominators fold into the numerator,
//! 2. exact polynomial division is attempted (this clears every quotient
//!    produced by fraction-free elimination),
//! 3. when both parts live in one shared variable the pair is reduced by
//!    the Euclidean gcd,
//! 4. the denominator is normalized to be primitive with positive leading
//!    coefficient.
//!
//! Equality is mathematical, by cross-multiplication, so values that the
//! ladder cannot fully cancel still compare correctly.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::{MultiPoly, Rat, Scalar};
use crate::{Error, Result};

/// A quotient of two polynomials with a nonzero denominator.
#[derive(Clone)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    /// Builds `num / den`, reducing; errors when `den` is zero.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    /// Embeds a polynomial as `p / 1`.
    pub fn from_poly(num: MultiPoly) -> Self {
        RatFunc { num, den: MultiPoly::one() }
    }

    /// The rational function consisting of a single variable.
    pub fn var(name: &str) -> Self {
        Self::from_poly(MultiPoly::var(name))
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    /// True when the denominator reduced all the way to `1`.
    pub fn is_polynomial(&self) -> bool {
        self.den.as_constant().map_or(false, |c| c.is_one())
    }

    /// Evaluates at a rational point; errors if the denominator vanishes
    /// there or a variable is unassigned.
    pub fn eval(&self, assignment: &BTreeMap<String, Rat>) -> Result<Rat> {
        let d = self.den.eval(assignment)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.num.eval(assignment)?.div(&d)
    }

    /// The reduction ladder (see module docs). `den` must be nonzero.
    fn reduced(num: MultiPoly, den: MultiPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFunc { num, den: MultiPoly::one() };
        }
        // Step 1: constant denominator folds into the numerator.
        if let Some(c) = den.as_constant() {
            let inv = c.recip().expect("nonzero denominator");
            return RatFunc { num: num.scale(&inv), den: MultiPoly::one() };
        }
        // Step 2: exact division (covers fraction-free elimination exactly).
        if let Some(q) = num.exact_div(&den) {
            return RatFunc { num: q, den: MultiPoly::one() };
        }
        // Step 3: Euclidean gcd when both parts share one variable.
        let mut num = num;
        let mut den = den;
        if let (Some(a), Some(b)) = (num.sole_var(), den.sole_var()) {
            if a == b {
                let g = num.gcd_univariate(&den).expect("shared single variable");
                if g.total_degree() > 0 {
                    num = num.exact_div(&g).expect("gcd divides the numerator");
                    den = den.exact_div(&g).expect("gcd divides the denominator");
                    if let Some(c) = den.as_constant() {
                        let inv = c.recip().expect("nonzero denominator");
                        return RatFunc { num: num.scale(&inv), den: MultiPoly::one() };
                    }
                }
            }
        }
        // Step 4: primitive denominator with positive leading coefficient.
        let mut c = den.content();
        if den.leading_coeff().is_negative() {
            c = -&c;
        }
        let inv = c.recip().expect("content of a nonzero polynomial");
        RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
    }
}

impl PartialEq for RatFunc {
    /// Mathematical equality by cross-multiplication.
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RatFunc {}

impl Scalar for RatFunc {
    fn zero() -> Self {
        Self::from_poly(MultiPoly::zero())
    }
    fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Self::reduced(num, &self.den * &other.den)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        let num = &(&self.num * &other.den) - &(&other.num * &self.den);
        Self::reduced(num, &self.den * &other.den)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        Self::reduced(&self.num * &other.num, &self.den * &other.den)
    }
    fn neg_ref(&self) -> Self {
        RatFunc { num: self.num.neg_ref(), den: self.den.clone() }
    }
    fn div_ref(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(&self.num * &other.den, &self.den * &other.num))
    }
    fn from_rat(r: Rat) -> Self {
        Self::from_poly(MultiPoly::constant(r))
    }
    fn as_rat(&self) -> Option<Rat> {
        if self.is_polynomial() {
            self.num.as_constant()
        } else {
            None
        }
    }
    fn support_size(&self) -> usize {
        self.num.term_count() + self.den.term_count()
    }

    /// Multiplies the row by every distinct non-constant denominator it
    /// contains (constant denominators are already folded away by the
    /// ladder), leaving each entry a polynomial.
    fn clear_row_denominators(row: &mut [Self]) {
        let mut dens: Vec<MultiPoly> = Vec::new();
        for v in row.iter() {
            if !v.is_polynomial() && !dens.contains(&v.den) {
                dens.push(v.den.clone());
            }
        }
        for d in dens {
            let m = RatFunc::from_poly(d);
            for v in row.iter_mut() {
                *v = &*v * &m;
            }
        }
    }
}

crate::scalar::forward_scalar_ops!(RatFunc);

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for RatFunc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
