//! The scalar tower: exact coefficient domains.
//!
//! Three concrete scalar types live here, each with a canonical internal
//! form so that structural equality coincides with mathematical equality:
//!
//! * [`Rat`] — arbitrary-precision rationals, always gcd-reduced with a
//!   positive denominator.
//! * [`MultiPoly`] — sparse multivariate polynomials over [`Rat`], keyed by
//!   exponent vector, variables sorted and trimmed to those actually used.
//! * [`RatFunc`] — fractions of [`MultiPoly`], denominator never zero and
//!   normalized to a positive leading coefficient.
//!
//! The [`Scalar`] trait is the field interface the rest of the crate is
//! generic over: the same elimination, bracket, and certificate code runs
//! over plain rationals and over rational-function fields.

mod multipoly;
mod ratfunc;
mod rational;

pub use multipoly::MultiPoly;
pub use ratfunc::RatFunc;
pub use rational::Rat;

use crate::Result;

/// Field interface for everything generic in this crate.
///
/// Implementations must be exact: all operations are closed over a canonical
/// representation and equality is decidable. `div` is total except for a
/// zero divisor.
pub trait Scalar:
    Clone + PartialEq + std::fmt::Debug + std::fmt::Display + Send + Sync + 'static
{
    /// Additive identity.
    fn zero() -> Self;

    /// Multiplicative identity.
    fn one() -> Self;

    /// Exact test against the additive identity.
    fn is_zero(&self) -> bool;

    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;

    /// Exact division; errors on a zero divisor.
    fn div_ref(&self, other: &Self) -> Result<Self>;

    /// Embed a rational constant.
    fn from_rat(r: Rat) -> Self;

    /// Interpret as a rational constant if the value is one.
    fn as_rat(&self) -> Option<Rat>;

    /// Number of monomials in the canonical representation (always 1 for a
    /// nonzero rational). Elimination uses this to prefer short pivots,
    /// which is what keeps coefficient growth tame over polynomial entries.
    fn support_size(&self) -> usize;

    /// Rescales a row so every entry becomes denominator-free (an integer
    /// rational, or a fraction with denominator 1), which is what makes
    /// fraction-free elimination's exact divisions land in the ring. The
    /// default is a no-op for domains that have no denominators.
    fn clear_row_denominators(row: &mut [Self]) {
        let _ = row;
    }
}

/// Implements the four binary `std::ops` traits (and `Neg`) for a scalar
/// type from its `*_ref` methods, covering all owned/borrowed combinations.
macro_rules! forward_scalar_ops {
    ($t:ty) => {
        impl std::ops::Add for &$t {
            type Output = $t;
            fn add(self, rhs: &$t) -> $t {
                crate::scalar::Scalar::add_ref(self, rhs)
            }
        }
        impl std::ops::Sub for &$t {
            type Output = $t;
            fn sub(self, rhs: &$t) -> $t {
                crate::scalar::Scalar::sub_ref(self, rhs)
            }
        }
        impl std::ops::Mul for &$t {
            type Output = $t;
            fn mul(self, rhs: &$t) -> $t {
                crate::scalar::Scalar::mul_ref(self, rhs)
            }
        }
        impl std::ops::Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                crate::scalar::Scalar::neg_ref(self)
            }
        }
        impl std::ops::Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl std::ops::Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl std::ops::Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl std::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
pub(crate) use forward_scalar_ops;
