//! Exact-arithmetic toolkit for nilpotent Lie algebras given by rational
//! structure constants.
//!
//! Everything in this crate computes over exact scalar domains — arbitrary
//! precision rationals, multivariate polynomials, and rational functions —
//! so every reported result is a certificate, not an approximation.
//!
//! Module map:
//!
//! - [`scalar`]: the scalar tower ([`scalar::Rat`], [`scalar::MultiPoly`],
//!   [`scalar::RatFunc`]) and the [`scalar::Scalar`] trait that lets the
//!   rest of the crate stay generic over it.
//! - [`linalg`]: fraction-free exact linear algebra (reduced echelon form,
//!   kernels, characteristic polynomials).
//! - [`lie`]: Lie algebras as structure-constant tables — brackets, Jacobi
//!   verification, central series, subalgebras and quotients, and a text
//!   format for algebra files.
//! - [`derivations`]: the derivation algebra of a Lie algebra, nilpotency
//!   flags, and characteristic nilpotency certificates.
//! - [`deformation`]: one-parameter linear deformations of a bracket by an
//!   ideal derivation.
//! - [`iso`]: isomorphism obstruction systems and the scripted elimination
//!   replay engine.

mod error;
pub mod deformation;
pub mod derivations;
pub mod expr;
pub mod iso;
pub mod lie;
pub mod linalg;
pub mod scalar;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
