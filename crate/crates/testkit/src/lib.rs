//! Independent reference oracles and data generators, used only by tests.
//!
//! Everything here deliberately avoids the main crate's algorithms: linear
//! algebra is re-done by naive fraction-based elimination over
//! `num::BigRational`, brackets are re-evaluated by direct tensor
//! contraction. Tests compare the two routes; the routes must never be
//! collapsed into one.

pub mod gen;
pub mod naive;
pub mod tensor;
