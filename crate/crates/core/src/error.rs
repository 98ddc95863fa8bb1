//! Crate-wide error type.
//!
//! Every fallible operation in this crate returns [`enum@Error`]. Variants are
//! grouped by how callers are expected to react: `Parse` carries a 1-based
//! line number for user-facing input files, `NotNilpotent` marks a violated
//! semantic precondition that command-line callers map to a distinct exit
//! status, and `Domain` covers all other violated mathematical preconditions
//! (non-ideals, non-derivations, singular matrices, …) with a specific
//! message naming the witness when one exists.

use thiserror::Error;

/// Error type shared by the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Division by an exact zero (scalar level), or a zero denominator
    /// handed to a constructor.
    #[error("division by zero")]
    DivisionByZero,

    /// A user-facing text input (algebra file, derivation map, replay
    /// script) failed to parse. `line` is 1-based.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Shapes do not line up: vector lengths, matrix dimensions, ambient
    /// dimensions of subspaces.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A mathematical precondition failed (not an ideal, not closed under
    /// bracket, not a derivation, singular change of basis, …).
    #[error("{0}")]
    Domain(String),

    /// The algebra is not nilpotent, so characteristic nilpotency is not
    /// defined for it.
    #[error("algebra is not nilpotent")]
    NotNilpotent,

    /// A matrix space handed to the Engel-flag test is not closed under
    /// commutators.
    #[error("not a Lie algebra of matrices")]
    NotClosed,
}

impl Error {
    /// Convenience constructor for [`Error::Parse`].
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    /// Convenience constructor for [`Error::Domain`].
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Convenience constructor for [`Error::Dimension`].
    pub fn dimension(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
