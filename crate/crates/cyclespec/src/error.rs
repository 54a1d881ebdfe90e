//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by evaluation routines.
///
/// Domain violations carry the text of the violated condition so that the
/// CLI can surface it verbatim (exit code 2). Cross-check failures are not
/// errors; they are reported by the `verify` machinery.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates one of the excluded-set conditions.
    #[error("domain violation: {0}")]
    Domain(String),

    /// The evaluation point is too close to a resolvent pole.
    #[error("evaluation point within tolerance of the resolvent pole at spectral index j = {j}")]
    PoleProximity { j: usize },

    /// A summand's sine/cosine magnitude stayed below the near-singular
    /// threshold even after precision escalation.
    #[error("near-singular summand persists at {0} bits; parameters are too close to an excluded set")]
    NearSingular(u32),

    /// Division by a value whose modulus is below the absolute tolerance.
    #[error("division by a value with modulus below the absolute tolerance")]
    DivisionNearZero,

    /// A vertex-indexed vector had the wrong length.
    #[error("vector length {got} does not match vertex count {want}")]
    LengthMismatch { got: usize, want: usize },

    /// An operation requiring a primitive character received a non-primitive one.
    #[error("character mod {modulus} is not primitive (conductor {conductor})")]
    NotPrimitive { modulus: u32, conductor: u32 },

    /// Generic invalid input (non-finite float, bad index, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
