//! Error type shared across the crate.

/// Errors produced by field construction, exponent arithmetic and the
/// permutation checkers.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A parameter is outside its documented range.
    #[error("out of range: {0}")]
    RangeError(String),

    /// The supplied modulus is not an irreducible polynomial of the right degree.
    #[error("invalid modulus: {0}")]
    ModulusError(String),

    /// Multiplicative inverse of zero requested.
    #[error("division by zero in the field")]
    DivisionByZero,

    /// A fraction could not be reduced to a residue (denominator not invertible,
    /// or unparsable input).
    #[error("invalid fraction: {0}")]
    FractionError(String),

    /// Two independent computations of the same quantity disagreed. This
    /// indicates an implementation bug, never a property of the input.
    #[error("internal consistency failure: {0}")]
    ConsistencyError(String),

    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain violation: {0}")]
    DomainError(String),

    /// A linear fractional map with vanishing determinant was requested.
    #[error("degenerate linear fractional map: {0}")]
    DegenerateMapError(String),

    /// A stated hypothesis of the requested construction does not hold.
    #[error("precondition failed: {0}")]
    PreconditionError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
