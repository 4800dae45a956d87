use thiserror::Error;

/// Errors produced by grid construction, exponent validation and norm
/// evaluation.
#[derive(Debug, Error)]
pub enum LorentzError {
    /// An exponent outside [1, infinity] or an unparsable exponent literal.
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    /// A (p, s) pair violating the endpoint rules s = 1 at p = 1 and
    /// s = infinity at p = infinity.
    #[error("invalid exponent pair: {0}")]
    InvalidPair(String),

    /// A source/target quadruple outside the admissible set.
    #[error("inadmissible exponent quadruple: {0}")]
    Inadmissible(String),

    /// Ill-formed radial grid (nodes not strictly increasing, missing
    /// origin, dimension < 2, ...).
    #[error("invalid radial grid: {0}")]
    Grid(String),

    /// Ill-formed radial function (length mismatch, non-finite values).
    #[error("invalid radial function: {0}")]
    Function(String),

    /// Invalid argument to a norm or rearrangement routine.
    #[error("domain error: {0}")]
    Domain(String),
}
