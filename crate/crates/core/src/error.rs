//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by fallible operations. Ambient mismatches (mixing
/// matrices of different sizes or fields) are programmer errors and panic
/// instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field size {q} exceeds the bound {bound}")]
    FieldTooLarge { q: u128, bound: u64 },

    #[error("division by zero in F_q")]
    DivisionByZero,

    #[error("the multiplicative order of 0 is undefined")]
    OrderOfZero,

    #[error("matrix is singular")]
    Singular,

    #[error("companion matrix requires a nonzero constant term")]
    ZeroConstantTerm,

    #[error("group order {order} exceeds the enumeration bound {bound}")]
    GroupTooLarge { order: String, bound: u64 },

    #[error("cannot factor q^n - 1 = {0} by trial division at desk scale")]
    FactorBound(u64),

    #[error("the identity has no descent reflection")]
    IdentityDescent,

    #[error("word position {pos} out of range for length {len}")]
    WordIndex { pos: usize, len: usize },

    #[error("Hurwitz orbit search exceeded {0} states")]
    OrbitBound(usize),

    #[error("elements do not form a multichain from the identity to the top")]
    NotMultichain,

    #[error("order precondition violated: {0}")]
    OrderPrecondition(String),

    #[error("top element has a nonzero fixed space")]
    FixedSpaceNotZero,

    #[error("subspaces do not form a direct-sum decomposition of the ambient space")]
    NotDecomposition,

    #[error("twisted complement condition fails at index {0}")]
    TwistedComplement(usize),

    #[error("argument out of range: {0}")]
    ArgRange(String),

    #[error("composition mismatch: parts must be positive and sum to {0}")]
    BadComposition(usize),

    #[error("brute force infeasible for n = {0}")]
    Infeasible(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
