use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),

    #[error("dimension mismatch: {left} has dimension {left_dim}, {right} has dimension {right_dim}")]
    DimensionMismatch {
        left: String,
        left_dim: usize,
        right: String,
        right_dim: usize,
    },

    #[error("modulus mismatch: {left} is over F_{left_p}, {right} is over F_{right_p}")]
    ModulusMismatch {
        left: String,
        left_p: u32,
        right: String,
        right_p: u32,
    },

    #[error("value {value} is not a canonical residue mod {p}")]
    NotCanonical { value: u64, p: u32 },

    #[error("triple {index} violates a + b + c = 0")]
    NotZeroSum { index: usize },

    #[error("{what} needs {needed}, which exceeds the budget of {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: String,
        budget: u64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An internal invariant failed. Seeing this means there is a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
