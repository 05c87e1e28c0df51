//! Tools for the slice-rank polynomial method over F_p.
//!
//! * [`field`]: arithmetic in F_p and F_p^n.
//! * [`bound`]: the exact monomial count N and the bound 3N.
//! * [`poly`]: the indicator polynomial `prod (1 - (u + v + w)^(p-1))`.
//! * [`tensor`]: tensors `A^k -> F_p`, slices, triangular-support
//!   certificates and matrix rank.
//! * [`oracle`]: brute-force slice rank for tiny 3-tensors.
//! * [`sumfree`]: tricolored ordered sum-free sets and their verifier.
//! * [`search`]: exhaustive and greedy searches for such sets.
//! * [`decompose`]: the explicit slice decomposition of a system's indicator
//!   tensor with at most 3N slices.
//! * [`cli`]: the `slicerank` command-line front end.

pub mod bound;
pub mod budget;
pub mod cli;
pub mod decompose;
pub mod error;
pub mod field;
mod json;
pub mod oracle;
pub mod poly;
pub mod search;
pub mod sumfree;
pub mod tensor;

pub use budget::Budget;
pub use error::{Error, Result};
pub use field::{FpScalar, FpVector, PrimeModulus};
