//! Exact character sums over `GF(p^{4k})` for the binomial family
//! `f(x) = Tr_n(a·x^d + b·x^2)`, `d = p^{3k} + p^{2k} - p^k + 1`.
//!
//! Everything here is computed exactly: field arithmetic over `Z/p`, and
//! character sums as elements of `Z[ω]`.

pub mod cyclo;
pub mod cyclotomy;
pub mod error;
pub mod expsum;
pub mod field;
mod instance;
pub mod jacobsthal;
pub mod numth;
pub mod sequences;
pub mod walsh;

pub use cyclo::{CycScalar, Cyclo};
pub use error::{Error, Result};
pub use field::{Elem, FieldCtx, FieldParams, SubfieldView};
pub use instance::Instance;

/// Exact character-sum values with 64-bit coefficients.
pub type CycInt = Cyclo<i64>;
/// Wide variant for sums that would overflow `i64`.
pub type CycInt128 = Cyclo<i128>;
