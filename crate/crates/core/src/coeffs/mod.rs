//! Exact scalar arithmetic: big rationals, sparse multivariate polynomials
//! over the integers, and canonical rational functions.
//!
//! Every computation session declares a fixed [`VarPool`] up front; all
//! polynomials and rational functions of that session carry the pool and
//! operations refuse to mix pools. Rational functions are kept in canonical
//! form (coprime numerator/denominator, positive leading denominator
//! coefficient), so equality is structural equality.

mod poly;
mod pool;
mod ratfun;

pub use poly::Polynomial;
pub use pool::{PoolScalars, VarPool};
pub use ratfun::RationalFunction;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("denominator is identically zero")]
    ZeroDenominator,
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("evaluation point does not bind every pool variable (expected {expected}, got {got})")]
    UnboundVariable { expected: usize, got: usize },
}
