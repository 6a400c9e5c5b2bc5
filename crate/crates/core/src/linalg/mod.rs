//! Exact integer, rational and GF(2) linear algebra.
//!
//! No floating point is used anywhere in this module.

mod gf2;
mod hnf;
pub(crate) mod int;
mod matrix;
mod rational;
mod snf;

pub use gf2::{parity_vector, solve_mod2, Gf2Echelon, Gf2System};
pub use hnf::{check_echelon, hermite_form, hnf, pivots_of, HnfResult};
pub use matrix::IntMatrix;
pub use rational::{
    back_substitute, is_even_integer, mod2, mul_rational, solve_triangular_rational,
    RationalVector,
};
pub use snf::{integer_solvable, snf, SnfResult};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("row {row} breaks the staircase pattern")]
    NotStaircase { row: usize },
}
