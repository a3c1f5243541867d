//! Exact rational scalars, vectors and matrices.

mod matrix;
mod rational;
mod vector;

pub use matrix::{RatMatrix, Rref, Solution};
pub use rational::{frac, int, parse_rational, primitive, to_f64, Rational};
pub(crate) use rational::{serde_rational, serde_rationals};
pub use vector::RatVector;
