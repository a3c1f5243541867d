//! First integrals of multinomial ODE systems `y' = y * sum_j C_j Y^{H_j}`.
//!
//! Integrals are built and checked in exact rational arithmetic. The main
//! entry points are [`derivative::verify`] for checking a claimed integral,
//! [`array`] for synthesizing algebraic integrals from integral arrays, and
//! [`families`] for the closed-form parameter families. [`numeric`] gives an
//! independent floating-point cross-check.

pub mod algebra;
pub mod array;
pub mod derivative;
pub mod error;
pub mod families;
pub mod integral;
pub mod monomial;
pub mod numeric;
pub mod system;
mod text;

pub use algebra::{RatMatrix, RatVector, Rational};
pub use error::{Error, Result};
pub use integral::{AlgebraicIntegral, Integral, IntegralTerm, LogIntegralA, LogIntegralB};
pub use system::{MultinomialSystem, ScalarOde, Term};
