//! Monomial first integrals and the diagonal separation test.

use serde::Serialize;

use crate::algebra::{serde_rationals, RatVector, Rational};
use crate::integral::{AlgebraicIntegral, IntegralTerm};
use crate::system::MultinomialSystem;

/// Primitive basis of `{B : (B;C_j) = 0 for all j}`, sorted. Its size is
/// `n - rank(c_ij)` and it does not depend on the exponent rows at all.
pub fn monomial_integral_basis(s: &MultinomialSystem) -> Vec<RatVector> {
    let mut basis: Vec<RatVector> = s
        .coefficient_rows()
        .null_space()
        .into_iter()
        .map(|b| b.primitive())
        .collect();
    basis.sort();
    basis
}

/// Each basis vector as a one-term integral `Y^B`.
pub fn monomial_integrals(s: &MultinomialSystem) -> Vec<AlgebraicIntegral> {
    monomial_integral_basis(s)
        .into_iter()
        .map(|b| {
            AlgebraicIntegral::new(vec![IntegralTerm::new(Rational::from_integer(1.into()), b)])
                .expect("single nonzero term")
        })
        .collect()
}

/// `z_i = Y^{H_i}` decouples the system into `z_i' = (H_i;C_i) z_i^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationResult {
    pub substitutions: Vec<RatVector>,
    #[serde(serialize_with = "serde_rationals::serialize")]
    pub diagonal: Vec<Rational>,
}

/// Present iff `r = n` and `(H_i;C_j) = 0` whenever `i != j`.
pub fn separation_check(s: &MultinomialSystem) -> Option<SeparationResult> {
    if s.r() != s.n() {
        return None;
    }
    for i in 0..s.r() {
        for j in 0..s.r() {
            if i != j && !num_traits::Zero::is_zero(&s.expo(i).dot(s.coef(j))) {
                return None;
            }
        }
    }
    Some(SeparationResult {
        substitutions: s.terms().iter().map(|t| t.expo.clone()).collect(),
        diagonal: s.terms().iter().map(|t| t.expo.dot(&t.coef)).collect(),
    })
}
