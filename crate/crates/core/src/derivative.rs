//! Derivatives along trajectories and symbolic verification of integrals.
//!
//! Everything here is a sum of monomials. `(Y^B)' = Y^B sum_j (B;C_j) Y^{H_j}`
//! and `(ln Y^B)' = sum_j (B;C_j) Y^{H_j}`; an integral holds exactly when the
//! collected derivative (for the second logarithmic form, the numerator after
//! clearing the denominator) has no terms left.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{serde_rational, RatVector, Rational};
use crate::error::{Error, Result};
use crate::integral::{AlgebraicIntegral, Integral, IntegralTerm, LogIntegralA, LogIntegralB};
use crate::system::MultinomialSystem;

/// `coeff * Y^expo`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialTerm {
    pub expo: RatVector,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub coeff: Rational,
}

/// Distinct exponents with their nonzero collected coefficients, sorted by
/// exponent.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct CollectedDerivative {
    pub rows: Vec<MonomialTerm>,
}

impl CollectedDerivative {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn coefficient(&self, expo: &RatVector) -> Rational {
        self.rows
            .iter()
            .find(|r| &r.expo == expo)
            .map_or_else(Rational::zero, |r| r.coeff.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub holds: bool,
    /// The surviving terms; empty exactly when `holds`.
    pub residual: CollectedDerivative,
}

impl From<CollectedDerivative> for Verification {
    fn from(residual: CollectedDerivative) -> Self {
        Verification {
            holds: residual.is_empty(),
            residual,
        }
    }
}

fn check_width(s: &MultinomialSystem, b: &RatVector) -> Result<()> {
    if b.len() != s.n() {
        return Err(Error::dimension("exponent vs. system", s.n(), b.len()));
    }
    Ok(())
}

/// `(Y^B)'` as a list of `(B + H_j, (B;C_j))`, zero couplings omitted.
pub fn monomial_derivative(b: &RatVector, s: &MultinomialSystem) -> Result<Vec<MonomialTerm>> {
    check_width(s, b)?;
    Ok(s.terms()
        .iter()
        .filter_map(|t| {
            let coeff = b.dot(&t.coef);
            (!coeff.is_zero()).then(|| MonomialTerm {
                expo: b + &t.expo,
                coeff,
            })
        })
        .collect())
}

/// `(ln Y^B)'` as a list of `(H_j, (B;C_j))`, zero couplings omitted.
pub fn log_monomial_derivative(b: &RatVector, s: &MultinomialSystem) -> Result<Vec<MonomialTerm>> {
    check_width(s, b)?;
    Ok(s.terms()
        .iter()
        .filter_map(|t| {
            let coeff = b.dot(&t.coef);
            (!coeff.is_zero()).then(|| MonomialTerm {
                expo: t.expo.clone(),
                coeff,
            })
        })
        .collect())
}

pub fn collect(terms: impl IntoIterator<Item = MonomialTerm>) -> CollectedDerivative {
    let mut acc: BTreeMap<RatVector, Rational> = BTreeMap::new();
    for t in terms {
        *acc.entry(t.expo).or_insert_with(Rational::zero) += t.coeff;
    }
    CollectedDerivative {
        rows: acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(expo, coeff)| MonomialTerm { expo, coeff })
            .collect(),
    }
}

fn weighted(e: &Rational, terms: Vec<MonomialTerm>) -> impl Iterator<Item = MonomialTerm> + '_ {
    terms.into_iter().map(move |t| MonomialTerm {
        expo: t.expo,
        coeff: t.coeff * e,
    })
}

fn sum_derivative(terms: &[IntegralTerm], s: &MultinomialSystem) -> Result<Vec<MonomialTerm>> {
    let mut out = Vec::new();
    for t in terms {
        out.extend(weighted(&t.e, monomial_derivative(&t.b, s)?));
    }
    Ok(out)
}

/// Collected `I'` of an algebraic integral.
pub fn algebraic_derivative(
    i: &AlgebraicIntegral,
    s: &MultinomialSystem,
) -> Result<CollectedDerivative> {
    Ok(collect(sum_derivative(i.terms(), s)?))
}

pub fn verify_algebraic(i: &AlgebraicIntegral, s: &MultinomialSystem) -> Result<Verification> {
    algebraic_derivative(i, s).map(Verification::from)
}

pub fn verify_log_a(i: &LogIntegralA, s: &MultinomialSystem) -> Result<Verification> {
    let mut all = log_monomial_derivative(i.log_expo(), s)?;
    all.extend(sum_derivative(i.terms(), s)?);
    Ok(collect(all).into())
}

/// Numerator of `I'` after multiplying through by `1 + sum e_k Y^{B_k}`:
/// `e_1 (Y^{B_1})' (1 + sum e_k Y^{B_k}) + sum e_k (Y^{B_k})'`.
pub fn log_b_numerator(i: &LogIntegralB, s: &MultinomialSystem) -> Result<CollectedDerivative> {
    let lead = i.lead();
    let lead_derivative: Vec<MonomialTerm> =
        weighted(&lead.e, monomial_derivative(&lead.b, s)?).collect();
    let mut all = lead_derivative.clone();
    for inner in i.inner() {
        for d in &lead_derivative {
            all.push(MonomialTerm {
                expo: &d.expo + &inner.b,
                coeff: &d.coeff * &inner.e,
            });
        }
    }
    all.extend(sum_derivative(i.inner(), s)?);
    Ok(collect(all))
}

pub fn verify_log_b(i: &LogIntegralB, s: &MultinomialSystem) -> Result<Verification> {
    log_b_numerator(i, s).map(Verification::from)
}

pub fn verify(i: &Integral, s: &MultinomialSystem) -> Result<Verification> {
    match i {
        Integral::Algebraic(a) => verify_algebraic(a, s),
        Integral::LogA(a) => verify_log_a(a, s),
        Integral::LogB(b) => verify_log_b(b, s),
    }
}

/// The collected derivative itself, before the verdict.
pub fn derive(i: &Integral, s: &MultinomialSystem) -> Result<CollectedDerivative> {
    verify(i, s).map(|v| v.residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{frac, int};
    use crate::system::Term;
    use proptest::prelude::*;

    fn v(x: &[i64]) -> RatVector {
        RatVector::from_ints(x)
    }

    fn oscillator() -> MultinomialSystem {
        MultinomialSystem::new(
            2,
            vec![
                Term::new(v(&[1, 0]), v(&[-1, 1])),
                Term::new(v(&[0, -1]), v(&[1, -1])),
            ],
        )
        .unwrap()
    }

    fn alg(terms: &[(Rational, &[i64])]) -> AlgebraicIntegral {
        AlgebraicIntegral::new(
            terms
                .iter()
                .map(|(e, b)| IntegralTerm::new(e.clone(), v(b)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn monomial_derivatives_on_oscillator() {
        let s = oscillator();
        assert_eq!(
            monomial_derivative(&v(&[0, 2]), &s).unwrap(),
            vec![MonomialTerm {
                expo: v(&[1, 1]),
                coeff: int(-2)
            }]
        );
        assert_eq!(
            monomial_derivative(&v(&[2, 0]), &s).unwrap(),
            vec![MonomialTerm {
                expo: v(&[1, 1]),
                coeff: int(2)
            }]
        );
        assert!(monomial_derivative(&v(&[0, 0]), &s).unwrap().is_empty());
        assert!(monomial_derivative(&v(&[0, 0, 1]), &s).is_err());
    }

    #[test]
    fn log_monomial_derivatives() {
        let s = MultinomialSystem::new(
            2,
            vec![
                Term::new(v(&[1, 0]), v(&[0, 1])),
                Term::new(v(&[0, 1]), v(&[1, 1])),
            ],
        )
        .unwrap();
        assert_eq!(
            log_monomial_derivative(&v(&[0, -1]), &s).unwrap(),
            vec![MonomialTerm {
                expo: v(&[1, 1]),
                coeff: int(-1)
            }]
        );
        assert_eq!(
            log_monomial_derivative(&v(&[1, 0]), &oscillator()).unwrap(),
            vec![MonomialTerm {
                expo: v(&[-1, 1]),
                coeff: int(1)
            }]
        );
        let orth = MultinomialSystem::new(2, vec![Term::new(v(&[1, 0]), v(&[0, 1]))]).unwrap();
        assert!(log_monomial_derivative(&v(&[0, 3]), &orth)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn collect_cancels_and_sorts() {
        let s = oscillator();
        let mut all = monomial_derivative(&v(&[0, 2]), &s).unwrap();
        all.extend(monomial_derivative(&v(&[2, 0]), &s).unwrap());
        assert!(collect(all).is_empty());

        let single = MonomialTerm {
            expo: v(&[1, 2]),
            coeff: int(3),
        };
        assert_eq!(collect(vec![single.clone()]).rows, vec![single]);

        let e = v(&[0, 1]);
        let thrice = [1, 1, -2].map(|c| MonomialTerm {
            expo: e.clone(),
            coeff: int(c),
        });
        assert!(collect(thrice).is_empty());

        let sorted = collect(vec![
            MonomialTerm {
                expo: v(&[2, 0]),
                coeff: int(1),
            },
            MonomialTerm {
                expo: v(&[-1, 5]),
                coeff: int(1),
            },
        ]);
        assert_eq!(sorted.rows[0].expo, v(&[-1, 5]));
    }

    #[test]
    fn verifies_oscillator_energy() {
        let s = oscillator();
        let energy = alg(&[(int(1), &[0, 2]), (int(1), &[2, 0])]);
        assert!(verify_algebraic(&energy, &s).unwrap().holds);

        let wrong = alg(&[(int(1), &[2, 0]), (int(-1), &[0, 2])]);
        let res = verify_algebraic(&wrong, &s).unwrap();
        assert!(!res.holds);
        assert_eq!(
            res.residual.rows,
            vec![MonomialTerm {
                expo: v(&[1, 1]),
                coeff: int(4)
            }]
        );
    }

    #[test]
    fn verifies_three_term_extension() {
        // y1' = y2 + y1^2 y2, y2' = -y1 - y1 y2^2
        let s = MultinomialSystem::new(
            2,
            vec![
                Term::new(v(&[1, 0]), v(&[-1, 1])),
                Term::new(v(&[0, -1]), v(&[1, -1])),
                Term::new(v(&[1, -1]), v(&[1, 1])),
            ],
        )
        .unwrap();
        let i = alg(&[(int(1), &[0, 2]), (int(1), &[2, 0]), (int(1), &[2, 2])]);
        assert!(verify_algebraic(&i, &s).unwrap().holds);
    }

    #[test]
    fn verifies_log_a_instances() {
        let s = MultinomialSystem::new(
            2,
            vec![
                Term::new(v(&[1, 0]), v(&[0, 1])),
                Term::new(v(&[0, 1]), v(&[1, 1])),
            ],
        )
        .unwrap();
        let good =
            LogIntegralA::new(v(&[0, -1]), vec![IntegralTerm::new(int(1), v(&[1, 0]))]).unwrap();
        assert!(verify_log_a(&good, &s).unwrap().holds);

        let perturbed =
            LogIntegralA::new(v(&[0, -1]), vec![IntegralTerm::new(int(2), v(&[1, 0]))]).unwrap();
        assert!(!verify_log_a(&perturbed, &s).unwrap().holds);

        let orth = MultinomialSystem::new(2, vec![Term::new(v(&[1, 0]), v(&[0, 1]))]).unwrap();
        let trivial =
            LogIntegralA::new(v(&[0, 1]), vec![IntegralTerm::new(int(5), v(&[0, 2]))]).unwrap();
        assert!(verify_log_a(&trivial, &orth).unwrap().holds);
    }

    #[test]
    fn verifies_worked_log_b_example() {
        // y'' = 2 y'^2 - 3 y^2 in vector form.
        let s = MultinomialSystem::new(
            2,
            vec![
                Term::new(v(&[1, 0]), v(&[-1, 1])),
                Term::new(v(&[0, 2]), v(&[0, 1])),
                Term::new(v(&[0, -3]), v(&[2, -1])),
            ],
        )
        .unwrap();
        let i = LogIntegralB::new(
            IntegralTerm::new(int(-4), v(&[1, 0])),
            vec![
                IntegralTerm::new(frac(-16, 3), v(&[0, 2])),
                IntegralTerm::new(int(8), v(&[2, 0])),
                IntegralTerm::new(int(4), v(&[1, 0])),
            ],
        )
        .unwrap();
        assert!(verify_log_b(&i, &s).unwrap().holds);

        let orth = MultinomialSystem::new(2, vec![Term::new(v(&[1, 0]), v(&[0, 1]))]).unwrap();
        let constant_lead =
            LogIntegralB::new(IntegralTerm::new(int(3), v(&[0, 1])), vec![]).unwrap();
        assert!(verify_log_b(&constant_lead, &orth).unwrap().holds);
    }

    fn system_and_exponents() -> impl Strategy<Value = (MultinomialSystem, RatVector, RatVector)> {
        (1usize..4).prop_flat_map(|n| {
            (
                proptest::collection::vec(
                    (
                        proptest::collection::vec(-3i64..4, n),
                        proptest::collection::vec(-2i64..3, n),
                    ),
                    1..4,
                ),
                proptest::collection::vec(-3i64..4, n),
                proptest::collection::vec(-3i64..4, n),
            )
                .prop_filter_map("empty system", move |(raw, b1, b2)| {
                    let terms = raw
                        .into_iter()
                        .map(|(c, h)| Term::new(v(&c), v(&h)))
                        .collect();
                    MultinomialSystem::new(n, terms)
                        .ok()
                        .map(|s| (s, v(&b1), v(&b2)))
                })
        })
    }

    proptest! {
        #[test]
        fn couplings_are_additive((s, b1, b2) in system_and_exponents()) {
            for t in s.terms() {
                prop_assert_eq!((&b1 + &b2).dot(&t.coef), b1.dot(&t.coef) + b2.dot(&t.coef));
            }
        }

        #[test]
        fn scaling_coefficients_preserves_verdict((s, b1, b2) in system_and_exponents(), k in 1i64..5) {
            prop_assume!(b1 != b2);
            let i = AlgebraicIntegral::new(vec![
                IntegralTerm::new(int(1), b1.clone()),
                IntegralTerm::new(int(-1), b2.clone()),
            ]).unwrap();
            let before = verify_algebraic(&i, &s).unwrap().holds;
            let after = verify_algebraic(&i.scale_coefficients(&frac(-k, 3)).unwrap(), &s).unwrap().holds;
            prop_assert_eq!(before, after);
        }

        #[test]
        fn log_b_numerator_without_lead_is_inner_derivative((s, b1, b2) in system_and_exponents()) {
            prop_assume!(b1 != b2 && !b1.is_zero() && !b2.is_zero());
            let inner = vec![IntegralTerm::new(int(2), b1.clone()), IntegralTerm::new(frac(-1, 2), b2.clone())];
            // A lead with vanishing couplings contributes nothing, so the
            // numerator must equal the derivative of the inner sum.
            let orth = s.coefficient_rows().null_space();
            prop_assume!(!orth.is_empty());
            let lead = IntegralTerm::new(int(7), orth[0].clone());
            let i = LogIntegralB::new(lead, inner.clone()).unwrap();
            let direct = algebraic_derivative(&AlgebraicIntegral::new(inner).unwrap(), &s).unwrap();
            prop_assert_eq!(log_b_numerator(&i, &s).unwrap(), direct);
        }
    }
}
