use serde::Serialize;

use super::validate::{validate, ValidationReport};
use super::IntegralArray;
use crate::algebra::{serde_rationals, RatVector, Rational};
use crate::derivative::{verify_algebraic, Verification};
use crate::error::{Error, Result};
use crate::integral::{AlgebraicIntegral, IntegralTerm};
use crate::system::MultinomialSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Synthesis {
    /// Terms in column order.
    pub integral: AlgebraicIntegral,
    /// `B_k` per column.
    pub exponents: Vec<RatVector>,
    /// `e_k` per column, primitive.
    #[serde(serialize_with = "serde_rationals::serialize")]
    pub coefficients: Vec<Rational>,
    /// `E_i` per row.
    pub row_exponents: Vec<RatVector>,
    pub proof: Verification,
}

fn rejection(report: &ValidationReport) -> Error {
    if let super::Normality::Abnormal { terms } = &report.normality {
        return Error::AbnormalArray {
            terms: terms.iter().map(|t| t + 1).collect(),
        };
    }
    if !report.connected {
        return Error::Disconnected {
            components: report
                .components
                .iter()
                .map(|c| c.iter().map(|k| k + 1).collect())
                .collect(),
        };
    }
    let failed: Vec<String> = report.failed().iter().map(char::to_string).collect();
    Error::ArrayRejected(failed.join(", "))
}

/// Build `sum_k e_k Y^{B_k}` from a valid array and check it symbolically.
pub fn synthesize(a: &IntegralArray, s: &MultinomialSystem) -> Result<Synthesis> {
    let report = validate(a, s)?;
    if !report.passes() {
        return Err(rejection(&report));
    }
    let links = report.links.as_ref().expect("links are kept on the report");
    let b1 = report
        .lead_exponent
        .clone()
        .ok_or_else(|| Error::Contradiction("condition f passed without a solution".into()))?;
    let exponents: Vec<RatVector> = (0..a.q())
        .map(|k| &b1 + &links.offset(0, k).expect("connected"))
        .collect();

    let matrix = &report
        .matrix
        .as_ref()
        .expect("matrix built when e is checked")
        .0;
    let kernel = matrix.null_space();
    let [e] = kernel.as_slice() else {
        return Err(Error::Contradiction(format!(
            "coupling matrix nullity is {}, expected 1",
            kernel.len()
        )));
    };
    let coefficients = e.primitive().into_entries();

    let row_exponents = (0..a.p())
        .map(|i| {
            let k = (0..a.q())
                .find(|&k| a.get(i, k).is_some())
                .expect("row has entries");
            &exponents[k] + s.expo(a.get(i, k).expect("filled"))
        })
        .collect();

    let terms = coefficients
        .iter()
        .zip(&exponents)
        .map(|(e, b)| IntegralTerm::new(e.clone(), b.clone()))
        .collect();
    let integral =
        AlgebraicIntegral::new(terms).map_err(|err| Error::Contradiction(err.to_string()))?;
    let proof = verify_algebraic(&integral, s)?;
    if !proof.holds {
        return Err(Error::Contradiction(
            "synthesized integral does not verify".into(),
        ));
    }
    Ok(Synthesis {
        integral,
        exponents,
        coefficients,
        row_exponents,
        proof,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;
    use crate::system::Term;
    use num_traits::Zero;

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

    #[test]
    fn oscillator_energy() {
        let a = IntegralArray::from_numbers(&[&[2, 1]]).unwrap();
        let syn = synthesize(&a, &oscillator()).unwrap();
        assert_eq!(syn.exponents, vec![v(&[0, 2]), v(&[2, 0])]);
        assert_eq!(syn.coefficients, vec![int(1), int(1)]);
        assert_eq!(syn.row_exponents, vec![v(&[1, 1])]);
        assert!(syn.proof.holds);
    }

    #[test]
    fn column_property_holds() {
        let a = IntegralArray::from_numbers(&[&[2, 1]]).unwrap();
        let s = oscillator();
        let syn = synthesize(&a, &s).unwrap();
        for (k, b) in syn.exponents.iter().enumerate() {
            for alpha in 0..s.r() {
                assert_eq!(b.dot(s.coef(alpha)).is_zero(), !a.column_contains(k, alpha));
            }
        }
    }

    #[test]
    fn rejections() {
        let s = oscillator();
        let abnormal = IntegralArray::from_numbers(&[&[1, 2], &[2, 1]]).unwrap();
        assert!(matches!(
            synthesize(&abnormal, &s),
            Err(Error::AbnormalArray { .. })
        ));
        let split = IntegralArray::from_numbers(&[&[1, 2, 0, 0], &[0, 0, 2, 1]]).unwrap();
        assert_eq!(
            synthesize(&split, &s),
            Err(Error::Disconnected {
                components: vec![vec![1, 2], vec![3, 4]]
            })
        );
        let generic = MultinomialSystem::new(
            2,
            (1..=4)
                .map(|i| Term::new(v(&[1, i]), v(&[i, i * i])))
                .collect(),
        )
        .unwrap();
        let bad = IntegralArray::from_numbers(&[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(
            synthesize(&bad, &generic),
            Err(Error::ArrayRejected("b".into()))
        );
    }
}
