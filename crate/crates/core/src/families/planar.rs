use num_traits::Zero;
use serde::Serialize;

use super::require_verified;
use crate::algebra::{serde_rational, RatMatrix, RatVector, Rational};
use crate::derivative::{verify_algebraic, verify_log_a};
use crate::error::{Error, Result};
use crate::integral::{AlgebraicIntegral, IntegralTerm, LogIntegralA};
use crate::system::{MultinomialSystem, Term};

/// `y' = y [C_1 Y^{H_1} + C_2 Y^{H_2}]` with `C_1 = (c11, c21)`,
/// `C_2 = (c12, c22)`, `H_1 = (h11, h12)`, `H_2 = (h21, h22)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanarTheta {
    #[serde(serialize_with = "serde_rational::serialize")]
    pub c11: Rational,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub c21: Rational,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub c12: Rational,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub c22: Rational,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub h11: Rational,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub h12: Rational,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub h21: Rational,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub h22: Rational,
}

impl PlanarTheta {
    /// Parameters in the order `c11 c21 c12 c22 h11 h12 h21 h22`.
    pub fn from_slice(v: &[Rational]) -> Result<Self> {
        let [c11, c21, c12, c22, h11, h12, h21, h22] = v else {
            return Err(Error::dimension("planar parameters", 8, v.len()));
        };
        Ok(PlanarTheta {
            c11: c11.clone(),
            c21: c21.clone(),
            c12: c12.clone(),
            c22: c22.clone(),
            h11: h11.clone(),
            h12: h12.clone(),
            h21: h21.clone(),
            h22: h22.clone(),
        })
    }

    pub fn c1(&self) -> RatVector {
        RatVector::new(vec![self.c11.clone(), self.c21.clone()])
    }

    pub fn c2(&self) -> RatVector {
        RatVector::new(vec![self.c12.clone(), self.c22.clone()])
    }

    pub fn h1(&self) -> RatVector {
        RatVector::new(vec![self.h11.clone(), self.h12.clone()])
    }

    pub fn h2(&self) -> RatVector {
        RatVector::new(vec![self.h21.clone(), self.h22.clone()])
    }

    pub fn d(&self) -> Rational {
        &self.c11 * &self.c22 - &self.c12 * &self.c21
    }

    /// `(H_1 - H_2; C_1)`.
    pub fn a1(&self) -> Rational {
        (&self.h1() - &self.h2()).dot(&self.c1())
    }

    /// `(H_1 - H_2; C_2)`.
    pub fn a2(&self) -> Rational {
        (&self.h1() - &self.h2()).dot(&self.c2())
    }

    /// Normal to `C_1` with `((-c21, c11); C_2) = d`.
    fn normal1(&self) -> RatVector {
        RatVector::new(vec![-self.c21.clone(), self.c11.clone()])
    }

    /// Normal to `C_2` with `((c22, -c12); C_1) = d`.
    fn normal2(&self) -> RatVector {
        RatVector::new(vec![self.c22.clone(), -self.c12.clone()])
    }

    /// The system; equal exponents are merged.
    pub fn system(&self) -> Result<MultinomialSystem> {
        MultinomialSystem::new(
            2,
            vec![
                Term::new(self.c1(), self.h1()),
                Term::new(self.c2(), self.h2()),
            ],
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum PlanarBranch {
    Algebraic {
        integral: AlgebraicIntegral,
    },
    /// `d = 0`: a basis of monomial integral exponents.
    Monomial {
        exponents: Vec<RatVector>,
    },
    /// `(H_1 - H_2; C_2) = 0`.
    LogStar {
        integral: LogIntegralA,
    },
    /// `(H_1 - H_2; C_1) = 0`.
    LogStarStar {
        integral: LogIntegralA,
    },
    Degenerate {
        reason: String,
    },
}

impl PlanarBranch {
    pub fn name(&self) -> &'static str {
        match self {
            PlanarBranch::Algebraic { .. } => "algebraic",
            PlanarBranch::Monomial { .. } => "monomial",
            PlanarBranch::LogStar { .. } => "log-star",
            PlanarBranch::LogStarStar { .. } => "log-star-star",
            PlanarBranch::Degenerate { .. } => "degenerate",
        }
    }
}

pub fn planar_branch(t: &PlanarTheta) -> Result<PlanarBranch> {
    if t.h1() == t.h2() {
        return Ok(PlanarBranch::Degenerate {
            reason: "H_1 = H_2, the two terms merge".into(),
        });
    }
    if t.d().is_zero() {
        let coef = RatMatrix::from_rows(2, &[t.c1(), t.c2()])?;
        let mut exponents: Vec<RatVector> = coef
            .null_space()
            .into_iter()
            .map(|b| b.primitive())
            .collect();
        exponents.sort();
        return Ok(PlanarBranch::Monomial { exponents });
    }
    match (t.a1().is_zero(), t.a2().is_zero()) {
        (false, false) => Ok(PlanarBranch::Algebraic {
            integral: planar_algebraic(t)?,
        }),
        (false, true) => Ok(PlanarBranch::LogStar {
            integral: planar_log(t)?,
        }),
        (true, false) => Ok(PlanarBranch::LogStarStar {
            integral: planar_log(t)?,
        }),
        (true, true) => Err(Error::Contradiction(
            "H_1 != H_2 and d != 0, yet H_1 - H_2 is orthogonal to both C_1 and C_2".into(),
        )),
    }
}

/// `(H_2 - H_1; C_1) Y^{B_1} + (H_2 - H_1; C_2) Y^{B_2}`.
pub fn planar_algebraic(t: &PlanarTheta) -> Result<AlgebraicIntegral> {
    let (d, a1, a2) = (t.d(), t.a1(), t.a2());
    if d.is_zero() || a1.is_zero() || a2.is_zero() {
        return Err(Error::Precondition(format!(
            "algebraic branch needs d, (H1-H2;C1), (H1-H2;C2) all nonzero; got {d}, {a1}, {a2}"
        )));
    }
    let b1 = t.normal1().scale(&(&a2 / &d));
    let b2 = t.normal2().scale(&(-&a1 / &d));
    if b2 != &(&b1 + &t.h2()) - &t.h1() {
        return Err(Error::Contradiction("B_2 != B_1 + H_2 - H_1".into()));
    }
    let integral =
        AlgebraicIntegral::new(vec![IntegralTerm::new(-a1, b1), IntegralTerm::new(-a2, b2)])?;
    require_verified(
        verify_algebraic(&integral, &t.system()?)?,
        "planar algebraic integral",
    )?;
    Ok(integral)
}

/// `ln Y^{B} + Y^{B'}` on either logarithmic branch.
pub fn planar_log(t: &PlanarTheta) -> Result<LogIntegralA> {
    let (d, a1, a2) = (t.d(), t.a1(), t.a2());
    if d.is_zero() {
        return Err(Error::Precondition(
            "logarithmic branches need d != 0".into(),
        ));
    }
    let (log_expo, algebraic) = match (a1.is_zero(), a2.is_zero()) {
        (false, true) => (t.normal1().scale(&(&a1 / &d)), &t.h2() - &t.h1()),
        (true, false) => (t.normal2().scale(&(-&a2 / &d)), &t.h1() - &t.h2()),
        _ => {
            return Err(Error::Precondition(format!(
            "logarithmic branches need exactly one of (H1-H2;C1), (H1-H2;C2) zero; got {a1}, {a2}"
        )))
        }
    };
    let one = Rational::from_integer(1.into());
    let integral = LogIntegralA::new(log_expo, vec![IntegralTerm::new(one, algebraic)])?;
    require_verified(
        verify_log_a(&integral, &t.system()?)?,
        "planar logarithmic integral",
    )?;
    Ok(integral)
}
