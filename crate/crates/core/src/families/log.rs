//! `y'' = c22 y^{h21} y'^2 + c23 y^alpha y'^beta` with
//! `alpha = (q-1) h21 + q - 2` and `beta = h32 + 1`, and its integral
//!
//! `I = e_1 y^u + ln(1 + e_2 y'^w + sum_{m=1}^{q-2} f_m y^{m u})`
//!
//! where `u = h21 + 1`, `w = 1 - h32`, `e_1 = -w c22 / u`,
//! `f_m = (-e_1)^m / m!` and `e_2 = -e_1 u f_{q-2} / (w c23)`. The inner sum
//! is listed from the highest power down, so `e_k = f_{q-k+1}`.

use num_traits::Zero;
use serde::Serialize;

use super::require_verified;
use crate::algebra::{serde_rational, RatVector, Rational};
use crate::derivative::verify_log_b;
use crate::error::{Error, Result};
use crate::integral::{IntegralTerm, LogIntegralB};
use crate::system::{MultinomialSystem, OdeTerm, ScalarOde};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogFamilyParams {
    pub q: usize,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub h21: Rational,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub h32: Rational,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub c22: Rational,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub c23: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogFamily {
    pub ode: ScalarOde,
    pub system: MultinomialSystem,
    pub integral: LogIntegralB,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub alpha: Rational,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub beta: Rational,
}

pub fn log_family(p: &LogFamilyParams) -> Result<LogFamily> {
    if p.q < 3 {
        return Err(Error::Precondition(format!(
            "q must be at least 3, got {}",
            p.q
        )));
    }
    let one = Rational::from_integer(1.into());
    let q = Rational::from_integer(p.q.into());
    let u = &p.h21 + &one;
    let w = &one - &p.h32;
    for (value, what) in [
        (&u, "h21 + 1"),
        (&w, "1 - h32"),
        (&p.c22, "c22"),
        (&p.c23, "c23"),
    ] {
        if value.is_zero() {
            return Err(Error::Precondition(format!("{what} must be nonzero")));
        }
    }
    let alpha = (&q - &one) * &p.h21 + &q - Rational::from_integer(2.into());
    let beta = &p.h32 + &one;

    let ode = ScalarOde::new(
        2,
        vec![
            OdeTerm {
                l: p.c22.clone(),
                m: RatVector::new(vec![p.h21.clone(), Rational::from_integer(2.into())]),
            },
            OdeTerm {
                l: p.c23.clone(),
                m: RatVector::new(vec![alpha.clone(), beta.clone()]),
            },
        ],
    )?;
    let system = ode.reduce()?;

    let e1 = -&w * &p.c22 / &u;
    // f[m - 1] = (-e1)^m / m!
    let mut f: Vec<Rational> = Vec::with_capacity(p.q - 2);
    let mut current = one.clone();
    for m in 1..=p.q - 2 {
        current = current * -&e1 / Rational::from_integer(m.into());
        f.push(current.clone());
    }
    let e2 = -&e1 * &u * &f[p.q - 3] / (&w * &p.c23);

    let zero = Rational::zero();
    let mut inner = vec![IntegralTerm::new(
        e2,
        RatVector::new(vec![zero.clone(), w.clone()]),
    )];
    for m in (1..=p.q - 2).rev() {
        let power = &u * Rational::from_integer(m.into());
        inner.push(IntegralTerm::new(
            f[m - 1].clone(),
            RatVector::new(vec![power, zero.clone()]),
        ));
    }
    let lead = IntegralTerm::new(e1, RatVector::new(vec![u, zero]));
    let integral = LogIntegralB::new(lead, inner)?;
    require_verified(
        verify_log_b(&integral, &system)?,
        "logarithmic family integral",
    )?;
    Ok(LogFamily {
        ode,
        system,
        integral,
        alpha,
        beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{frac, int};

    fn params(
        q: usize,
        h21: Rational,
        h32: Rational,
        c22: Rational,
        c23: Rational,
    ) -> LogFamilyParams {
        LogFamilyParams {
            q,
            h21,
            h32,
            c22,
            c23,
        }
    }

    #[test]
    fn worked_example() {
        let fam = log_family(&params(4, int(0), int(-1), int(2), int(-3))).unwrap();
        assert_eq!(fam.ode.to_string(), "ode 2\nterm 2 | 0 2\nterm -3 | 2 0\n");
        let i = &fam.integral;
        assert_eq!(i.lead().e, int(-4));
        let es: Vec<Rational> = i.inner().iter().map(|t| t.e.clone()).collect();
        assert_eq!(es, vec![frac(-16, 3), int(8), int(4)]);
        let bs: Vec<RatVector> = i.inner().iter().map(|t| t.b.clone()).collect();
        assert_eq!(
            bs,
            vec![
                RatVector::from_ints(&[0, 2]),
                RatVector::from_ints(&[2, 0]),
                RatVector::from_ints(&[1, 0])
            ]
        );
    }

    #[test]
    fn q4_matches_printed_coefficients() {
        let (h21, h32, c22, c23) = (frac(1, 2), frac(-2, 3), int(3), frac(5, 7));
        let fam = log_family(&params(
            4,
            h21.clone(),
            h32.clone(),
            c22.clone(),
            c23.clone(),
        ))
        .unwrap();
        let one = int(1);
        let u = &h21 + &one;
        let v = &h32 - &one;
        let e1 = &v * &c22 / &u;
        let e2 = &v * &v * &c22 * &c22 * &c22 / (int(2) * &u * &u * &c23);
        let e3 = &v * &v * &c22 * &c22 / (int(2) * &u * &u);
        let e4 = -&v * &c22 / &u;
        let i = &fam.integral;
        assert_eq!(i.lead().e, e1);
        let es: Vec<Rational> = i.inner().iter().map(|t| t.e.clone()).collect();
        assert_eq!(es, vec![e2, e3, e4]);
        assert_eq!(fam.alpha, int(3) * &h21 + int(2));
    }

    #[test]
    fn other_orders_verify() {
        for q in [3, 5, 6] {
            for (h21, h32, c22, c23) in [
                (int(0), int(-1), int(2), int(-3)),
                (frac(1, 3), int(2), frac(-1, 2), int(4)),
                (int(-2), frac(1, 2), int(1), frac(-7, 5)),
            ] {
                let fam = log_family(&params(q, h21, h32, c22, c23)).unwrap();
                assert_eq!(fam.integral.rho(), q);
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(log_family(&params(2, int(0), int(-1), int(2), int(-3))).is_err());
        assert!(log_family(&params(4, int(-1), int(-1), int(2), int(-3))).is_err());
        assert!(log_family(&params(4, int(0), int(1), int(2), int(-3))).is_err());
        assert!(log_family(&params(4, int(0), int(-1), int(2), int(0))).is_err());
    }
}
