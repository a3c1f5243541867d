//! Adding a third term `C_3 Y^{H_3}` with `C_3 = l1 C_1 + l2 C_2` to an
//! algebraic-branch planar system, and the matching third integral term
//! `e_3 Y^{B_3}` with `B_3 = B_1 + H_3 - H_1`.

use num_traits::Zero;
use serde::Serialize;

use super::planar::{planar_algebraic, PlanarTheta};
use super::require_verified;
use crate::algebra::{serde_rational, RatMatrix, RatVector, Rational};
use crate::derivative::verify_algebraic;
use crate::error::{Error, Result};
use crate::integral::{AlgebraicIntegral, IntegralTerm};
use crate::system::{MultinomialSystem, Term};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionParams {
    pub base: PlanarTheta,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub l1: Rational,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub l2: Rational,
    pub h3: RatVector,
}

impl ExtensionParams {
    pub fn c3(&self) -> RatVector {
        &self.base.c1().scale(&self.l1) + &self.base.c2().scale(&self.l2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extension {
    pub system: MultinomialSystem,
    pub integral: AlgebraicIntegral,
    /// The 3x3 coupling determinant over rows `E_1, E_2, E_3`; present in
    /// the first case only, where it must vanish.
    #[serde(serialize_with = "serialize_opt")]
    pub determinant: Option<Rational>,
}

fn serialize_opt<S: serde::Serializer>(
    v: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.collect_str(r),
        None => s.serialize_none(),
    }
}

fn nonzero(value: Rational, what: &str) -> Result<Rational> {
    if value.is_zero() {
        Err(Error::Precondition(format!("{what} must be nonzero")))
    } else {
        Ok(value)
    }
}

struct Parts {
    system: MultinomialSystem,
    c: [RatVector; 3],
    b: [RatVector; 3],
    e: [Rational; 3],
}

fn build(x: &ExtensionParams) -> Result<Parts> {
    if x.h3.len() != 2 {
        return Err(Error::dimension("H_3", 2, x.h3.len()));
    }
    let i2 = planar_algebraic(&x.base)?;
    let [t1, t2] = i2.terms() else {
        unreachable!("planar integrals have two terms")
    };
    let (c1, c2, c3) = (x.base.c1(), x.base.c2(), x.c3());
    let (h1, h2) = (x.base.h1(), x.base.h2());
    let b3 = &(&t1.b + &x.h3) - &h1;
    let e3 = -&t1.e * t1.b.dot(&c3) / nonzero(b3.dot(&c1), "(B_3;C_1)")?;
    let system = MultinomialSystem::new(
        2,
        vec![
            Term::new(c1.clone(), h1),
            Term::new(c2.clone(), h2),
            Term::new(c3.clone(), x.h3.clone()),
        ],
    )?;
    Ok(Parts {
        system,
        c: [c1, c2, c3],
        b: [t1.b.clone(), t2.b.clone(), b3],
        e: [t1.e.clone(), t2.e.clone(), e3],
    })
}

fn finish(parts: Parts, determinant: Option<Rational>) -> Result<Extension> {
    let terms = parts
        .e
        .into_iter()
        .zip(parts.b)
        .map(|(e, b)| IntegralTerm::new(e, b))
        .collect();
    let integral = AlgebraicIntegral::new(terms).map_err(|e| Error::Precondition(e.to_string()))?;
    require_verified(
        verify_algebraic(&integral, &parts.system)?,
        "extended integral",
    )?;
    Ok(Extension {
        system: parts.system,
        integral,
        determinant,
    })
}

/// Both `l1` and `l2` nonzero.
pub fn extend_case1(x: &ExtensionParams) -> Result<Extension> {
    if x.l1.is_zero() || x.l2.is_zero() {
        return Err(Error::Precondition("case 1 needs l1 * l2 != 0".into()));
    }
    let (c1, c2, c3) = (x.base.c1(), x.base.c2(), x.c3());
    let (h1, h2, h3) = (x.base.h1(), x.base.h2(), &x.h3);
    let lhs = h3.dot(&c3);
    let rhs = &x.l1 * h1.dot(&c1) + &x.l2 * h2.dot(&c2);
    if lhs != rhs {
        return Err(Error::Constraint(format!(
            "(H3;C3) = {lhs} but l1 (H1;C1) + l2 (H2;C2) = {rhs}"
        )));
    }
    let d13 = &h1 - h3;
    let d23 = &h2 - h3;
    nonzero(d13.dot(&c1), "(H1-H3;C1)")?;
    nonzero(d13.dot(&c3), "(H1-H3;C3)")?;
    nonzero(d23.dot(&c2), "(H2-H3;C2)")?;
    nonzero(d23.dot(&c3), "(H2-H3;C3)")?;

    let parts = build(x)?;
    let [b1, b2, b3] = &parts.b;
    let [c1, c2, c3] = &parts.c;
    let z = Rational::zero;
    let m = RatMatrix::new(
        3,
        3,
        vec![
            b1.dot(c2),
            b2.dot(c1),
            z(),
            b1.dot(c3),
            z(),
            b3.dot(c1),
            z(),
            b2.dot(c3),
            b3.dot(c2),
        ],
    )?;
    let det = m.determinant()?;
    if !det.is_zero() {
        return Err(Error::Contradiction(format!(
            "coupling determinant is {det}, expected 0"
        )));
    }
    finish(parts, Some(det))
}

/// `l1 = 0`, `l2 != 0`.
pub fn extend_case2(x: &ExtensionParams) -> Result<Extension> {
    if !x.l1.is_zero() || x.l2.is_zero() {
        return Err(Error::Precondition(
            "case 2 needs l1 = 0 and l2 != 0".into(),
        ));
    }
    let (c1, c2, c3) = (x.base.c1(), x.base.c2(), x.c3());
    let (h1, h2, h3) = (x.base.h1(), x.base.h2(), &x.h3);
    let coupling = (h3 - &h2).dot(&c2);
    if !coupling.is_zero() {
        return Err(Error::Constraint(format!(
            "(H3-H2;C2) = {coupling}, must be 0"
        )));
    }
    let d31 = h3 - &h1;
    nonzero(d31.dot(&c1), "(H3-H1;C1)")?;
    nonzero(d31.dot(&c3), "(H3-H1;C3)")?;
    finish(build(x)?, None)
}
