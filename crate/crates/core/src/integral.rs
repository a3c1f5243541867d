//! Candidate first integrals: the algebraic form `sum_k e_k Y^{B_k}` and the
//! two logarithmic forms, plus their text format.

use std::collections::HashSet;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{primitive, serde_rational, RatVector, Rational};
use crate::error::{Error, Result};
use crate::text::{rationals, statements, Statement};

/// `e * Y^B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IntegralTerm {
    #[serde(serialize_with = "serde_rational::serialize")]
    pub e: Rational,
    pub b: RatVector,
}

impl IntegralTerm {
    pub fn new(e: Rational, b: RatVector) -> Self {
        IntegralTerm { e, b }
    }
}

fn check_terms(terms: &[IntegralTerm], n: usize, what: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for t in terms {
        if t.b.len() != n {
            return Err(Error::dimension(format!("{what} exponent"), n, t.b.len()));
        }
        if t.e.is_zero() {
            return Err(Error::Invalid(format!(
                "{what} coefficient must be nonzero"
            )));
        }
        if !seen.insert(&t.b) {
            return Err(Error::Invalid(format!(
                "repeated {what} exponent ({})",
                t.b
            )));
        }
    }
    Ok(())
}

/// `I = sum_k e_k Y^{B_k}` with nonzero `e_k` and distinct `B_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraicIntegral {
    terms: Vec<IntegralTerm>,
}

impl AlgebraicIntegral {
    pub fn new(terms: Vec<IntegralTerm>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::Invalid(
                "an algebraic integral needs at least one term".into(),
            ));
        };
        check_terms(&terms, first.b.len(), "term")?;
        Ok(AlgebraicIntegral { terms })
    }

    pub fn terms(&self) -> &[IntegralTerm] {
        &self.terms
    }

    pub fn n(&self) -> usize {
        self.terms[0].b.len()
    }

    /// Terms sorted by exponent with the coefficient vector scaled to
    /// coprime integers, first coefficient positive. Two integrals that
    /// differ by a nonzero overall factor or by term order have equal
    /// canonical forms.
    pub fn canonical(&self) -> AlgebraicIntegral {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| a.b.cmp(&b.b));
        let es: Vec<Rational> = terms.iter().map(|t| t.e.clone()).collect();
        for (t, e) in terms.iter_mut().zip(primitive(&es)) {
            t.e = e;
        }
        AlgebraicIntegral { terms }
    }

    pub fn scale_coefficients(&self, factor: &Rational) -> Result<AlgebraicIntegral> {
        AlgebraicIntegral::new(
            self.terms
                .iter()
                .map(|t| IntegralTerm::new(&t.e * factor, t.b.clone()))
                .collect(),
        )
    }

    /// `{e_k, alpha * B_k}`, the integral carried over by exponent scaling.
    pub fn scale_exponents(&self, alpha: &Rational) -> Result<AlgebraicIntegral> {
        if alpha.is_zero() {
            return Err(Error::DegenerateScale);
        }
        AlgebraicIntegral::new(
            self.terms
                .iter()
                .map(|t| IntegralTerm::new(t.e.clone(), t.b.scale(alpha)))
                .collect(),
        )
    }

    /// Sorted exponent rows, the shape of the integral independent of its
    /// coefficients.
    pub fn exponent_multiset(&self) -> Vec<RatVector> {
        let mut v: Vec<RatVector> = self.terms.iter().map(|t| t.b.clone()).collect();
        v.sort();
        v
    }
}

/// `I = ln(Y^{B_1}) + sum_{k>=2} e_k Y^{B_k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogIntegralA {
    log_expo: RatVector,
    terms: Vec<IntegralTerm>,
}

impl LogIntegralA {
    pub fn new(log_expo: RatVector, terms: Vec<IntegralTerm>) -> Result<Self> {
        if log_expo.is_zero() {
            return Err(Error::Invalid("logarithm exponent must be nonzero".into()));
        }
        check_terms(&terms, log_expo.len(), "term")?;
        Ok(LogIntegralA { log_expo, terms })
    }

    pub fn log_expo(&self) -> &RatVector {
        &self.log_expo
    }

    pub fn terms(&self) -> &[IntegralTerm] {
        &self.terms
    }

    pub fn n(&self) -> usize {
        self.log_expo.len()
    }
}

/// `I = e_1 Y^{B_1} + ln(1 + sum_{k>=2} e_k Y^{B_k})`; `rho = inner.len() + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogIntegralB {
    lead: IntegralTerm,
    inner: Vec<IntegralTerm>,
}

impl LogIntegralB {
    pub fn new(lead: IntegralTerm, inner: Vec<IntegralTerm>) -> Result<Self> {
        if lead.e.is_zero() {
            return Err(Error::Invalid("lead coefficient must be nonzero".into()));
        }
        let n = lead.b.len();
        check_terms(&inner, n, "inner term")?;
        if inner.iter().any(|t| t.b.is_zero()) {
            return Err(Error::Invalid("inner exponents must be nonzero".into()));
        }
        Ok(LogIntegralB { lead, inner })
    }

    pub fn lead(&self) -> &IntegralTerm {
        &self.lead
    }

    pub fn inner(&self) -> &[IntegralTerm] {
        &self.inner
    }

    pub fn n(&self) -> usize {
        self.lead.b.len()
    }

    /// Number of monomials, lead included.
    pub fn rho(&self) -> usize {
        self.inner.len() + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Integral {
    Algebraic(AlgebraicIntegral),
    LogA(LogIntegralA),
    LogB(LogIntegralB),
}

impl Integral {
    pub fn n(&self) -> usize {
        match self {
            Integral::Algebraic(i) => i.n(),
            Integral::LogA(i) => i.n(),
            Integral::LogB(i) => i.n(),
        }
    }

    /// Every exponent `B` replaced by `alpha * B`, coefficients kept; the
    /// counterpart of scaling all system exponents by `alpha`.
    pub fn scale_exponents(&self, alpha: &Rational) -> Result<Integral> {
        if alpha.is_zero() {
            return Err(Error::DegenerateScale);
        }
        let scale = |terms: &[IntegralTerm]| -> Vec<IntegralTerm> {
            terms
                .iter()
                .map(|t| IntegralTerm::new(t.e.clone(), t.b.scale(alpha)))
                .collect()
        };
        Ok(match self {
            Integral::Algebraic(i) => Integral::Algebraic(i.scale_exponents(alpha)?),
            Integral::LogA(i) => Integral::LogA(LogIntegralA::new(
                i.log_expo().scale(alpha),
                scale(i.terms()),
            )?),
            Integral::LogB(i) => Integral::LogB(LogIntegralB::new(
                IntegralTerm::new(i.lead().e.clone(), i.lead().b.scale(alpha)),
                scale(i.inner()),
            )?),
        })
    }

    pub fn parse(text: &str) -> Result<Integral> {
        let stmts = statements(text);
        let Some(header) = stmts.first() else {
            return Err(Error::syntax(
                1,
                1,
                "empty input, expected `integral <form>`",
            ));
        };
        if header.keyword() != "integral" {
            return Err(header.error(format!("expected `integral`, found `{}`", header.keyword())));
        }
        let form = match header.args() {
            [tok] => tok,
            _ => return Err(header.error("expected `integral algebraic|logA|logB`")),
        };
        let body = &stmts[1..];
        match form.text {
            "algebraic" => {
                let terms = body.iter().map(term_line).collect::<Result<Vec<_>>>()?;
                same_width(body, &terms)?;
                AlgebraicIntegral::new(terms).map(Integral::Algebraic)
            }
            "logA" => {
                let Some((first, rest)) = body.split_first() else {
                    return Err(header.error("expected a `logterm` line"));
                };
                if first.keyword() != "logterm" {
                    return Err(
                        first.error(format!("expected `logterm`, found `{}`", first.keyword()))
                    );
                }
                let (left, right) = first.split_bar()?;
                if let Some(tok) = left.first() {
                    return Err(tok.error("`logterm` takes no coefficient"));
                }
                let log_expo = rationals(right)?;
                let terms = rest.iter().map(term_line).collect::<Result<Vec<_>>>()?;
                LogIntegralA::new(log_expo, terms).map(Integral::LogA)
            }
            "logB" => {
                let Some((first, rest)) = body.split_first() else {
                    return Err(header.error("expected a `lead` line"));
                };
                if first.keyword() != "lead" {
                    return Err(
                        first.error(format!("expected `lead`, found `{}`", first.keyword()))
                    );
                }
                let lead = coefficient_line(first)?;
                let inner = rest.iter().map(term_line).collect::<Result<Vec<_>>>()?;
                LogIntegralB::new(lead, inner).map(Integral::LogB)
            }
            other => Err(form.error(format!("unknown integral form `{other}`"))),
        }
    }
}

fn coefficient_line(stmt: &Statement<'_>) -> Result<IntegralTerm> {
    let (left, right) = stmt.split_bar()?;
    let e = match left {
        [tok] => tok.rational()?,
        _ => return Err(stmt.error("expected exactly one coefficient before `|`")),
    };
    Ok(IntegralTerm::new(e, rationals(right)?))
}

fn term_line(stmt: &Statement<'_>) -> Result<IntegralTerm> {
    if stmt.keyword() != "term" {
        return Err(stmt.error(format!("expected `term`, found `{}`", stmt.keyword())));
    }
    coefficient_line(stmt)
}

fn same_width(stmts: &[Statement<'_>], terms: &[IntegralTerm]) -> Result<()> {
    if let Some(first) = terms.first() {
        for (stmt, t) in stmts.iter().zip(terms) {
            if t.b.len() != first.b.len() {
                return Err(Error::dimension(
                    format!("exponent at line {}", stmt.line),
                    first.b.len(),
                    t.b.len(),
                ));
            }
        }
    }
    Ok(())
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: &[IntegralTerm]) -> fmt::Result {
    for t in terms {
        writeln!(f, "term {} | {}", t.e, t.b)?;
    }
    Ok(())
}

impl fmt::Display for AlgebraicIntegral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "integral algebraic")?;
        write_terms(f, &self.terms)
    }
}

impl fmt::Display for LogIntegralA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "integral logA")?;
        writeln!(f, "logterm | {}", self.log_expo)?;
        write_terms(f, &self.terms)
    }
}

impl fmt::Display for LogIntegralB {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "integral logB")?;
        writeln!(f, "lead {} | {}", self.lead.e, self.lead.b)?;
        write_terms(f, &self.inner)
    }
}

impl fmt::Display for Integral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Integral::Algebraic(i) => i.fmt(f),
            Integral::LogA(i) => i.fmt(f),
            Integral::LogB(i) => i.fmt(f),
        }
    }
}

impl From<AlgebraicIntegral> for Integral {
    fn from(i: AlgebraicIntegral) -> Self {
        Integral::Algebraic(i)
    }
}

impl From<LogIntegralA> for Integral {
    fn from(i: LogIntegralA) -> Self {
        Integral::LogA(i)
    }
}

impl From<LogIntegralB> for Integral {
    fn from(i: LogIntegralB) -> Self {
        Integral::LogB(i)
    }
}
