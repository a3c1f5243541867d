//! Multinomial systems `y' = y * sum_j C_j Y^{H_j}` and scalar ODEs
//! `y^(n) = sum_j l_j Y^{M_j}`, with their text formats.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{serde_rational, RatMatrix, RatVector, Rational};
use crate::error::{Error, Result};
use crate::text::{expect_len, rationals, statements};

/// One term `C_j Y^{H_j}`: a coefficient column and an exponent row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Term {
    pub coef: RatVector,
    pub expo: RatVector,
}

impl Term {
    pub fn new(coef: RatVector, expo: RatVector) -> Self {
        Term { coef, expo }
    }
}

/// A canonical multinomial system: exponent rows pairwise distinct, no zero
/// coefficient column, at least one term. Term order is first appearance in
/// the input and every term index elsewhere in the crate refers to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultinomialSystem {
    n: usize,
    terms: Vec<Term>,
}

/// What canonicalization did to the input terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MergeRecord {
    pub expo: RatVector,
    /// 0-based indices of the input terms sharing this exponent.
    pub inputs: Vec<usize>,
    /// The summed coefficient column was zero and the term was dropped.
    pub dropped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SystemReport {
    pub system: MultinomialSystem,
    pub merges: Vec<MergeRecord>,
}

impl MultinomialSystem {
    /// Canonicalize a raw term list, discarding the merge log.
    pub fn new(n: usize, terms: Vec<Term>) -> Result<Self> {
        Ok(Self::canonicalize(n, terms)?.system)
    }

    /// Merge terms with equal exponent rows by summing their columns, then
    /// drop zero columns.
    pub fn canonicalize(n: usize, raw: Vec<Term>) -> Result<SystemReport> {
        if n == 0 {
            return Err(Error::Invalid("variable count must be at least 1".into()));
        }
        let mut order: Vec<(RatVector, RatVector, Vec<usize>)> = Vec::new();
        let mut index: HashMap<RatVector, usize> = HashMap::new();
        for (i, term) in raw.into_iter().enumerate() {
            if term.coef.len() != n {
                return Err(Error::dimension(
                    format!("coefficient of term {}", i + 1),
                    n,
                    term.coef.len(),
                ));
            }
            if term.expo.len() != n {
                return Err(Error::dimension(
                    format!("exponent of term {}", i + 1),
                    n,
                    term.expo.len(),
                ));
            }
            match index.get(&term.expo) {
                Some(&slot) => {
                    let entry = &mut order[slot];
                    entry.0 = &entry.0 + &term.coef;
                    entry.2.push(i);
                }
                None => {
                    index.insert(term.expo.clone(), order.len());
                    order.push((term.coef, term.expo, vec![i]));
                }
            }
        }
        let mut terms = Vec::new();
        let mut merges = Vec::new();
        for (coef, expo, inputs) in order {
            let dropped = coef.is_zero();
            if inputs.len() > 1 || dropped {
                merges.push(MergeRecord {
                    expo: expo.clone(),
                    inputs,
                    dropped,
                });
            }
            if !dropped {
                terms.push(Term { coef, expo });
            }
        }
        if terms.is_empty() {
            return Err(Error::EmptySystem);
        }
        Ok(SystemReport {
            system: MultinomialSystem { n, terms },
            merges,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of terms `r`.
    pub fn r(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term(&self, alpha: usize) -> &Term {
        &self.terms[alpha]
    }

    pub fn coef(&self, alpha: usize) -> &RatVector {
        &self.terms[alpha].coef
    }

    pub fn expo(&self, alpha: usize) -> &RatVector {
        &self.terms[alpha].expo
    }

    /// The `r x n` matrix whose rows are the coefficient columns `C_j`; its
    /// right null space is the set of `B` with `(B;C_j) = 0` for all `j`.
    pub fn coefficient_rows(&self) -> RatMatrix {
        let rows: Vec<RatVector> = self.terms.iter().map(|t| t.coef.clone()).collect();
        RatMatrix::from_rows(self.n, &rows).expect("canonical system has consistent widths")
    }

    /// Replace every exponent row `H_j` by `alpha * H_j`.
    pub fn sigma_alpha(&self, alpha: &Rational) -> Result<MultinomialSystem> {
        if alpha.is_zero() {
            return Err(Error::DegenerateScale);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(t.coef.clone(), t.expo.scale(alpha)))
            .collect();
        MultinomialSystem::new(self.n, terms)
    }

    pub fn parse(text: &str) -> Result<SystemReport> {
        let stmts = statements(text);
        let Some(header) = stmts.first() else {
            return Err(Error::syntax(1, 1, "empty input, expected `mvf <n>`"));
        };
        if header.keyword() != "mvf" {
            return Err(header.error(format!("expected `mvf`, found `{}`", header.keyword())));
        }
        let n = match header.args() {
            [tok] => tok.count()?,
            _ => return Err(header.error("expected `mvf <n>`")),
        };
        let mut raw = Vec::new();
        for stmt in &stmts[1..] {
            if stmt.keyword() != "term" {
                return Err(stmt.error(format!("expected `term`, found `{}`", stmt.keyword())));
            }
            let (left, right) = stmt.split_bar()?;
            let coef = rationals(left)?;
            let expo = rationals(right)?;
            expect_len(stmt, "coefficient column", &coef, n)?;
            expect_len(stmt, "exponent row", &expo, n)?;
            raw.push(Term::new(coef, expo));
        }
        Self::canonicalize(n, raw)
    }
}

impl fmt::Display for MultinomialSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mvf {}", self.n)?;
        for t in &self.terms {
            writeln!(f, "term {} | {}", t.coef, t.expo)?;
        }
        Ok(())
    }
}

/// One term `l_j Y^{M_j}` of a scalar ODE, exponents over `(y, y', ..., y^(n-1))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OdeTerm {
    #[serde(serialize_with = "serde_rational::serialize")]
    pub l: Rational,
    pub m: RatVector,
}

/// `y^(n) = sum_j l_j Y^{M_j}` with distinct `M_j` and nonzero `l_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScalarOde {
    order: usize,
    terms: Vec<OdeTerm>,
}

impl ScalarOde {
    /// Merges repeated exponent rows by summing `l` and drops zero terms. An
    /// empty right-hand side (`y^(n) = 0`) is allowed.
    pub fn new(order: usize, raw: Vec<OdeTerm>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Invalid("ODE order must be at least 1".into()));
        }
        let mut terms: Vec<OdeTerm> = Vec::new();
        for (i, t) in raw.into_iter().enumerate() {
            if t.m.len() != order {
                return Err(Error::dimension(
                    format!("exponent of ODE term {}", i + 1),
                    order,
                    t.m.len(),
                ));
            }
            match terms.iter_mut().find(|u| u.m == t.m) {
                Some(existing) => existing.l += t.l,
                None => terms.push(t),
            }
        }
        terms.retain(|t| !t.l.is_zero());
        Ok(ScalarOde { order, terms })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &[OdeTerm] {
        &self.terms
    }

    pub fn parse(text: &str) -> Result<ScalarOde> {
        let stmts = statements(text);
        let Some(header) = stmts.first() else {
            return Err(Error::syntax(1, 1, "empty input, expected `ode <n>`"));
        };
        if header.keyword() != "ode" {
            return Err(header.error(format!("expected `ode`, found `{}`", header.keyword())));
        }
        let order = match header.args() {
            [tok] => tok.count()?,
            _ => return Err(header.error("expected `ode <n>`")),
        };
        let mut raw = Vec::new();
        for stmt in &stmts[1..] {
            if stmt.keyword() != "term" {
                return Err(stmt.error(format!("expected `term`, found `{}`", stmt.keyword())));
            }
            let (left, right) = stmt.split_bar()?;
            let l = match left {
                [tok] => tok.rational()?,
                _ => return Err(stmt.error("expected exactly one coefficient before `|`")),
            };
            let m = rationals(right)?;
            expect_len(stmt, "exponent row", &m, order)?;
            raw.push(OdeTerm { l, m });
        }
        ScalarOde::new(order, raw)
    }

    /// Multinomial vector form with `y_1 = y, ..., y_n = y^(n-1)`.
    ///
    /// Each `y_i' = y_{i+1}` contributes `C = e_i`, `H = e_{i+1} - e_i`; each
    /// ODE term contributes `C = l_j e_n`, `H = M_j - e_n`.
    pub fn reduce(&self) -> Result<MultinomialSystem> {
        let n = self.order;
        let mut raw = Vec::with_capacity(n - 1 + self.terms.len());
        for i in 0..n - 1 {
            let expo = &RatVector::unit(n, i + 1) - &RatVector::unit(n, i);
            raw.push(Term::new(RatVector::unit(n, i), expo));
        }
        let last = RatVector::unit(n, n - 1);
        for t in &self.terms {
            raw.push(Term::new(last.scale(&t.l), &t.m - &last));
        }
        MultinomialSystem::new(n, raw)
    }

    /// Per term: `true` unless `Y^{M_j}` has the shape
    /// `(y^(i))^-1 y^(i+1) y^(n-1)` for some `0 <= i <= n-2`, the shape whose
    /// coefficient feeds into the integral's exponents.
    pub fn exponent_independence(&self) -> Vec<bool> {
        let n = self.order;
        let excluded: Vec<RatVector> = (0..n.saturating_sub(1))
            .map(|i| {
                let v = &RatVector::unit(n, i + 1) - &RatVector::unit(n, i);
                &v + &RatVector::unit(n, n - 1)
            })
            .collect();
        self.terms
            .iter()
            .map(|t| !excluded.contains(&t.m))
            .collect()
    }
}

impl fmt::Display for ScalarOde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ode {}", self.order)?;
        for t in &self.terms {
            writeln!(f, "term {} | {}", t.l, t.m)?;
        }
        Ok(())
    }
}

/// The second-order example `y'' = -l1 y^-1 y'^2 + l2 y + l3 y^3`.
pub fn exponent_example_ode(l1: &Rational, l2: &Rational, l3: &Rational) -> ScalarOde {
    let term = |l: &Rational, m: &[i64]| OdeTerm {
        l: l.clone(),
        m: RatVector::from_ints(m),
    };
    ScalarOde::new(
        2,
        vec![
            term(&-l1.clone(), &[-1, 2]),
            term(l2, &[1, 0]),
            term(l3, &[3, 0]),
        ],
    )
    .expect("fixed shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{frac, int};
    use proptest::prelude::*;

    const OSCILLATOR: &str = "mvf 2\nterm 1 0 | -1 1\nterm 0 -1 | 1 -1\n";

    fn v(x: &[i64]) -> RatVector {
        RatVector::from_ints(x)
    }

    #[test]
    fn parses_oscillator() {
        let rep = MultinomialSystem::parse(OSCILLATOR).unwrap();
        let s = rep.system;
        assert_eq!((s.n(), s.r()), (2, 2));
        assert_eq!(s.expo(0), &v(&[-1, 1]));
        assert_eq!(s.coef(0), &v(&[1, 0]));
        assert_eq!(s.expo(1), &v(&[1, -1]));
        assert_eq!(s.coef(1), &v(&[0, -1]));
        assert!(rep.merges.is_empty());
    }

    #[test]
    fn cancelling_terms_leave_empty_system() {
        let err =
            MultinomialSystem::parse("mvf 2\nterm 1 2 | 0 1\nterm -1 -2 | 0 1\n").unwrap_err();
        assert_eq!(err, Error::EmptySystem);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = MultinomialSystem::parse("mvf 2\nterm 1 0 | -1 1 1\n").unwrap_err();
        assert!(matches!(
            err,
            Error::Dimension {
                expected: 2,
                found: 3,
                ..
            }
        ));
        let err = MultinomialSystem::parse("mvf 2\nterm 1 0 -1 1\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }));
        let err = MultinomialSystem::parse("mvf 2\nterm 1 0 | -1 1/0\n").unwrap_err();
        assert!(matches!(
            err,
            Error::Syntax {
                line: 2,
                column: 15,
                ..
            }
        ));
        let err = MultinomialSystem::parse("ode 2\n").unwrap_err();
        assert!(matches!(
            err,
            Error::Syntax {
                line: 1,
                column: 1,
                ..
            }
        ));
    }

    #[test]
    fn printer_round_trips() {
        let s = MultinomialSystem::parse("mvf 2 # comment\nterm 2/4 0 | -1 1\nterm 0 -1 | 1/3 -1")
            .unwrap()
            .system;
        let printed = s.to_string();
        assert_eq!(printed, "mvf 2\nterm 1/2 0 | -1 1\nterm 0 -1 | 1/3 -1\n");
        assert_eq!(MultinomialSystem::parse(&printed).unwrap().system, s);
    }

    #[test]
    fn parses_scalar_ode_with_semicolons() {
        let ode = ScalarOde::parse("ode 2; term 2 | 0 2; term -3 | 2 0").unwrap();
        assert_eq!(ode.order(), 2);
        assert_eq!(ode.terms()[0].l, int(2));
        assert_eq!(ode.terms()[1].m, v(&[2, 0]));

        let forced = ScalarOde::parse("ode 2\nterm 1 | 0 0\n").unwrap();
        assert_eq!(forced.terms().len(), 1);

        let merged = ScalarOde::parse("ode 2\nterm 1 | 1 0\nterm 1/2 | 1 0\n").unwrap();
        assert_eq!(merged.terms().len(), 1);
        assert_eq!(merged.terms()[0].l, frac(3, 2));
    }

    #[test]
    fn reduces_worked_log_example() {
        let s = ScalarOde::parse("ode 2; term 2 | 0 2; term -3 | 2 0")
            .unwrap()
            .reduce()
            .unwrap();
        let expos: Vec<_> = s.terms().iter().map(|t| t.expo.clone()).collect();
        let coefs: Vec<_> = s.terms().iter().map(|t| t.coef.clone()).collect();
        assert_eq!(expos, vec![v(&[-1, 1]), v(&[0, 1]), v(&[2, -1])]);
        assert_eq!(coefs, vec![v(&[1, 0]), v(&[0, 2]), v(&[0, -3])]);
    }

    #[test]
    fn reduces_free_particle() {
        let s = ScalarOde::new(2, vec![]).unwrap().reduce().unwrap();
        assert_eq!(s.terms(), &[Term::new(v(&[1, 0]), v(&[-1, 1]))]);
    }

    #[test]
    fn reduction_merges_chain_term() {
        let one = int(1);
        let s = exponent_example_ode(&one, &one, &one).reduce().unwrap();
        assert_eq!(s.r(), 3);
        assert_eq!(s.term(0), &Term::new(v(&[1, -1]), v(&[-1, 1])));
        assert_eq!(s.term(1), &Term::new(v(&[0, 1]), v(&[1, -1])));
        assert_eq!(s.term(2), &Term::new(v(&[0, 1]), v(&[3, -1])));
    }

    #[test]
    fn sigma_alpha_scales_exponents() {
        let s = MultinomialSystem::parse(OSCILLATOR).unwrap().system;
        let doubled = s.sigma_alpha(&int(2)).unwrap();
        assert_eq!(doubled.expo(0), &v(&[-2, 2]));
        assert_eq!(doubled.expo(1), &v(&[2, -2]));
        assert_eq!(doubled.coef(1), s.coef(1));
        assert_eq!(s.sigma_alpha(&int(1)).unwrap(), s);
        let half = s.sigma_alpha(&frac(1, 2)).unwrap();
        assert_eq!(half.expo(0), &RatVector::new(vec![frac(-1, 2), frac(1, 2)]));
        assert_eq!(s.sigma_alpha(&int(0)).unwrap_err(), Error::DegenerateScale);
    }

    #[test]
    fn exponent_independence_flags() {
        let one = int(1);
        let flags = exponent_example_ode(&one, &one, &one).exponent_independence();
        assert_eq!(flags, vec![false, true, true]);

        let third = ScalarOde::new(
            3,
            vec![
                OdeTerm {
                    l: int(1),
                    m: v(&[0, -1, 2]),
                },
                OdeTerm {
                    l: int(1),
                    m: v(&[-1, 1, 1]),
                },
                OdeTerm {
                    l: int(1),
                    m: v(&[1, 0, 0]),
                },
            ],
        )
        .unwrap();
        assert_eq!(third.exponent_independence(), vec![false, false, true]);
    }

    fn small_system() -> impl Strategy<Value = MultinomialSystem> {
        (1usize..4, 1usize..5).prop_flat_map(|(n, r)| {
            proptest::collection::vec(
                (
                    proptest::collection::vec(-3i64..4, n),
                    proptest::collection::vec(-2i64..3, n),
                ),
                r,
            )
            .prop_filter_map("all terms cancel", move |raw| {
                let terms = raw
                    .into_iter()
                    .map(|(c, h)| Term::new(RatVector::from_ints(&c), RatVector::from_ints(&h)))
                    .collect();
                MultinomialSystem::new(n, terms).ok()
            })
        })
    }

    proptest! {
        #[test]
        fn print_parse_is_identity(s in small_system()) {
            let parsed = MultinomialSystem::parse(&s.to_string()).unwrap();
            prop_assert!(parsed.merges.is_empty());
            prop_assert_eq!(parsed.system, s);
        }

        #[test]
        fn canonicalization_is_idempotent(s in small_system()) {
            let again = MultinomialSystem::new(s.n(), s.terms().to_vec()).unwrap();
            prop_assert_eq!(again, s);
        }

        #[test]
        fn sigma_alpha_inverts(s in small_system(), num in 1i64..5, den in 1i64..5, neg in any::<bool>()) {
            let a = if neg { frac(-num, den) } else { frac(num, den) };
            let back = s.sigma_alpha(&a).unwrap().sigma_alpha(&a.recip()).unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
