//! The six integral-array conditions.
//!
//! (a) every row holds at least two distinct terms and no term repeats in a
//!     row or a column;
//! (b) the column offsets `L_jk` are path-independent and nonzero;
//! (c) a term missing from columns `j` and `k` has `(L_jk;C) = 0`;
//! (d) a term in column `j` but not in column `k` has `(L_jk;C) != 0`;
//! (e) the coupling matrix and every choice of `q - 1` of its columns have
//!     rank `q - 1`;
//! (f) the linear system fixing `B_1` is consistent.
//!
//! (c) through (f) need offsets, so they are skipped when (b) fails or the
//! array is not connected, and they are skipped for abnormal arrays (some
//! term in every column), for which no coupling matrix can be formed.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::links::{build_links, LinkGraph};
use super::IntegralArray;
use crate::algebra::{serde_rational, RatMatrix, RatVector, Rational, Solution};
use crate::error::{Error, Result};
use crate::system::MultinomialSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    RowUnderfilled {
        row: usize,
        distinct: usize,
    },
    RepeatInRow {
        row: usize,
        term: usize,
    },
    RepeatInColumn {
        column: usize,
        term: usize,
    },
    PathConflict {
        row: usize,
        from: usize,
        to: usize,
    },
    ZeroOffset {
        from: usize,
        to: usize,
    },
    SpuriousCoupling {
        term: usize,
        from: usize,
        to: usize,
        #[serde(serialize_with = "serde_rational::serialize")]
        value: Rational,
    },
    MissingCoupling {
        term: usize,
        present: usize,
        absent: usize,
    },
    RankDeficient {
        rank: usize,
        required: usize,
        dropped_columns: Vec<usize>,
    },
    InconsistentLeadSystem,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 1-based indices for people
        match self {
            Violation::RowUnderfilled { row, distinct } => {
                write!(
                    f,
                    "row {} has {} distinct term(s), needs 2",
                    row + 1,
                    distinct
                )
            }
            Violation::RepeatInRow { row, term } => {
                write!(f, "term {} repeats in row {}", term + 1, row + 1)
            }
            Violation::RepeatInColumn { column, term } => {
                write!(f, "term {} repeats in column {}", term + 1, column + 1)
            }
            Violation::PathConflict { row, from, to } => write!(
                f,
                "link between columns {} and {} in row {} contradicts another path",
                from + 1,
                to + 1,
                row + 1
            ),
            Violation::ZeroOffset { from, to } => {
                write!(f, "columns {} and {} get equal exponents", from + 1, to + 1)
            }
            Violation::SpuriousCoupling {
                term,
                from,
                to,
                value,
            } => write!(
                f,
                "term {} is absent from columns {} and {} but (L;C) = {}",
                term + 1,
                from + 1,
                to + 1,
                value
            ),
            Violation::MissingCoupling {
                term,
                present,
                absent,
            } => write!(
                f,
                "term {} is in column {} but not column {}, and (L;C) = 0",
                term + 1,
                present + 1,
                absent + 1
            ),
            Violation::RankDeficient {
                rank,
                required,
                dropped_columns,
            } => {
                if dropped_columns.is_empty() {
                    write!(f, "coupling matrix has rank {rank}, needs {required}")
                } else {
                    let cols: Vec<String> = dropped_columns
                        .iter()
                        .map(|c| (c + 1).to_string())
                        .collect();
                    write!(
                        f,
                        "coupling matrix has rank {rank} (needs {required}) after dropping column {}",
                        cols.join(", ")
                    )
                }
            }
            Violation::InconsistentLeadSystem => write!(f, "the system for B_1 is inconsistent"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConditionStatus {
    Pass,
    Fail { violations: Vec<Violation> },
    Skipped { reason: String },
}

impl ConditionStatus {
    fn from_violations(violations: Vec<Violation>) -> Self {
        if violations.is_empty() {
            ConditionStatus::Pass
        } else {
            ConditionStatus::Fail { violations }
        }
    }

    fn skipped(reason: &str) -> Self {
        ConditionStatus::Skipped {
            reason: reason.to_string(),
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, ConditionStatus::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, ConditionStatus::Fail { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Normality {
    Normal,
    /// Terms present in every column.
    Abnormal {
        terms: Vec<usize>,
    },
}

pub fn classify_normal(a: &IntegralArray) -> Normality {
    let everywhere: Vec<usize> = a
        .terms_used()
        .into_iter()
        .filter(|&alpha| (0..a.q()).all(|k| a.column_contains(k, alpha)))
        .collect();
    if everywhere.is_empty() {
        Normality::Normal
    } else {
        Normality::Abnormal { terms: everywhere }
    }
}

/// `a_ik = (B_k;C_alpha)` computed as `(L_jk;C_alpha)` with `j` the first
/// column missing `alpha`; zero at empty cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrayMatrix(pub RatMatrix);

impl Serialize for ArrayMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq((0..self.0.rows()).map(|i| self.0.row(i)))
    }
}

fn matrix_from_links(a: &IntegralArray, s: &MultinomialSystem, links: &LinkGraph) -> ArrayMatrix {
    let mut m = RatMatrix::zeros(a.p(), a.q());
    for i in 0..a.p() {
        for k in 0..a.q() {
            if let Some(alpha) = a.get(i, k) {
                let j = a.column_missing(alpha).expect("normal array");
                let offset = links.offset(j, k).expect("connected array");
                m.set(i, k, offset.dot(s.coef(alpha)));
            }
        }
    }
    ArrayMatrix(m)
}

/// Coupling matrix of a normal, connected, consistent array.
pub fn build_matrix(a: &IntegralArray, s: &MultinomialSystem) -> Result<ArrayMatrix> {
    a.check_indices(s)?;
    if let Normality::Abnormal { terms } = classify_normal(a) {
        return Err(Error::AbnormalArray {
            terms: terms.iter().map(|t| t + 1).collect(),
        });
    }
    let links = build_links(a, s);
    if !links.is_connected() {
        return Err(disconnected(&links));
    }
    if !links.is_consistent() {
        return Err(Error::ArrayRejected("b".into()));
    }
    Ok(matrix_from_links(a, s, &links))
}

fn disconnected(links: &LinkGraph) -> Error {
    Error::Disconnected {
        components: links
            .components
            .iter()
            .map(|c| c.iter().map(|k| k + 1).collect())
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub a: ConditionStatus,
    pub b: ConditionStatus,
    pub c: ConditionStatus,
    pub d: ConditionStatus,
    pub e: ConditionStatus,
    pub f: ConditionStatus,
    pub normality: Normality,
    pub connected: bool,
    /// 0-based column sets.
    pub components: Vec<Vec<usize>>,
    pub matrix: Option<ArrayMatrix>,
    /// Particular solution of the `B_1` system when (f) holds.
    pub lead_exponent: Option<RatVector>,
    #[serde(skip)]
    pub(crate) links: Option<LinkGraph>,
}

impl ValidationReport {
    pub fn conditions(&self) -> [(char, &ConditionStatus); 6] {
        [
            ('a', &self.a),
            ('b', &self.b),
            ('c', &self.c),
            ('d', &self.d),
            ('e', &self.e),
            ('f', &self.f),
        ]
    }

    /// Letters of the conditions that failed outright.
    pub fn failed(&self) -> Vec<char> {
        self.conditions()
            .iter()
            .filter(|(_, s)| s.is_fail())
            .map(|(c, _)| *c)
            .collect()
    }

    /// All six conditions pass on a normal connected array.
    pub fn passes(&self) -> bool {
        self.connected
            && self.normality == Normality::Normal
            && self.conditions().iter().all(|(_, s)| s.is_pass())
    }

    pub fn is_abnormal(&self) -> bool {
        matches!(self.normality, Normality::Abnormal { .. })
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, status) in self.conditions() {
            match status {
                ConditionStatus::Pass => writeln!(f, "condition {c}: pass")?,
                ConditionStatus::Skipped { reason } => {
                    writeln!(f, "condition {c}: skipped ({reason})")?
                }
                ConditionStatus::Fail { violations } => {
                    writeln!(f, "condition {c}: FAIL")?;
                    for v in violations {
                        writeln!(f, "  - {v}")?;
                    }
                }
            }
        }
        match &self.normality {
            Normality::Normal => writeln!(f, "normal: yes")?,
            Normality::Abnormal { terms } => {
                let t: Vec<String> = terms.iter().map(|t| (t + 1).to_string()).collect();
                writeln!(f, "normal: no (term {} in every column)", t.join(", "))?
            }
        }
        if self.connected {
            writeln!(f, "connected: yes")?;
        } else {
            let comps: Vec<String> = self
                .components
                .iter()
                .map(|c| {
                    let cols: Vec<String> = c.iter().map(|k| (k + 1).to_string()).collect();
                    format!("{{{}}}", cols.join(","))
                })
                .collect();
            writeln!(f, "connected: no; components {}", comps.join(" "))?;
        }
        if let Some(m) = &self.matrix {
            writeln!(f, "coupling matrix:")?;
            for i in 0..m.0.rows() {
                writeln!(f, "  {}", m.0.row(i))?;
            }
        }
        writeln!(
            f,
            "verdict: {}",
            if self.passes() { "valid" } else { "invalid" }
        )
    }
}

fn condition_a(a: &IntegralArray) -> Vec<Violation> {
    let mut out = Vec::new();
    for i in 0..a.p() {
        let mut seen: Vec<usize> = Vec::new();
        for cell in a.row(i).iter().flatten() {
            if seen.contains(cell) {
                out.push(Violation::RepeatInRow {
                    row: i,
                    term: *cell,
                });
            } else {
                seen.push(*cell);
            }
        }
        if seen.len() < 2 {
            out.push(Violation::RowUnderfilled {
                row: i,
                distinct: seen.len(),
            });
        }
    }
    for k in 0..a.q() {
        let mut seen: Vec<usize> = Vec::new();
        for cell in a.column(k).iter().flatten() {
            if seen.contains(cell) {
                out.push(Violation::RepeatInColumn {
                    column: k,
                    term: *cell,
                });
            } else {
                seen.push(*cell);
            }
        }
    }
    out.dedup();
    out
}

fn condition_b(links: &LinkGraph) -> Vec<Violation> {
    let mut out: Vec<Violation> = links
        .conflicts
        .iter()
        .map(|c| Violation::PathConflict {
            row: c.row,
            from: c.from,
            to: c.to,
        })
        .collect();
    out.extend(
        links
            .zero_offsets
            .iter()
            .map(|&(from, to)| Violation::ZeroOffset { from, to }),
    );
    out
}

fn conditions_c_d(
    a: &IntegralArray,
    s: &MultinomialSystem,
    links: &LinkGraph,
) -> (Vec<Violation>, Vec<Violation>) {
    let mut c = Vec::new();
    let mut d = Vec::new();
    for alpha in 0..s.r() {
        let coef = s.coef(alpha);
        for j in 0..a.q() {
            for k in 0..a.q() {
                if j == k {
                    continue;
                }
                let in_j = a.column_contains(j, alpha);
                let in_k = a.column_contains(k, alpha);
                let value = links.offset(j, k).expect("connected").dot(coef);
                if !in_j && !in_k && j < k && !value.is_zero() {
                    c.push(Violation::SpuriousCoupling {
                        term: alpha,
                        from: j,
                        to: k,
                        value,
                    });
                } else if in_j && !in_k && value.is_zero() {
                    d.push(Violation::MissingCoupling {
                        term: alpha,
                        present: j,
                        absent: k,
                    });
                }
            }
        }
    }
    (c, d)
}

fn condition_e(m: &ArrayMatrix, q: usize) -> Vec<Violation> {
    let required = q - 1;
    let mut out = Vec::new();
    let rank = m.0.rank();
    if rank != required {
        out.push(Violation::RankDeficient {
            rank,
            required,
            dropped_columns: vec![],
        });
    }
    for drop in 0..q {
        let keep: Vec<usize> = (0..q).filter(|&k| k != drop).collect();
        let sub_rank = m.0.select_columns(&keep).rank();
        if sub_rank != required {
            out.push(Violation::RankDeficient {
                rank: sub_rank,
                required,
                dropped_columns: vec![drop],
            });
        }
    }
    out
}

/// Rows `(B_1;C_alpha) = 0` for terms missing from column 1 and
/// `(B_1;C_alpha) = (L_j1;C_alpha)` for the others, `j` a column missing
/// `alpha`.
pub(crate) fn lead_system(
    a: &IntegralArray,
    s: &MultinomialSystem,
    links: &LinkGraph,
) -> (RatMatrix, RatVector) {
    let mut rhs = Vec::with_capacity(s.r());
    for alpha in 0..s.r() {
        if a.column_contains(0, alpha) {
            let j = a.column_missing(alpha).expect("normal array");
            rhs.push(links.offset(j, 0).expect("connected").dot(s.coef(alpha)));
        } else {
            rhs.push(Rational::zero());
        }
    }
    (s.coefficient_rows(), RatVector::new(rhs))
}

pub fn validate(a: &IntegralArray, s: &MultinomialSystem) -> Result<ValidationReport> {
    a.check_indices(s)?;
    let links = build_links(a, s);
    let status_a = ConditionStatus::from_violations(condition_a(a));
    let status_b = ConditionStatus::from_violations(condition_b(&links));
    let normality = classify_normal(a);
    let connected = links.is_connected();
    let mut report = ValidationReport {
        a: status_a,
        b: status_b,
        c: ConditionStatus::skipped("not evaluated"),
        d: ConditionStatus::skipped("not evaluated"),
        e: ConditionStatus::skipped("not evaluated"),
        f: ConditionStatus::skipped("not evaluated"),
        normality,
        connected,
        components: links.components.clone(),
        matrix: None,
        lead_exponent: None,
        links: None,
    };

    let reason = if report.is_abnormal() {
        Some("abnormal array")
    } else if !connected {
        Some("array not connected")
    } else if !report.b.is_pass() {
        Some("offsets ill-defined")
    } else {
        None
    };
    if let Some(reason) = reason {
        for status in [&mut report.c, &mut report.d, &mut report.e, &mut report.f] {
            *status = ConditionStatus::skipped(reason);
        }
        report.links = Some(links);
        return Ok(report);
    }

    let (c, d) = conditions_c_d(a, s, &links);
    report.c = ConditionStatus::from_violations(c);
    report.d = ConditionStatus::from_violations(d);

    let matrix = matrix_from_links(a, s, &links);
    report.e = ConditionStatus::from_violations(condition_e(&matrix, a.q()));
    report.matrix = Some(matrix);

    let (lhs, rhs) = lead_system(a, s, &links);
    match lhs.solve(&rhs)? {
        Solution::Inconsistent => {
            report.f = ConditionStatus::Fail {
                violations: vec![Violation::InconsistentLeadSystem],
            };
        }
        sol => {
            report.f = ConditionStatus::Pass;
            report.lead_exponent = sol.particular().cloned();
        }
    }
    report.links = Some(links);
    Ok(report)
}
