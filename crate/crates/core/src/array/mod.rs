//! Integral arrays.
//!
//! A `p x q` array has one column per integral term `B_k` and one row per
//! collected derivative exponent `E_i`. Cell `(i, k)` holds the system term
//! `alpha` exactly when `B_k + H_alpha = E_i` with `(B_k;C_alpha) != 0`, and
//! is empty otherwise. Arrays store term indices (0-based internally, 1-based
//! in files) so the system stays the single source of exponent data.

mod links;
mod search;
mod synth;
mod validate;

use std::fmt;

use serde::Serialize;

pub use links::{build_links, Link, LinkConflict, LinkGraph};
pub use search::{search, SearchHit, SEARCH_LIMIT};
pub use synth::{synthesize, Synthesis};
pub use validate::{
    build_matrix, classify_normal, validate, ArrayMatrix, ConditionStatus, Normality,
    ValidationReport, Violation,
};

use crate::error::{Error, Result};
use crate::system::MultinomialSystem;
use crate::text::statements;

pub type Cell = Option<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IntegralArray {
    p: usize,
    q: usize,
    cells: Vec<Cell>,
}

impl IntegralArray {
    /// Shape-checked constructor. The structural rules (no repeats, two
    /// entries per row) are validation conditions, not construction errors,
    /// so that the validator can report them.
    pub fn new(p: usize, q: usize, cells: Vec<Cell>) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::Invalid("array dimensions must be positive".into()));
        }
        if cells.len() != p * q {
            return Err(Error::dimension("array cells", p * q, cells.len()));
        }
        Ok(IntegralArray { p, q, cells })
    }

    pub fn from_rows(rows: &[Vec<Cell>]) -> Result<Self> {
        let q = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != q) {
            return Err(Error::Invalid("ragged array rows".into()));
        }
        Self::new(rows.len(), q, rows.concat())
    }

    /// Rows given as 1-based term numbers, 0 meaning empty. Test and example
    /// convenience.
    pub fn from_numbers(rows: &[&[usize]]) -> Result<Self> {
        let rows: Vec<Vec<Cell>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| x.checked_sub(1)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn get(&self, i: usize, k: usize) -> Cell {
        self.cells[i * self.q + k]
    }

    pub fn row(&self, i: usize) -> &[Cell] {
        &self.cells[i * self.q..(i + 1) * self.q]
    }

    pub fn rows(&self) -> Vec<Vec<Cell>> {
        (0..self.p).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, k: usize) -> Vec<Cell> {
        (0..self.p).map(|i| self.get(i, k)).collect()
    }

    pub fn column_contains(&self, k: usize, alpha: usize) -> bool {
        (0..self.p).any(|i| self.get(i, k) == Some(alpha))
    }

    /// First column (in index order) that does not contain `alpha`.
    pub fn column_missing(&self, alpha: usize) -> Option<usize> {
        (0..self.q).find(|&k| !self.column_contains(k, alpha))
    }

    /// Distinct term indices used anywhere, ascending.
    pub fn terms_used(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.cells.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub(crate) fn check_indices(&self, s: &MultinomialSystem) -> Result<()> {
        for (idx, cell) in self.cells.iter().enumerate() {
            if let Some(alpha) = cell {
                if *alpha >= s.r() {
                    return Err(Error::Invalid(format!(
                        "array cell ({}, {}) refers to term {} but the system has {} terms",
                        idx / self.q + 1,
                        idx % self.q + 1,
                        alpha + 1,
                        s.r()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn permute(&self, row_order: &[usize], col_order: &[usize]) -> IntegralArray {
        let mut cells = Vec::with_capacity(self.cells.len());
        for &i in row_order {
            for &k in col_order {
                cells.push(self.get(i, k));
            }
        }
        IntegralArray {
            p: self.p,
            q: self.q,
            cells,
        }
    }

    /// Lexicographically smallest grid (row-major, empty before any term)
    /// among all row and column permutations. For a fixed column order the
    /// best row order is the sorted one, so only column orders are walked.
    pub fn canonical(&self) -> IntegralArray {
        let mut best: Option<IntegralArray> = None;
        for perm in permutations(self.q) {
            let mut rows: Vec<Vec<Cell>> = (0..self.p)
                .map(|i| perm.iter().map(|&k| self.get(i, k)).collect())
                .collect();
            rows.sort();
            let candidate = IntegralArray {
                p: self.p,
                q: self.q,
                cells: rows.concat(),
            };
            if best.as_ref().is_none_or(|b| candidate.cells < b.cells) {
                best = Some(candidate);
            }
        }
        best.expect("at least one permutation")
    }

    pub fn parse(text: &str) -> Result<IntegralArray> {
        let stmts = statements(text);
        let Some(header) = stmts.first() else {
            return Err(Error::syntax(1, 1, "empty input, expected `array <p> <q>`"));
        };
        if header.keyword() != "array" {
            return Err(header.error(format!("expected `array`, found `{}`", header.keyword())));
        }
        let (p, q) = match header.args() {
            [a, b] => (a.count()?, b.count()?),
            _ => return Err(header.error("expected `array <p> <q>`")),
        };
        let body = &stmts[1..];
        if body.len() != p {
            let at = body.get(p).unwrap_or(header);
            return Err(at.error(format!("expected {p} array rows, found {}", body.len())));
        }
        let mut cells = Vec::with_capacity(p * q);
        for stmt in body {
            if stmt.tokens.len() != q {
                return Err(
                    stmt.error(format!("expected {q} entries, found {}", stmt.tokens.len()))
                );
            }
            for tok in &stmt.tokens {
                cells.push(if tok.text == "." {
                    None
                } else {
                    Some(tok.count()? - 1)
                });
            }
        }
        IntegralArray::new(p, q, cells)
    }
}

impl fmt::Display for IntegralArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "array {} {}", self.p, self.q)?;
        for i in 0..self.p {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|c| c.map_or_else(|| ".".to_string(), |a| (a + 1).to_string()))
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}
