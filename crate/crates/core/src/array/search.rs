//! Exhaustive search for valid integral arrays.
//!
//! Every array is equivalent under row and column permutations to its
//! canonical form, the row-major minimum of its orbit. That minimum has its
//! rows strictly increasing and its columns non-decreasing (both read
//! lexicographically, empty below any term), so the walk only builds grids
//! of that shape and then deduplicates by canonical form.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::links::build_links;
use super::synth::{synthesize, Synthesis};
use super::validate::{classify_normal, Normality};
use super::{Cell, IntegralArray};
use crate::error::{Error, Result};
use crate::system::MultinomialSystem;

/// Largest accepted `max_p` and `max_q`.
pub const SEARCH_LIMIT: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchHit {
    /// Canonical representative.
    pub array: IntegralArray,
    pub synthesis: Synthesis,
}

/// Candidate rows: at least two filled cells, no repeated term.
fn row_alphabet(q: usize, r: usize) -> Vec<Vec<Cell>> {
    let mut out = Vec::new();
    let mut row: Vec<Cell> = vec![None; q];
    fn fill(k: usize, r: usize, row: &mut Vec<Cell>, out: &mut Vec<Vec<Cell>>) {
        if k == row.len() {
            let filled: Vec<usize> = row.iter().flatten().copied().collect();
            if filled.len() >= 2 {
                out.push(row.clone());
            }
            return;
        }
        row[k] = None;
        fill(k + 1, r, row, out);
        for alpha in 0..r {
            if !row[..k].contains(&Some(alpha)) {
                row[k] = Some(alpha);
                fill(k + 1, r, row, out);
            }
        }
        row[k] = None;
    }
    fill(0, r, &mut row, &mut out);
    out.sort();
    out
}

struct Walker<'a> {
    s: &'a MultinomialSystem,
    q: usize,
    max_p: usize,
    alphabet: &'a [Vec<Cell>],
}

impl Walker<'_> {
    /// `tied[k]`: columns `k` and `k + 1` agree on every row so far.
    fn walk(
        &self,
        rows: &mut Vec<Vec<Cell>>,
        start: usize,
        tied: &[bool],
        hits: &mut Vec<(IntegralArray, Synthesis)>,
    ) {
        let array = IntegralArray::from_rows(rows).expect("rectangular");
        let links = build_links(&array, self.s);
        if !links.is_consistent() {
            return;
        }
        self.consider(&array, links.is_connected(), hits);
        if rows.len() == self.max_p {
            return;
        }
        for idx in start..self.alphabet.len() {
            let row = &self.alphabet[idx];
            if !self.fits(rows, row, tied) {
                continue;
            }
            let next_tied: Vec<bool> = tied
                .iter()
                .enumerate()
                .map(|(k, &t)| t && row[k] == row[k + 1])
                .collect();
            rows.push(row.clone());
            self.walk(rows, idx + 1, &next_tied, hits);
            rows.pop();
        }
    }

    fn fits(&self, rows: &[Vec<Cell>], row: &[Cell], tied: &[bool]) -> bool {
        if tied
            .iter()
            .enumerate()
            .any(|(k, &t)| t && row[k] > row[k + 1])
        {
            return false;
        }
        (0..self.q).all(|k| row[k].is_none() || rows.iter().all(|r| r[k] != row[k]))
    }

    fn consider(
        &self,
        array: &IntegralArray,
        connected: bool,
        hits: &mut Vec<(IntegralArray, Synthesis)>,
    ) {
        if !connected || (0..self.q).any(|k| array.column(k).iter().all(Option::is_none)) {
            return;
        }
        if classify_normal(array) != Normality::Normal {
            return;
        }
        if let Ok(synthesis) = synthesize(array, self.s) {
            hits.push((array.clone(), synthesis));
        }
    }
}

/// All valid normal connected arrays with `2 <= q <= max_q` and
/// `p <= max_p`, one per permutation class, each with its verified integral.
/// Sorted by `(q, p, grid)`.
pub fn search(s: &MultinomialSystem, max_p: usize, max_q: usize) -> Result<Vec<SearchHit>> {
    if max_p == 0 || max_q == 0 {
        return Err(Error::Invalid("search bounds must be positive".into()));
    }
    if max_p > SEARCH_LIMIT || max_q > SEARCH_LIMIT {
        return Err(Error::Limit(format!(
            "search bounds {max_p}x{max_q} exceed {SEARCH_LIMIT}x{SEARCH_LIMIT}"
        )));
    }
    let mut found: BTreeMap<(usize, usize, IntegralArray), Synthesis> = BTreeMap::new();
    for q in 2..=max_q {
        let alphabet = row_alphabet(q, s.r());
        let walker = Walker {
            s,
            q,
            max_p,
            alphabet: &alphabet,
        };
        let batches: Vec<Vec<(IntegralArray, Synthesis)>> = (0..alphabet.len())
            .into_par_iter()
            .map(|idx| {
                let mut hits = Vec::new();
                let first = &alphabet[idx];
                if first.windows(2).all(|w| w[0] <= w[1]) {
                    let tied: Vec<bool> = first.windows(2).map(|w| w[0] == w[1]).collect();
                    walker.walk(&mut vec![first.clone()], idx + 1, &tied, &mut hits);
                }
                hits
            })
            .collect();
        for (array, _) in batches.into_iter().flatten() {
            let canon = array.canonical();
            let key = (canon.q(), canon.p(), canon.clone());
            if let Entry::Vacant(slot) = found.entry(key) {
                let synthesis = synthesize(&canon, s).map_err(|e| {
                    Error::Contradiction(format!("canonical form lost validity: {e}"))
                })?;
                slot.insert(synthesis);
            }
        }
    }
    Ok(found
        .into_iter()
        .map(|((_, _, array), synthesis)| SearchHit { array, synthesis })
        .collect())
}
