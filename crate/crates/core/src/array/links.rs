use serde::Serialize;

use super::IntegralArray;
use crate::algebra::RatVector;
use crate::system::MultinomialSystem;

/// Columns `from < to` share row `row`, so `B_to - B_from = H_a - H_b` where
/// `a` sits in column `from` and `b` in column `to`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Link {
    pub row: usize,
    pub from: usize,
    pub to: usize,
    pub offset: RatVector,
}

/// A link whose offset disagrees with the offset implied by other paths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkConflict {
    pub row: usize,
    pub from: usize,
    pub to: usize,
    pub stated: RatVector,
    pub implied: RatVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkGraph {
    pub links: Vec<Link>,
    /// Connected column sets, each ascending, ordered by smallest column.
    pub components: Vec<Vec<usize>>,
    /// Connected column pairs `(j, k)`, `j < k`, with `L_jk = 0`.
    pub zero_offsets: Vec<(usize, usize)>,
    pub conflicts: Vec<LinkConflict>,
    component_of: Vec<usize>,
    /// `B_k - B_root` for the root (smallest column) of `k`'s component.
    potential: Vec<RatVector>,
}

impl LinkGraph {
    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    pub fn is_consistent(&self) -> bool {
        self.conflicts.is_empty() && self.zero_offsets.is_empty()
    }

    /// `L_jk = B_k - B_j` composed along any path, or `None` when the columns
    /// are in different components.
    pub fn offset(&self, j: usize, k: usize) -> Option<RatVector> {
        (self.component_of[j] == self.component_of[k])
            .then(|| &self.potential[k] - &self.potential[j])
    }
}

pub fn build_links(a: &IntegralArray, s: &MultinomialSystem) -> LinkGraph {
    let q = a.q();
    let mut links = Vec::new();
    for i in 0..a.p() {
        for j in 0..q {
            let Some(alpha) = a.get(i, j) else { continue };
            for k in j + 1..q {
                let Some(beta) = a.get(i, k) else { continue };
                links.push(Link {
                    row: i,
                    from: j,
                    to: k,
                    offset: s.expo(alpha) - s.expo(beta),
                });
            }
        }
    }

    // Spanning forest by breadth-first search from the smallest column.
    let n = s.n();
    let mut potential: Vec<Option<RatVector>> = vec![None; q];
    let mut component_of = vec![usize::MAX; q];
    let mut components = Vec::new();
    for root in 0..q {
        if potential[root].is_some() {
            continue;
        }
        let id = components.len();
        potential[root] = Some(RatVector::zeros(n));
        component_of[root] = id;
        let mut members = vec![root];
        let mut queue = vec![root];
        while let Some(col) = queue.pop() {
            let base = potential[col].clone().expect("visited");
            for l in &links {
                let (next, value) = if l.from == col {
                    (l.to, &base + &l.offset)
                } else if l.to == col {
                    (l.from, &base - &l.offset)
                } else {
                    continue;
                };
                if potential[next].is_none() {
                    potential[next] = Some(value);
                    component_of[next] = id;
                    members.push(next);
                    queue.push(next);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    let potential: Vec<RatVector> = potential
        .into_iter()
        .map(|p| p.expect("all visited"))
        .collect();

    let conflicts = links
        .iter()
        .filter_map(|l| {
            let implied = &potential[l.to] - &potential[l.from];
            (implied != l.offset).then(|| LinkConflict {
                row: l.row,
                from: l.from,
                to: l.to,
                stated: l.offset.clone(),
                implied,
            })
        })
        .collect();

    let mut zero_offsets = Vec::new();
    for j in 0..q {
        for k in j + 1..q {
            if component_of[j] == component_of[k] && potential[j] == potential[k] {
                zero_offsets.push((j, k));
            }
        }
    }

    LinkGraph {
        links,
        components,
        zero_offsets,
        conflicts,
        component_of,
        potential,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::Term;

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
    fn oscillator_link() {
        let a = IntegralArray::from_numbers(&[&[2, 1]]).unwrap();
        let g = build_links(&a, &oscillator());
        assert!(g.is_connected());
        assert!(g.is_consistent());
        assert_eq!(g.offset(0, 1), Some(v(&[2, -2])));
        assert_eq!(g.offset(1, 0), Some(v(&[-2, 2])));
    }

    #[test]
    fn composed_offset_through_middle_column() {
        // ((u, v, .), (., w, v)) with u = term 1, v = term 2, w = term 3
        let s = MultinomialSystem::new(
            2,
            vec![
                Term::new(v(&[1, 0]), v(&[1, 0])),
                Term::new(v(&[0, 1]), v(&[0, 1])),
                Term::new(v(&[1, 1]), v(&[3, 5])),
            ],
        )
        .unwrap();
        let a = IntegralArray::from_numbers(&[&[1, 2, 0], &[0, 3, 2]]).unwrap();
        let g = build_links(&a, &s);
        // H_u + H_w - 2 H_v
        assert_eq!(g.offset(0, 2), Some(v(&[4, 3])));
        assert!(g.is_connected());
    }

    #[test]
    fn single_column_is_trivially_connected() {
        let a = IntegralArray::from_numbers(&[&[1]]).unwrap();
        let g = build_links(&a, &oscillator());
        assert!(g.links.is_empty());
        assert!(g.is_connected());
    }

    #[test]
    fn detects_conflicting_paths() {
        let s = MultinomialSystem::new(
            2,
            (1..=4)
                .map(|i| Term::new(v(&[1, i]), v(&[i, i * i])))
                .collect(),
        )
        .unwrap();
        let a = IntegralArray::from_numbers(&[&[1, 2], &[3, 4]]).unwrap();
        let g = build_links(&a, &s);
        assert_eq!(g.conflicts.len(), 1);
        assert!(!g.is_consistent());
    }

    #[test]
    fn separate_components() {
        let a = IntegralArray::from_numbers(&[&[1, 2, 0, 0], &[0, 0, 2, 1]]).unwrap();
        let g = build_links(&a, &oscillator());
        assert_eq!(g.components, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(g.offset(0, 2), None);
    }
}
