//! Depth-first enumeration of generalized qualitative probabilities.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::partial::PartialRelation;
use crate::error::{input, Result};
use crate::gqp::{is_gqp, EventRelation};

/// Largest state count for which complete enumeration is offered.
pub const COMPLETE_MAX_STATES: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    /// False when the node budget ran out.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub relations: Vec<EventRelation>,
    pub stats: SearchStats,
    pub seed: Option<u64>,
}

pub(crate) struct Dfs<'a> {
    budget: u64,
    nodes: u64,
    exhausted: bool,
    visit: &'a mut dyn FnMut(EventRelation),
}

impl<'a> Dfs<'a> {
    pub(crate) fn new(budget: u64, visit: &'a mut dyn FnMut(EventRelation)) -> Self {
        Self {
            budget,
            nodes: 0,
            exhausted: false,
            visit,
        }
    }

    pub(crate) fn stats(&self) -> SearchStats {
        SearchStats {
            nodes: self.nodes,
            complete: !self.exhausted,
        }
    }

    pub(crate) fn run(&mut self, mut pr: PartialRelation) {
        if self.exhausted {
            return;
        }
        if self.nodes >= self.budget {
            self.exhausted = true;
            return;
        }
        self.nodes += 1;
        if pr.propagate().is_err() || pr.node_violation().is_some() {
            return;
        }
        match pr.first_unknown() {
            None => {
                let rel = pr.to_relation();
                assert!(is_gqp(&rel), "search emitted a relation failing the axioms");
                (self.visit)(rel);
            }
            Some((a, b)) => {
                for value in [true, false] {
                    let mut child = pr.clone();
                    if child.decide(a, b, value).is_ok() {
                        self.run(child);
                    }
                    if self.exhausted {
                        return;
                    }
                }
            }
        }
    }
}

fn check_states(n: usize) -> Result<()> {
    if n > crate::gqp::MAX_RELATION_STATES {
        return input(format!(
            "enumeration is limited to {} states",
            crate::gqp::MAX_RELATION_STATES
        ));
    }
    Ok(())
}

/// Streams every g.q.p. on `n` states in canonical order, visiting at most
/// `budget` search nodes.
pub fn enumerate_gqps_with(
    n: usize,
    budget: u64,
    mut visit: impl FnMut(EventRelation),
) -> Result<SearchStats> {
    check_states(n)?;
    let mut dfs = Dfs::new(budget, &mut visit);
    dfs.run(PartialRelation::new(n)?);
    Ok(dfs.stats())
}

pub fn enumerate_gqps(n: usize, budget: u64) -> Result<Enumeration> {
    let mut relations = Vec::new();
    let stats = enumerate_gqps_with(n, budget, |r| relations.push(r))?;
    Ok(Enumeration {
        relations,
        stats,
        seed: None,
    })
}

fn random_leaf(pr: PartialRelation, rng: &mut ChaCha8Rng, nodes: &mut u64, budget: u64) -> Option<EventRelation> {
    let mut stack = vec![pr];
    while let Some(mut pr) = stack.pop() {
        if *nodes >= budget {
            return None;
        }
        *nodes += 1;
        if pr.propagate().is_err() || pr.node_violation().is_some() {
            continue;
        }
        let Some((a, b)) = pr.first_unknown() else {
            return Some(pr.to_relation());
        };
        let first = rng.random_bool(0.5);
        // pushed second, explored first
        for value in [!first, first] {
            let mut child = pr.clone();
            if child.decide(a, b, value).is_ok() {
                stack.push(child);
            }
        }
    }
    None
}

/// Up to `count` distinct g.q.p. found by randomized descents.
pub fn sample_gqps(n: usize, count: usize, seed: u64, budget: u64) -> Result<Enumeration> {
    check_states(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = 0;
    let mut seen = HashSet::new();
    let mut relations = Vec::new();
    while relations.len() < count && nodes < budget {
        let Some(rel) = random_leaf(PartialRelation::new(n)?, &mut rng, &mut nodes, budget) else {
            break;
        };
        assert!(is_gqp(&rel), "search emitted a relation failing the axioms");
        if seen.insert(rel.clone()) {
            relations.push(rel);
        }
    }
    Ok(Enumeration {
        stats: SearchStats {
            nodes,
            complete: relations.len() == count,
        },
        relations,
        seed: Some(seed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_counts() {
        let e0 = enumerate_gqps(0, u64::MAX).unwrap();
        assert_eq!(e0.relations.len(), 1);
        assert!(e0.stats.complete);
        let e1 = enumerate_gqps(1, u64::MAX).unwrap();
        assert_eq!(e1.relations.len(), 2);
    }

    #[test]
    fn budget_marks_incomplete() {
        let e = enumerate_gqps(2, 3).unwrap();
        assert!(!e.stats.complete);
        assert_eq!(e.stats.nodes, 3);
        let e = enumerate_gqps(1, 0).unwrap();
        assert!(!e.stats.complete && e.relations.is_empty());
    }

    #[test]
    fn sampling_is_seeded() {
        let a = sample_gqps(2, 5, 7, 10_000).unwrap();
        let b = sample_gqps(2, 5, 7, 10_000).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.relations.len(), 5);
        assert!(a.relations.iter().all(is_gqp));
    }
}
