//! Total extensions of a g.q.p. and the intersection conjecture.

use super::enumerate::{Dfs, SearchStats};
use super::partial::PartialRelation;
use super::{ConjectureStatus, ConjectureVerdict, Evidence};
use crate::bits::BitMatrix;
use crate::check::Witness;
use crate::error::{Error, Result};
use crate::format::{emit_relation, parse_relation};
use crate::gqp::{check_gqp, EventRelation};

pub const INTERSECTION_CONJECTURE: &str = "intersection-of-total-extensions";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extensions {
    pub relations: Vec<EventRelation>,
    pub stats: SearchStats,
}

fn require_gqp(rel: &EventRelation) -> Result<()> {
    let r = check_gqp(rel);
    if r.passed() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "input is not a generalized qualitative probability: {}",
            r.note
        )))
    }
}

/// Every total g.q.p. extending `rel`, in canonical order.
///
/// An extension keeps every pair of `rel` and every strict comparison of
/// `rel` strict, so only incomparable pairs get decided.
pub fn total_extensions(rel: &EventRelation, budget: u64) -> Result<Extensions> {
    require_gqp(rel)?;
    let mut start = PartialRelation::from_relation(rel)?;
    for a in rel.events() {
        for b in rel.events() {
            if rel.lt(a, b) {
                start
                    .assert(b, a, false)
                    .expect("a strict pair is never asserted both ways");
            }
        }
    }
    let start = start.with_totality();
    let mut relations = Vec::new();
    let mut push = |r: EventRelation| relations.push(r);
    let mut dfs = Dfs::new(budget, &mut push);
    dfs.run(start);
    let stats = dfs.stats();
    debug_assert!(relations.iter().all(|r| r.is_total() && extends(r, rel)));
    Ok(Extensions { relations, stats })
}

/// `wide` contains `narrow` and keeps its strict pairs strict.
pub fn extends(wide: &EventRelation, narrow: &EventRelation) -> bool {
    narrow.is_contained_in(wide)
        && narrow
            .events()
            .all(|a| narrow.events().all(|b| !narrow.lt(a, b) || wide.lt(a, b)))
}

/// Conjunction of the extensions; the full relation when there are none.
pub fn intersect_all(n_states: usize, relations: &[EventRelation]) -> EventRelation {
    let full = EventRelation::from_matrix(n_states, BitMatrix::full(1 << n_states))
        .expect("dimension matches");
    relations
        .iter()
        .fold(full, |acc, r| acc.intersection(r).expect("same state space"))
}

fn first_difference(x: &EventRelation, y: &EventRelation) -> Option<(crate::space::Event, crate::space::Event)> {
    x.events()
        .flat_map(|a| x.events().map(move |b| (a, b)))
        .find(|&(a, b)| x.leq(a, b) != y.leq(a, b))
}

/// Compares `rel` with the intersection of its total extensions.
pub fn check_intersection_conjecture(rel: &EventRelation, budget: u64) -> Result<ConjectureVerdict> {
    require_gqp(rel)?;
    let ext = total_extensions(rel, budget)?;
    let mut verdict = ConjectureVerdict::new(INTERSECTION_CONJECTURE, ext.stats.nodes);
    verdict.stats.push(("total_extensions".into(), ext.relations.len() as u64));
    if !ext.stats.complete {
        verdict.status = ConjectureStatus::Inconclusive;
        return Ok(verdict);
    }
    let meet = intersect_all(rel.n_states(), &ext.relations);
    match first_difference(rel, &meet) {
        None => verdict.status = ConjectureStatus::HoldsOnInstance,
        Some((a, b)) => {
            verdict.status = ConjectureStatus::CounterexampleFound;
            verdict.evidence = Some(Evidence {
                description: format!(
                    "A <= B holds in every total extension ({} found) but not in the relation",
                    ext.relations.len()
                ),
                document: emit_relation(rel),
                witness: Some(Witness::new().event("A", a).event("B", b)),
            });
        }
    }
    Ok(verdict)
}

/// Re-runs the comparison from serialized evidence.
pub fn reverify_intersection_evidence(evidence: &Evidence, budget: u64) -> Result<bool> {
    let rel = parse_relation(&evidence.document)?;
    let w = evidence
        .witness
        .as_ref()
        .ok_or_else(|| Error::Input("evidence lacks a witness".into()))?;
    let (a, b) = match (w.get_event("A"), w.get_event("B")) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Input("witness lacks events A and B".into())),
    };
    if !check_gqp(&rel).passed() {
        return Ok(false);
    }
    let ext = total_extensions(&rel, budget)?;
    if !ext.stats.complete {
        return Err(Error::Budget {
            what: "re-verification nodes",
            required: budget as u128 + 1,
            cap: budget as u128,
        });
    }
    let meet = intersect_all(rel.n_states(), &ext.relations);
    Ok(meet.leq(a, b) && !rel.leq(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Event;

    fn uniform2() -> EventRelation {
        EventRelation::from_fn(2, |a, b| a.len() <= b.len()).unwrap()
    }

    #[test]
    fn total_input_extends_to_itself() {
        let rel = uniform2();
        let ext = total_extensions(&rel, 1000).unwrap();
        assert_eq!(ext.relations, vec![rel.clone()]);
        let v = check_intersection_conjecture(&rel, 1000).unwrap();
        assert_eq!(v.status, ConjectureStatus::HoldsOnInstance);
    }

    #[test]
    fn incomparable_singletons() {
        // ∅ < {s0}, {s1} < S with the singletons incomparable
        let rel = EventRelation::from_fn(2, |a, b| a == b || a.len() < b.len()).unwrap();
        assert!(check_gqp(&rel).passed());
        let ext = total_extensions(&rel, 10_000).unwrap();
        assert!(ext.stats.complete);
        let (s0, s1) = (Event::singleton(0), Event::singleton(1));
        let expected: Vec<EventRelation> = [(true, false), (false, true), (true, true)]
            .into_iter()
            .map(|(x, y)| {
                EventRelation::from_fn(2, |a, b| {
                    rel.leq(a, b) || (a, b) == (s0, s1) && x || (a, b) == (s1, s0) && y
                })
                .unwrap()
            })
            .filter(|r| check_gqp(r).passed())
            .collect();
        let mut got = ext.relations.clone();
        got.sort_by_key(|r| format!("{:?}", r.matrix()));
        let mut want = expected;
        want.sort_by_key(|r| format!("{:?}", r.matrix()));
        assert_eq!(got, want);
        let v = check_intersection_conjecture(&rel, 10_000).unwrap();
        assert_eq!(v.status, ConjectureStatus::HoldsOnInstance);
    }

    #[test]
    fn zero_budget_is_inconclusive() {
        let rel = EventRelation::from_fn(2, |a, b| a == b || a.len() < b.len()).unwrap();
        let v = check_intersection_conjecture(&rel, 0).unwrap();
        assert_eq!(v.status, ConjectureStatus::Inconclusive);
    }
}
