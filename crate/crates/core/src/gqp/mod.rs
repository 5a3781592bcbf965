//! Binary relations on events and generalized qualitative probabilities.

pub mod properties;

use serde::{Deserialize, Serialize};

use crate::bits::BitMatrix;
use crate::check::{CheckResult, Witness};
use crate::error::{input, Result};
use crate::space::{Event, StateSpace};

pub use properties::{verify_gqp_property, GqpProperty};

/// Largest state space for which dense event relations are built.
pub const MAX_RELATION_STATES: usize = 6;

/// `leq[A][B]` means `A ≤ B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EventRelation {
    n_states: usize,
    leq: BitMatrix,
}

impl EventRelation {
    pub fn from_matrix(n_states: usize, leq: BitMatrix) -> Result<Self> {
        if n_states > MAX_RELATION_STATES {
            return input(format!(
                "event relations are limited to {MAX_RELATION_STATES} states, got {n_states}"
            ));
        }
        if leq.dim() != 1 << n_states {
            return input(format!(
                "relation matrix has dimension {}, expected {}",
                leq.dim(),
                1usize << n_states
            ));
        }
        Ok(Self { n_states, leq })
    }

    pub fn from_fn(n_states: usize, mut f: impl FnMut(Event, Event) -> bool) -> Result<Self> {
        let dim = 1usize << n_states.min(MAX_RELATION_STATES + 1);
        Self::from_matrix(
            n_states,
            BitMatrix::from_fn(dim, |a, b| f(Event(a as u32), Event(b as u32))),
        )
    }

    /// Rows of `0`/`1` characters, one per event in integer order.
    pub fn from_rows(n_states: usize, rows: &[&str]) -> Result<Self> {
        let dim = 1usize << n_states;
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return input(format!("expected {dim} rows of {dim} characters"));
        }
        let mut m = BitMatrix::new(dim);
        for (i, r) in rows.iter().enumerate() {
            for (j, ch) in r.chars().enumerate() {
                match ch {
                    '1' => m.set(i, j, true),
                    '0' => {}
                    other => return input(format!("invalid relation character {other:?}")),
                }
            }
        }
        Self::from_matrix(n_states, m)
    }

    #[inline]
    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn space(&self) -> StateSpace {
        StateSpace::new(self.n_states).expect("bounded by MAX_RELATION_STATES")
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.leq
    }

    pub fn n_events(&self) -> usize {
        1 << self.n_states
    }

    pub fn events(&self) -> impl Iterator<Item = Event> + Clone {
        (0..self.n_events() as u32).map(Event)
    }

    pub fn full_event(&self) -> Event {
        Event::full(self.n_states)
    }

    #[inline]
    pub fn leq(&self, a: Event, b: Event) -> bool {
        self.leq.get(a.index(), b.index())
    }

    #[inline]
    pub fn lt(&self, a: Event, b: Event) -> bool {
        self.leq(a, b) && !self.leq(b, a)
    }

    #[inline]
    pub fn equiv(&self, a: Event, b: Event) -> bool {
        self.leq(a, b) && self.leq(b, a)
    }

    /// Null events of a relation are those with `A ≤ ∅`.
    #[inline]
    pub fn is_null(&self, a: Event) -> bool {
        self.leq(a, Event::EMPTY)
    }

    /// `A ≪ B` without argument validation.
    #[inline]
    pub fn negligible(&self, a: Event, b: Event) -> bool {
        !self.is_null(b) && self.leq(a.union(b), b.difference(a))
    }

    pub fn is_total(&self) -> bool {
        self.events()
            .all(|a| self.events().all(|b| self.leq(a, b) || self.leq(b, a)))
    }

    /// True iff every pair related here is related in `other`.
    pub fn is_contained_in(&self, other: &EventRelation) -> bool {
        self.n_states == other.n_states && self.leq.is_subset_of(&other.leq)
    }

    pub fn intersection(&self, other: &EventRelation) -> Result<EventRelation> {
        if self.n_states != other.n_states {
            return input("intersection of relations over different state spaces");
        }
        Ok(Self {
            n_states: self.n_states,
            leq: self.leq.and(&other.leq),
        })
    }

    pub(crate) fn check_event(&self, e: Event) -> Result<()> {
        if e.index() >= self.n_events() {
            return input(format!("event {e:?} outside a {}-state space", self.n_states));
        }
        Ok(())
    }
}

/// Which condition of the definition a relation violates.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GqpAxiom {
    Reflexivity,
    Transitivity,
    /// `A ≤ B ⇒ A ∪ D ≤ B ∪ D` for `D` disjoint from both.
    Union,
    /// `A ∪ D ≤ B ∪ D`, `D ∪ B ≰ D ⇒ A ≤ B` for `D` disjoint from both.
    Cancellation,
    /// disjoint `A ≤ B`, `A ∪ B ≤ A ⇒ B ≤ ∅`.
    Absorption,
    /// `∅ ≤ A`.
    EmptyBottom,
}

impl GqpAxiom {
    pub fn name(self) -> &'static str {
        match self {
            GqpAxiom::Reflexivity => "reflexivity",
            GqpAxiom::Transitivity => "transitivity",
            GqpAxiom::Union => "axiom-1",
            GqpAxiom::Cancellation => "axiom-2",
            GqpAxiom::Absorption => "axiom-3",
            GqpAxiom::EmptyBottom => "axiom-4",
        }
    }
}

/// A single violation found by [`gqp_violations`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GqpViolation {
    pub axiom: GqpAxiom,
    pub witness: Witness,
}

/// All violations of the generalized qualitative probability axioms, in
/// checking order; with `first_only` the scan stops at the first.
pub fn gqp_violations(rel: &EventRelation, first_only: bool) -> Vec<GqpViolation> {
    let mut out = Vec::new();
    macro_rules! report {
        ($axiom:expr, $w:expr) => {{
            out.push(GqpViolation {
                axiom: $axiom,
                witness: $w,
            });
            if first_only {
                return out;
            }
        }};
    }
    for a in rel.events() {
        if !rel.leq(a, a) {
            report!(GqpAxiom::Reflexivity, Witness::new().event("A", a));
        }
    }
    for a in rel.events() {
        if !rel.leq(Event::EMPTY, a) {
            report!(GqpAxiom::EmptyBottom, Witness::new().event("A", a));
        }
    }
    for a in rel.events() {
        for b in rel.events().filter(|&b| rel.leq(a, b)) {
            for c in rel.events().filter(|&c| rel.leq(b, c)) {
                if !rel.leq(a, c) {
                    report!(
                        GqpAxiom::Transitivity,
                        Witness::new().event("A", a).event("B", b).event("C", c)
                    );
                }
            }
        }
    }
    for a in rel.events() {
        for b in rel.events() {
            for d in a.union(b).complement(rel.n_states()).subsets() {
                if rel.leq(a, b) && !rel.leq(a.union(d), b.union(d)) {
                    report!(
                        GqpAxiom::Union,
                        Witness::new().event("A", a).event("B", b).event("D", d)
                    );
                }
            }
        }
    }
    for a in rel.events() {
        for b in rel.events() {
            for d in a.union(b).complement(rel.n_states()).subsets() {
                if rel.leq(a.union(d), b.union(d)) && !rel.leq(d.union(b), d) && !rel.leq(a, b) {
                    report!(
                        GqpAxiom::Cancellation,
                        Witness::new().event("A", a).event("B", b).event("D", d)
                    );
                }
            }
        }
    }
    for a in rel.events() {
        for b in a.complement(rel.n_states()).subsets() {
            if rel.leq(a, b) && rel.leq(a.union(b), a) && !rel.is_null(b) {
                report!(GqpAxiom::Absorption, Witness::new().event("A", a).event("B", b));
            }
        }
    }
    out
}

/// Pass iff `rel` is a generalized qualitative probability.
pub fn check_gqp(rel: &EventRelation) -> CheckResult {
    match gqp_violations(rel, true).into_iter().next() {
        None => CheckResult::pass("gqp"),
        Some(v) => CheckResult::fail("gqp", v.witness).with_note(v.axiom.name()),
    }
}

pub fn is_gqp(rel: &EventRelation) -> bool {
    gqp_violations(rel, true).is_empty()
}

/// `A ≪ B`: `B` is not null and `A ∪ B ≤ B − A`.
pub fn negligible_wrt(rel: &EventRelation, a: Event, b: Event) -> Result<bool> {
    rel.check_event(a)?;
    rel.check_event(b)?;
    Ok(rel.negligible(a, b))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFlags {
    pub total: bool,
    pub standard: bool,
    pub purely_nonstandard: bool,
}

/// Family membership flags; `None` when `rel` is not a verified g.q.p.
pub fn classify(rel: &EventRelation) -> Option<FamilyFlags> {
    if !is_gqp(rel) {
        return None;
    }
    Some(FamilyFlags {
        total: rel.is_total(),
        standard: is_standard(rel),
        purely_nonstandard: is_purely_nonstandard(rel),
    })
}

/// `A ∩ B = ∅` and `A ≠ ∅` imply `B < A ∪ B`.
pub fn is_standard(rel: &EventRelation) -> bool {
    standard_counterexample(rel).is_none()
}

pub fn standard_counterexample(rel: &EventRelation) -> Option<(Event, Event)> {
    for a in rel.events().filter(|a| !a.is_empty()) {
        for b in a.complement(rel.n_states()).subsets() {
            if !rel.lt(b, a.union(b)) {
                return Some((a, b));
            }
        }
    }
    None
}

/// The standardness condition with `A` required to be non-null instead of
/// merely non-empty.
pub fn is_standard_non_null(rel: &EventRelation) -> bool {
    rel.events().filter(|a| !rel.is_null(*a)).all(|a| {
        a.complement(rel.n_states())
            .subsets()
            .all(|b| rel.lt(b, a.union(b)))
    })
}

/// `A < B` implies `B − A ∼ A ∪ B`.
pub fn is_purely_nonstandard(rel: &EventRelation) -> bool {
    rel.events().all(|a| {
        rel.events()
            .all(|b| !rel.lt(a, b) || rel.equiv(b.difference(a), a.union(b)))
    })
}

/// `A ≤ B` implies `B̄ ≤ Ā`.
pub fn is_complementation_closed(rel: &EventRelation) -> bool {
    complementation_counterexample(rel).is_none()
}

pub fn complementation_counterexample(rel: &EventRelation) -> Option<(Event, Event)> {
    let n = rel.n_states();
    for a in rel.events() {
        for b in rel.events() {
            if rel.leq(a, b) && !rel.leq(b.complement(n), a.complement(n)) {
                return Some((a, b));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    /// ∅ < {s0} ∼ {s1} < S
    pub(crate) fn uniform2() -> EventRelation {
        EventRelation::from_fn(2, |a, b| a.len() <= b.len()).unwrap()
    }

    #[test]
    fn uniform_relation_is_gqp() {
        assert!(check_gqp(&uniform2()).passed());
    }

    #[test]
    fn missing_empty_bottom_fails_axiom4() {
        let mut m = uniform2().matrix().clone();
        m.set(0, 0b01, false);
        let rel = EventRelation::from_matrix(2, m).unwrap();
        let r = check_gqp(&rel);
        assert!(r.failed());
        assert_eq!(r.note, "axiom-4");
        assert_eq!(r.witness.unwrap().get_event("A"), Some(Event(0b01)));
    }

    #[test]
    fn built_to_violate_absorption() {
        // {s0} ≤ {s1}, S ≤ {s0}, and {s1} not null
        let rel = EventRelation::from_fn(2, |a, b| a.is_empty() || !b.is_empty()).unwrap();
        assert!(rel.leq(Event(0b01), Event(0b10)));
        assert!(rel.leq(Event(0b11), Event(0b01)));
        assert!(!rel.is_null(Event(0b10)));
        let r = check_gqp(&rel);
        assert!(r.failed());
        assert_eq!(r.note, "axiom-3");
    }

    #[test]
    fn negligibility_examples() {
        let rel = uniform2();
        assert!(!negligible_wrt(&rel, Event(0b01), Event(0b10)).unwrap());
        assert!(!negligible_wrt(&rel, Event(0b01), Event::EMPTY).unwrap());
        assert!(negligible_wrt(&rel, Event(0b100), Event(0b1)).is_err());
    }

    #[test]
    fn uniform_classification() {
        let flags = classify(&uniform2()).unwrap();
        assert!(flags.total && flags.standard && !flags.purely_nonstandard);
    }

    #[test]
    fn verbose_mode_collects_more() {
        let rel = EventRelation::from_fn(2, |a, b| a == b).unwrap();
        assert_eq!(gqp_violations(&rel, true).len(), 1);
        assert!(gqp_violations(&rel, false).len() > 1);
        assert!(classify(&rel).is_none());
    }

    #[test]
    fn shape_validation() {
        assert!(EventRelation::from_rows(1, &["11", "1"]).is_err());
        assert!(EventRelation::from_rows(1, &["11", "1x"]).is_err());
        assert!(EventRelation::from_matrix(7, BitMatrix::new(128)).is_err());
    }
}
