//! Exhaustive checks of derived properties of generalized qualitative
//! probabilities.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{is_gqp, EventRelation};
use crate::check::{CheckResult, Witness};
use crate::error::{Error, Result};
use crate::space::Event;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GqpProperty {
    /// Null events (`A ≤ ∅`) are exactly those absorbed by every event:
    /// `A ≤ ∅ ⇔ ∀B, A ∪ B ≤ B`.
    NullAbsorbed,
    /// The printed form `A null ⇔ ∅ ≤ A`; fails whenever a non-null event exists.
    NullAsPrinted,
    /// `A ⊆ B ⇒ A ≤ B`.
    SubsetMonotone,
    /// `A ∪ D < B ∪ D ⇒ A < B` for `D` disjoint from `A`, `B`.
    StrictCancellation,
    /// `A < B`, `D < B ∪ D ⇒ A ∪ D < B ∪ D` for `D` disjoint from `A`, `B`.
    StrictUnion,
    /// `A ∩ B = ∅`, `A' ≤ A`, `B' ≤ B ⇒ A' ∪ B' ≤ A ∪ B`.
    DisjointSum,
    /// `A ∩ B = ∅`, `∅ < A ∪ B ⇒ A < A ∪ B` or `B < A ∪ B`.
    SumExceedsPart,
    /// The thirteen stated properties of `≪`, numbered in order.
    Negligibility(u8),
    /// `A ≪ C ⇒ ∀B, A ≪ B` or `B ≪ C`.
    Modularity,
    /// `A ⊆ B ⇒ A ≤ B`.
    Corollary5,
    /// `A ≤ ∅ ⇔ A ∼ ∅`.
    Corollary6,
    /// Disjoint `A ≤ B`, `A ∪ B ≤ A` ⇒ both null.
    Lemma13,
}

pub const NEGLIGIBILITY_BULLETS: u8 = 13;

impl GqpProperty {
    pub fn all() -> Vec<GqpProperty> {
        let mut out = vec![
            GqpProperty::NullAbsorbed,
            GqpProperty::SubsetMonotone,
            GqpProperty::StrictCancellation,
            GqpProperty::StrictUnion,
            GqpProperty::DisjointSum,
            GqpProperty::SumExceedsPart,
        ];
        out.extend((1..=NEGLIGIBILITY_BULLETS).map(GqpProperty::Negligibility));
        out.extend([
            GqpProperty::Modularity,
            GqpProperty::Corollary5,
            GqpProperty::Corollary6,
            GqpProperty::Lemma13,
        ]);
        out
    }

    pub fn name(self) -> String {
        match self {
            GqpProperty::NullAbsorbed => "lemma-14.null".into(),
            GqpProperty::NullAsPrinted => "lemma-14.null-as-printed".into(),
            GqpProperty::SubsetMonotone => "lemma-14.subset".into(),
            GqpProperty::StrictCancellation => "lemma-14.strict-cancellation".into(),
            GqpProperty::StrictUnion => "lemma-14.strict-union".into(),
            GqpProperty::DisjointSum => "lemma-14.disjoint-sum".into(),
            GqpProperty::SumExceedsPart => "lemma-14.sum-exceeds-part".into(),
            GqpProperty::Negligibility(i) => format!("lemma-15.{i}"),
            GqpProperty::Modularity => "modularity".into(),
            GqpProperty::Corollary5 => "corollary-5".into(),
            GqpProperty::Corollary6 => "corollary-6".into(),
            GqpProperty::Lemma13 => "lemma-13".into(),
        }
    }
}

impl fmt::Display for GqpProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for GqpProperty {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut all = GqpProperty::all();
        all.push(GqpProperty::NullAsPrinted);
        all.into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown g.q.p. property {s:?}")))
    }
}

/// Checks one property exhaustively on a verified g.q.p.
pub fn verify_gqp_property(rel: &EventRelation, id: GqpProperty) -> Result<CheckResult> {
    if let GqpProperty::Negligibility(i) = id {
        if !(1..=NEGLIGIBILITY_BULLETS).contains(&i) {
            return Err(Error::Input(format!("no negligibility property number {i}")));
        }
    }
    if !is_gqp(rel) {
        return Ok(CheckResult::inconclusive(
            id.name(),
            "relation is not a generalized qualitative probability",
        ));
    }
    let witness = find_violation(rel, id);
    let mut result = CheckResult::from_witness(id.name(), witness);
    if matches!(id, GqpProperty::NullAbsorbed | GqpProperty::NullAsPrinted) {
        result = result.with_note(
            "the null characterization is printed as `∅ ≤ A`, which holds for every event; \
             null is read as `A ≤ ∅` here",
        );
    }
    Ok(result)
}

fn w2(a: Event, b: Event) -> Witness {
    Witness::new().event("A", a).event("B", b)
}

fn w3(a: Event, b: Event, c: (&str, Event)) -> Witness {
    w2(a, b).event(c.0, c.1)
}

fn find_violation(rel: &EventRelation, id: GqpProperty) -> Option<Witness> {
    let n = rel.n_states();
    let ev = || rel.events();
    let disjoint_from = |x: Event| x.complement(n).subsets();
    match id {
        GqpProperty::NullAbsorbed => {
            for a in ev() {
                let absorbed = ev().all(|b| rel.leq(a.union(b), b));
                if rel.is_null(a) != absorbed {
                    let b = ev().find(|&b| !rel.leq(a.union(b), b)).unwrap_or(Event::EMPTY);
                    return Some(w2(a, b));
                }
            }
            None
        }
        GqpProperty::NullAsPrinted => ev()
            .find(|&a| rel.is_null(a) != rel.leq(Event::EMPTY, a))
            .map(|a| Witness::new().event("A", a)),
        GqpProperty::SubsetMonotone | GqpProperty::Corollary5 => {
            for b in ev() {
                for a in b.subsets() {
                    if !rel.leq(a, b) {
                        return Some(w2(a, b));
                    }
                }
            }
            None
        }
        GqpProperty::StrictCancellation => {
            for a in ev() {
                for b in ev() {
                    for d in disjoint_from(a.union(b)) {
                        if rel.lt(a.union(d), b.union(d)) && !rel.lt(a, b) {
                            return Some(w3(a, b, ("D", d)));
                        }
                    }
                }
            }
            None
        }
        GqpProperty::StrictUnion => {
            for a in ev() {
                for b in ev() {
                    for d in disjoint_from(a.union(b)) {
                        if rel.lt(a, b) && rel.lt(d, b.union(d)) && !rel.lt(a.union(d), b.union(d)) {
                            return Some(w3(a, b, ("D", d)));
                        }
                    }
                }
            }
            None
        }
        GqpProperty::DisjointSum => {
            for a in ev() {
                for b in disjoint_from(a) {
                    for a2 in ev().filter(|&x| rel.leq(x, a)) {
                        for b2 in ev().filter(|&x| rel.leq(x, b)) {
                            if !rel.leq(a2.union(b2), a.union(b)) {
                                return Some(w2(a, b).event("A'", a2).event("B'", b2));
                            }
                        }
                    }
                }
            }
            None
        }
        GqpProperty::SumExceedsPart => {
            for a in ev() {
                for b in disjoint_from(a) {
                    let ab = a.union(b);
                    if rel.lt(Event::EMPTY, ab) && !rel.lt(a, ab) && !rel.lt(b, ab) {
                        return Some(w2(a, b));
                    }
                }
            }
            None
        }
        GqpProperty::Negligibility(i) => negligibility(rel, i),
        GqpProperty::Modularity => negligibility(rel, 6),
        GqpProperty::Corollary6 => ev()
            .find(|&a| rel.is_null(a) != rel.equiv(a, Event::EMPTY))
            .map(|a| Witness::new().event("A", a)),
        GqpProperty::Lemma13 => {
            for a in ev() {
                for b in disjoint_from(a) {
                    if rel.leq(a, b)
                        && rel.leq(a.union(b), a)
                        && !(rel.is_null(a) && rel.is_null(b))
                    {
                        return Some(w2(a, b));
                    }
                }
            }
            None
        }
    }
}

fn negligibility(rel: &EventRelation, bullet: u8) -> Option<Witness> {
    let n = rel.n_states();
    let ev = || rel.events();
    let ll = |a: Event, b: Event| rel.negligible(a, b);
    match bullet {
        // A ⊆ B ≪ C ⇒ A ≪ C
        1 => {
            for b in ev() {
                for c in ev().filter(|&c| ll(b, c)) {
                    for a in b.subsets() {
                        if !ll(a, c) {
                            return Some(w3(a, b, ("C", c)));
                        }
                    }
                }
            }
            None
        }
        // A ≪ B ⊆ C ⇒ A ≪ C
        2 => {
            for a in ev() {
                for b in ev().filter(|&b| ll(a, b)) {
                    for c in ev().filter(|&c| b.is_subset_of(c)) {
                        if !ll(a, c) {
                            return Some(w3(a, b, ("C", c)));
                        }
                    }
                }
            }
            None
        }
        // A ≪ B ⇒ A < B
        3 => {
            for a in ev() {
                for b in ev() {
                    if ll(a, b) && !rel.lt(a, b) {
                        return Some(w2(a, b));
                    }
                }
            }
            None
        }
        // A ≪ C ⇒ A ≪ B or B ≪ C, with B ⊆ C (4), B ∩ C = ∅ (5), any B (6)
        4..=6 => {
            for a in ev() {
                for c in ev().filter(|&c| ll(a, c)) {
                    for b in ev() {
                        let applies = match bullet {
                            4 => b.is_subset_of(c),
                            5 => b.is_disjoint(c),
                            _ => true,
                        };
                        if applies && !ll(a, b) && !ll(b, c) {
                            return Some(w3(a, b, ("C", c)));
                        }
                    }
                }
            }
            None
        }
        // A ≤ B ≪ C ≤ D ⇒ A ≪ D
        7 => {
            for b in ev() {
                for c in ev().filter(|&c| ll(b, c)) {
                    for a in ev().filter(|&a| rel.leq(a, b)) {
                        for d in ev().filter(|&d| rel.leq(c, d)) {
                            if !ll(a, d) {
                                return Some(w3(a, b, ("C", c)).event("D", d));
                            }
                        }
                    }
                }
            }
            None
        }
        // A ≪ B, A' ≪ B ⇒ A ∪ A' ≪ B
        8 => {
            for b in ev() {
                for a in ev().filter(|&a| ll(a, b)) {
                    for a2 in ev().filter(|&x| ll(x, b)) {
                        if !ll(a.union(a2), b) {
                            return Some(w2(a, b).event("A'", a2));
                        }
                    }
                }
            }
            None
        }
        // A ≪ B ∪ B' ⇒ A ≪ B or A ≪ B'
        9 => {
            for a in ev() {
                for b in ev() {
                    for b2 in ev() {
                        if ll(a, b.union(b2)) && !ll(a, b) && !ll(a, b2) {
                            return Some(w2(a, b).event("B'", b2));
                        }
                    }
                }
            }
            None
        }
        // D disjoint from A and B, A ∪ D ≤ B ∪ D ⇒ A ≤ B or A ≪ B ∪ D (10) / (A ∪ B) ≪ D (11)
        10 | 11 => {
            for a in ev() {
                for b in ev() {
                    for d in a.union(b).complement(n).subsets() {
                        if !rel.leq(a.union(d), b.union(d)) || rel.leq(a, b) {
                            continue;
                        }
                        let escape = if bullet == 10 {
                            ll(a, b.union(d))
                        } else {
                            ll(a.union(b), d)
                        };
                        if !escape {
                            return Some(w3(a, b, ("D", d)));
                        }
                    }
                }
            }
            None
        }
        // D disjoint from A only
        12 => {
            for a in ev() {
                for b in ev() {
                    for d in a.complement(n).subsets() {
                        if rel.leq(a.union(d), b.union(d)) && !rel.leq(a, b) && !ll(a.union(b), d) {
                            return Some(w3(a, b, ("D", d)));
                        }
                    }
                }
            }
            None
        }
        // A ∩ B = ∅, A ∪ B ≤ A' ∪ B', B' ≤ B ⇒ A ≤ A' or (A ∪ A') ≪ B'
        13 => {
            for a in ev() {
                for b in a.complement(n).subsets() {
                    for b2 in ev().filter(|&x| rel.leq(x, b)) {
                        for a2 in ev() {
                            if rel.leq(a.union(b), a2.union(b2))
                                && !rel.leq(a, a2)
                                && !ll(a.union(a2), b2)
                            {
                                return Some(w2(a, b).event("A'", a2).event("B'", b2));
                            }
                        }
                    }
                }
            }
            None
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gqp::tests::uniform2;

    #[test]
    fn uniform_relation_properties() {
        let rel = uniform2();
        for p in GqpProperty::all() {
            assert!(verify_gqp_property(&rel, p).unwrap().passed(), "{p}");
        }
    }

    #[test]
    fn printed_null_characterization_is_flagged() {
        let r = verify_gqp_property(&uniform2(), GqpProperty::NullAsPrinted).unwrap();
        assert!(r.failed());
        assert!(!r.note.is_empty());
    }

    #[test]
    fn unknown_ids_are_input_errors() {
        assert!(verify_gqp_property(&uniform2(), GqpProperty::Negligibility(14)).is_err());
        assert!("lemma-99".parse::<GqpProperty>().is_err());
        assert_eq!(
            "lemma-15.6".parse::<GqpProperty>().unwrap(),
            GqpProperty::Negligibility(6)
        );
    }

    #[test]
    fn non_gqp_is_inconclusive() {
        let rel = EventRelation::from_fn(1, |a, b| a == b).unwrap();
        let r = verify_gqp_property(&rel, GqpProperty::Lemma13).unwrap();
        assert_eq!(r.verdict, crate::check::Verdict::Inconclusive);
    }
}
