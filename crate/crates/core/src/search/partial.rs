//! Three-valued event relations closed under the forcing rules of the
//! axioms.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BitMatrix;
use crate::check::Witness;
use crate::error::{input, Result};
use crate::gqp::{EventRelation, GqpAxiom, MAX_RELATION_STATES};
use crate::space::Event;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Entry {
    Yes,
    No,
    Unknown,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Asserted,
    Branch,
    Reflexivity,
    EmptyBottom,
    Subset,
    Transitivity,
    Union,
    /// `A ≤ C` known, `A ≤ B` refuted: `C ≤ B` refuted (and the mirror case).
    TransitivityContra,
    /// `A ∪ D ≤ B ∪ D` refuted: `A ≤ B` refuted.
    UnionContra,
    Totality,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Asserted => "asserted",
            Rule::Branch => "branch",
            Rule::Reflexivity => "reflexivity",
            Rule::EmptyBottom => "empty-bottom",
            Rule::Subset => "subset",
            Rule::Transitivity => "transitivity",
            Rule::Union => "union",
            Rule::TransitivityContra => "transitivity-contrapositive",
            Rule::UnionContra => "union-contrapositive",
            Rule::Totality => "totality",
        })
    }
}

/// A decided entry: `(A, B, A ≤ B holds)`.
pub type Fact = (Event, Event, bool);

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Reason {
    pub rule: Rule,
    pub premises: [Option<Fact>; 2],
}

impl Reason {
    fn base(rule: Rule) -> Self {
        Self {
            rule,
            premises: [None, None],
        }
    }

    fn from(rule: Rule, p: Fact, q: Option<Fact>) -> Self {
        Self {
            rule,
            premises: [Some(p), q],
        }
    }
}

/// Two derivations disagree on `A ≤ B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contradiction {
    pub a: Event,
    pub b: Event,
    /// The derivations of both values, premises first.
    pub chain: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct PartialRelation {
    n_states: usize,
    yes: BitMatrix,
    no: BitMatrix,
    reasons: Vec<Option<Reason>>,
    queue: Vec<Fact>,
    seeded: bool,
    total: bool,
}

const CHAIN_LIMIT: usize = 24;

impl PartialRelation {
    /// Every entry unknown.
    pub fn new(n_states: usize) -> Result<Self> {
        if n_states > MAX_RELATION_STATES {
            return input(format!(
                "partial relations are limited to {MAX_RELATION_STATES} states"
            ));
        }
        let dim = 1usize << n_states;
        Ok(Self {
            n_states,
            yes: BitMatrix::new(dim),
            no: BitMatrix::new(dim),
            reasons: vec![None; dim * dim],
            queue: Vec::new(),
            seeded: false,
            total: false,
        })
    }

    /// Every related pair of `rel` asserted; unrelated pairs stay unknown.
    pub fn from_relation(rel: &EventRelation) -> Result<Self> {
        let mut pr = Self::new(rel.n_states())?;
        for a in rel.events() {
            for b in rel.events() {
                if rel.leq(a, b) {
                    pr.assert(a, b, true)
                        .expect("a fresh relation has no refuted entries");
                }
            }
        }
        Ok(pr)
    }

    /// Adds the rule that a refuted `A ≤ B` forces `B ≤ A`.
    pub fn with_totality(mut self) -> Self {
        self.total = true;
        // replay refuted entries through the new rule
        for a in self.events() {
            for b in self.events() {
                if self.no.get(a.index(), b.index()) {
                    self.queue.push((a, b, false));
                }
            }
        }
        self
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_events(&self) -> usize {
        1 << self.n_states
    }

    pub fn events(&self) -> impl Iterator<Item = Event> + Clone {
        (0..self.n_events() as u32).map(Event)
    }

    pub fn get(&self, a: Event, b: Event) -> Entry {
        let (i, j) = (a.index(), b.index());
        if self.yes.get(i, j) {
            Entry::Yes
        } else if self.no.get(i, j) {
            Entry::No
        } else {
            Entry::Unknown
        }
    }

    pub fn reason(&self, a: Event, b: Event) -> Option<Reason> {
        self.reasons[a.index() * self.n_events() + b.index()]
    }

    pub fn n_unknown(&self) -> usize {
        let dim = self.n_events();
        dim * dim - self.yes.count_ones() - self.no.count_ones()
    }

    pub fn is_complete(&self) -> bool {
        self.n_unknown() == 0
    }

    /// First undecided pair in increasing `(A, B)` order.
    pub fn first_unknown(&self) -> Option<(Event, Event)> {
        let dim = self.n_events();
        (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .find(|&(i, j)| !self.yes.get(i, j) && !self.no.get(i, j))
            .map(|(i, j)| (Event(i as u32), Event(j as u32)))
    }

    /// The relation of `yes` entries; meaningful once complete.
    pub fn to_relation(&self) -> EventRelation {
        EventRelation::from_matrix(self.n_states, self.yes.clone()).expect("same dimension")
    }

    pub fn yes_matrix(&self) -> &BitMatrix {
        &self.yes
    }

    pub fn no_matrix(&self) -> &BitMatrix {
        &self.no
    }

    /// Records `A ≤ B` (or its refutation) as an assertion.
    pub fn assert(&mut self, a: Event, b: Event, value: bool) -> std::result::Result<(), Contradiction> {
        self.set(a, b, value, Reason::base(Rule::Asserted))
    }

    /// Records a branching decision.
    pub fn decide(&mut self, a: Event, b: Event, value: bool) -> std::result::Result<(), Contradiction> {
        self.set(a, b, value, Reason::base(Rule::Branch))
    }

    fn set(&mut self, a: Event, b: Event, value: bool, reason: Reason) -> std::result::Result<(), Contradiction> {
        let (i, j) = (a.index(), b.index());
        let (same, other) = if value {
            (&mut self.yes, &self.no)
        } else {
            (&mut self.no, &self.yes)
        };
        if same.get(i, j) {
            return Ok(());
        }
        if other.get(i, j) {
            let mut chain = self.explain(a, b);
            let mut seen = HashSet::new();
            for p in reason.premises.iter().flatten() {
                self.explain_into(*p, &mut seen, &mut chain);
            }
            chain.push(self.render_fact((a, b, value), &reason));
            return Err(Contradiction { a, b, chain });
        }
        same.set(i, j, true);
        self.reasons[i * (1 << self.n_states) + j] = Some(reason);
        self.queue.push((a, b, value));
        Ok(())
    }

    fn seed(&mut self) -> std::result::Result<(), Contradiction> {
        for a in self.events() {
            self.set(a, a, true, Reason::base(Rule::Reflexivity))?;
        }
        for a in self.events() {
            self.set(Event::EMPTY, a, true, Reason::base(Rule::EmptyBottom))?;
        }
        for b in self.events() {
            for a in b.subsets() {
                self.set(a, b, true, Reason::base(Rule::Subset))?;
            }
        }
        self.seeded = true;
        Ok(())
    }

    /// Closes the relation under the forcing rules.
    pub fn propagate(&mut self) -> std::result::Result<(), Contradiction> {
        if !self.seeded {
            self.seed()?;
        }
        let n = self.n_states;
        let dim = self.n_events();
        while let Some(fact) = self.queue.pop() {
            let (a, b, value) = fact;
            let (ai, bi) = (a.index(), b.index());
            if value {
                for c in 0..dim {
                    let ce = Event(c as u32);
                    if self.yes.get(bi, c) {
                        self.set(a, ce, true, Reason::from(Rule::Transitivity, fact, Some((b, ce, true))))?;
                    }
                    if self.yes.get(c, ai) {
                        self.set(ce, b, true, Reason::from(Rule::Transitivity, (ce, a, true), Some(fact)))?;
                    }
                    if self.no.get(ai, c) {
                        self.set(b, ce, false, Reason::from(Rule::TransitivityContra, fact, Some((a, ce, false))))?;
                    }
                    if self.no.get(c, bi) {
                        self.set(ce, a, false, Reason::from(Rule::TransitivityContra, fact, Some((ce, b, false))))?;
                    }
                }
                for d in a.union(b).complement(n).subsets().filter(|d| !d.is_empty()) {
                    self.set(a.union(d), b.union(d), true, Reason::from(Rule::Union, fact, None))?;
                }
            } else {
                for c in 0..dim {
                    let ce = Event(c as u32);
                    if self.yes.get(ai, c) {
                        self.set(ce, b, false, Reason::from(Rule::TransitivityContra, fact, Some((a, ce, true))))?;
                    }
                    if self.yes.get(c, bi) {
                        self.set(a, ce, false, Reason::from(Rule::TransitivityContra, fact, Some((ce, b, true))))?;
                    }
                }
                for d in a.intersection(b).subsets().filter(|d| !d.is_empty()) {
                    self.set(a.difference(d), b.difference(d), false, Reason::from(Rule::UnionContra, fact, None))?;
                }
                if self.total {
                    self.set(b, a, true, Reason::from(Rule::Totality, fact, None))?;
                }
            }
        }
        Ok(())
    }

    /// First violation of the two conditional axioms among decided entries.
    pub fn node_violation(&self) -> Option<(GqpAxiom, Witness)> {
        let n = self.n_states;
        let yes = |a: Event, b: Event| self.yes.get(a.index(), b.index());
        let no = |a: Event, b: Event| self.no.get(a.index(), b.index());
        for a in self.events() {
            for b in self.events() {
                if !no(a, b) {
                    continue;
                }
                for d in a.union(b).complement(n).subsets() {
                    if yes(a.union(d), b.union(d)) && no(d.union(b), d) {
                        return Some((
                            GqpAxiom::Cancellation,
                            Witness::new().event("A", a).event("B", b).event("D", d),
                        ));
                    }
                }
            }
        }
        for a in self.events() {
            for b in a.complement(n).subsets() {
                if yes(a, b) && yes(a.union(b), a) && no(b, Event::EMPTY) {
                    return Some((GqpAxiom::Absorption, Witness::new().event("A", a).event("B", b)));
                }
            }
        }
        None
    }

    fn render_fact(&self, (a, b, value): Fact, reason: &Reason) -> String {
        let n = self.n_states;
        let mut line = format!(
            "{} {} {} by {}",
            a.to_bitstring(n),
            if value { "<=" } else { "!<=" },
            b.to_bitstring(n),
            reason.rule
        );
        let premises: Vec<String> = reason
            .premises
            .iter()
            .flatten()
            .map(|(p, q, v)| {
                format!("{}{}{}", p.to_bitstring(n), if *v { "<=" } else { "!<=" }, q.to_bitstring(n))
            })
            .collect();
        if !premises.is_empty() {
            line.push_str(&format!(" from {}", premises.join(", ")));
        }
        line
    }

    fn explain_into(&self, fact: Fact, seen: &mut HashSet<Fact>, out: &mut Vec<String>) {
        if out.len() >= CHAIN_LIMIT || !seen.insert(fact) {
            return;
        }
        let Some(reason) = self.reason(fact.0, fact.1) else {
            return;
        };
        for p in reason.premises.iter().flatten() {
            self.explain_into(*p, seen, out);
        }
        out.push(self.render_fact(fact, &reason));
    }

    /// The derivation of a decided entry, premises first.
    pub fn explain(&self, a: Event, b: Event) -> Vec<String> {
        let value = match self.get(a, b) {
            Entry::Yes => true,
            Entry::No => false,
            Entry::Unknown => return Vec::new(),
        };
        let mut out = Vec::new();
        self.explain_into((a, b, value), &mut HashSet::new(), &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(bits: &str) -> Event {
        Event::parse_bitstring(bits, bits.len()).unwrap()
    }

    #[test]
    fn transitivity_is_forced() {
        let mut pr = PartialRelation::new(2).unwrap();
        let (a, b, c) = (ev("10"), ev("01"), ev("11"));
        pr.assert(b, a, true).unwrap();
        pr.assert(c, b, true).unwrap();
        pr.propagate().unwrap();
        assert_eq!(pr.get(c, a), Entry::Yes);
        assert!(pr.explain(c, a).last().unwrap().contains("transitivity"));
    }

    #[test]
    fn empty_input_forces_base_entries() {
        let mut pr = PartialRelation::new(2).unwrap();
        pr.propagate().unwrap();
        for b in pr.events() {
            assert_eq!(pr.get(Event::EMPTY, b), Entry::Yes);
            assert_eq!(pr.get(b, b), Entry::Yes);
            for a in b.subsets() {
                assert_eq!(pr.get(a, b), Entry::Yes);
            }
        }
        assert_eq!(pr.get(ev("11"), ev("10")), Entry::Unknown);
    }

    #[test]
    fn clash_reports_rule_chain() {
        let mut pr = PartialRelation::new(2).unwrap();
        pr.assert(ev("11"), ev("10"), false).unwrap();
        // {s1} ≤ ∅ gives S = {s0} ∪ {s1} ≤ {s0}
        pr.assert(ev("01"), ev("00"), true).unwrap();
        let err = pr.propagate().unwrap_err();
        assert!(err.chain.iter().any(|l| l.contains("asserted")), "{:?}", err.chain);
        assert!(err.chain.iter().any(|l| l.contains("union")), "{:?}", err.chain);
    }

    #[test]
    fn totality_fills_refuted_mirror() {
        let mut pr = PartialRelation::new(1).unwrap().with_totality();
        pr.assert(ev("1"), ev("0"), false).unwrap();
        pr.propagate().unwrap();
        assert!(pr.is_complete());
    }
}
