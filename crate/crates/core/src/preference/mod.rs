//! Event-indexed preference structures over acts.
//!
//! A structure assigns to every event `A` a binary relation `≤_A` over the
//! act space. Nothing is assumed about these relations at construction time;
//! the postulate checkers in [`postulates`] decide which properties hold.

pub mod lemmas;
pub mod postulates;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::bits::BitMatrix;
use crate::error::{input, Result};
use crate::space::{Act, DecisionSpace, Event, DEFAULT_ACT_CAP};

pub use lemmas::{verify_preference_lemma, PreferenceLemma};
pub use postulates::{check_postulate, CheckConfig, Postulate, PrizePairs, Q5Variant};

/// Computes the whole `≤_A` table for one event.
pub type TableRule = Arc<dyn Fn(Event) -> BitMatrix + Send + Sync>;

/// The four ways two acts can stand given an event.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    /// `f <_A g`
    SecondPreferred,
    /// `g <_A f`
    FirstPreferred,
    /// `f ∼_A g`
    Indifferent,
    Undecided,
}

impl Outcome {
    pub fn from_relations(f_le_g: bool, g_le_f: bool) -> Self {
        match (f_le_g, g_le_f) {
            (true, false) => Outcome::SecondPreferred,
            (false, true) => Outcome::FirstPreferred,
            (true, true) => Outcome::Indifferent,
            (false, false) => Outcome::Undecided,
        }
    }

    /// The outcome with the two acts swapped.
    pub fn mirror(self) -> Self {
        match self {
            Outcome::SecondPreferred => Outcome::FirstPreferred,
            Outcome::FirstPreferred => Outcome::SecondPreferred,
            other => other,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::SecondPreferred => "strictly-preferred-second",
            Outcome::FirstPreferred => "strictly-preferred-first",
            Outcome::Indifferent => "indifferent",
            Outcome::Undecided => "undecided",
        })
    }
}

#[derive(Clone)]
pub struct PreferenceStructure {
    space: DecisionSpace,
    n_acts: usize,
    tables: Vec<OnceLock<BitMatrix>>,
    rule: Option<TableRule>,
    provenance: String,
}

impl fmt::Debug for PreferenceStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PreferenceStructure")
            .field("n_states", &self.space.n_states())
            .field("n_consequences", &self.space.n_consequences())
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl PreferenceStructure {
    /// Extensional structure: one square table per event, in event order.
    pub fn from_tables(space: DecisionSpace, tables: Vec<BitMatrix>, cap: usize) -> Result<Self> {
        let n_acts = space.n_acts(cap)?;
        if tables.len() != space.states().n_events() {
            return input(format!(
                "expected {} preference tables, got {}",
                space.states().n_events(),
                tables.len()
            ));
        }
        if let Some(t) = tables.iter().find(|t| t.dim() != n_acts) {
            return input(format!(
                "preference table has dimension {}, expected {n_acts}",
                t.dim()
            ));
        }
        Ok(Self {
            space,
            n_acts,
            tables: tables.into_iter().map(OnceLock::from).collect(),
            rule: None,
            provenance: "extensional".into(),
        })
    }

    /// Rule-backed structure; tables are computed per event on first use.
    pub fn from_rule(
        space: DecisionSpace,
        cap: usize,
        provenance: impl Into<String>,
        rule: TableRule,
    ) -> Result<Self> {
        let n_acts = space.n_acts(cap)?;
        let n_events = space.states().n_events();
        Ok(Self {
            space,
            n_acts,
            tables: (0..n_events).map(|_| OnceLock::new()).collect(),
            rule: Some(rule),
            provenance: provenance.into(),
        })
    }

    /// Builds a rule-backed structure from a pointwise predicate.
    pub fn from_predicate(
        space: DecisionSpace,
        cap: usize,
        provenance: impl Into<String>,
        pred: impl Fn(Event, usize, usize) -> bool + Send + Sync + 'static,
    ) -> Result<Self> {
        let n_acts = space.n_acts(cap)?;
        let rule: TableRule = Arc::new(move |a| BitMatrix::from_fn(n_acts, |f, g| pred(a, f, g)));
        Self::from_rule(space, cap, provenance, rule)
    }

    /// Materialized copy with every table computed.
    pub fn to_extensional(&self) -> Self {
        let tables = self.space.states().events().map(|a| self.table(a).clone()).collect();
        let mut out = Self::from_tables(self.space.clone(), tables, self.n_acts).expect("same shape");
        out.provenance = self.provenance.clone();
        out
    }

    /// Entry-wise conjunction of two structures over the same space.
    pub fn unanimity(&self, other: &PreferenceStructure) -> Result<Self> {
        if self.space != other.space {
            return input("unanimity of structures over different spaces");
        }
        let tables = self
            .space
            .states()
            .events()
            .map(|a| self.table(a).and(other.table(a)))
            .collect();
        let mut out = Self::from_tables(self.space.clone(), tables, self.n_acts)?;
        out.provenance = format!("unanimity({}, {})", self.provenance, other.provenance);
        Ok(out)
    }

    pub fn space(&self) -> &DecisionSpace {
        &self.space
    }

    #[inline]
    pub fn n_acts(&self) -> usize {
        self.n_acts
    }

    pub fn n_states(&self) -> usize {
        self.space.n_states()
    }

    pub fn n_consequences(&self) -> usize {
        self.space.n_consequences()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn set_provenance(&mut self, provenance: impl Into<String>) {
        self.provenance = provenance.into();
    }

    pub fn events(&self) -> impl Iterator<Item = Event> + Clone {
        self.space.states().events()
    }

    pub fn full_event(&self) -> Event {
        self.space.states().full()
    }

    /// The `≤_A` table.
    pub fn table(&self, event: Event) -> &BitMatrix {
        self.tables[event.index()].get_or_init(|| {
            let rule = self.rule.as_ref().expect("extensional tables are always initialized");
            let t = rule(event);
            assert_eq!(t.dim(), self.n_acts, "rule produced a table of the wrong size");
            t
        })
    }

    /// `f ≤_A g` on canonical act indices.
    #[inline]
    pub fn leq(&self, event: Event, f: usize, g: usize) -> bool {
        self.table(event).get(f, g)
    }

    #[inline]
    pub fn lt(&self, event: Event, f: usize, g: usize) -> bool {
        self.leq(event, f, g) && !self.leq(event, g, f)
    }

    #[inline]
    pub fn indiff(&self, event: Event, f: usize, g: usize) -> bool {
        self.leq(event, f, g) && self.leq(event, g, f)
    }

    #[inline]
    pub fn outcome(&self, event: Event, f: usize, g: usize) -> Outcome {
        Outcome::from_relations(self.leq(event, f, g), self.leq(event, g, f))
    }

    /// Preference between constants, read off the whole space.
    #[inline]
    pub fn constant_leq(&self, c: usize, d: usize) -> bool {
        let (ci, di) = (self.space.constant_index(c), self.space.constant_index(d));
        self.leq(self.full_event(), ci, di)
    }

    #[inline]
    pub fn constant_lt(&self, d: usize, c: usize) -> bool {
        self.constant_leq(d, c) && !self.constant_leq(c, d)
    }

    /// Pairs `(d, c)` of constants with `d < c`, in increasing order.
    pub fn strict_constant_pairs(&self) -> Vec<(usize, usize)> {
        let m = self.n_consequences();
        let mut out = Vec::new();
        for d in 0..m {
            for c in 0..m {
                if self.constant_lt(d, c) {
                    out.push((d, c));
                }
            }
        }
        out
    }

    pub(crate) fn check_event(&self, event: Event) -> Result<()> {
        self.space.states().check_event(event)
    }

    /// Canonical index of an act, validating it against the space.
    pub fn index_of(&self, act: &Act) -> Result<usize> {
        self.space.act_index(act)
    }

    pub fn act(&self, index: usize) -> Act {
        self.space.act_at(index)
    }

    /// True iff every ordered act pair is related under `≤_A`, by table scan.
    pub fn null_by_table(&self, event: Event) -> bool {
        self.table(event).count_ones() == self.n_acts * self.n_acts
    }

    /// `ANB` for disjoint events, without argument validation.
    pub(crate) fn negligible_unchecked(&self, a: Event, b: Event) -> bool {
        self.table(a.union(b)) == self.table(b)
    }
}

/// Classifies how `f` and `g` stand given `event`.
pub fn compare(ps: &PreferenceStructure, event: Event, f: &Act, g: &Act) -> Result<Outcome> {
    ps.check_event(event)?;
    let fi = ps.index_of(f)?;
    let gi = ps.index_of(g)?;
    Ok(ps.outcome(event, fi, gi))
}

/// An event is null when every act is weakly preferred to every act given it.
pub fn is_null(ps: &PreferenceStructure, event: Event) -> Result<bool> {
    ps.check_event(event)?;
    Ok(ps.null_by_table(event))
}

/// `ANB`: for disjoint `A`, `B`, preferences given `A ∪ B` coincide with those given `B`.
pub fn negligible_given(ps: &PreferenceStructure, a: Event, b: Event) -> Result<bool> {
    ps.check_event(a)?;
    ps.check_event(b)?;
    if !a.is_disjoint(b) {
        return input(format!(
            "negligibility needs disjoint events, got {:?} and {:?}",
            a, b
        ));
    }
    Ok(ps.negligible_unchecked(a, b))
}

/// Builds a structure over a small space with the default act cap.
pub fn extensional(space: DecisionSpace, tables: Vec<BitMatrix>) -> Result<PreferenceStructure> {
    PreferenceStructure::from_tables(space, tables, DEFAULT_ACT_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{ConsequenceSpace, StateSpace};

    fn space(n: usize, m: usize) -> DecisionSpace {
        DecisionSpace::new(StateSpace::new(n).unwrap(), ConsequenceSpace::chain(m).unwrap())
    }

    /// Bets on three coins: 1 undecided against 2 and 3, 3 strictly below 2.
    pub(crate) fn three_coins() -> PreferenceStructure {
        let sp = space(1, 3);
        let empty = BitMatrix::full(3);
        let mut s = BitMatrix::new(3);
        for i in 0..3 {
            s.set(i, i, true);
        }
        // consequence i stands for betting on coin i + 1
        s.set(2, 1, true);
        extensional(sp, vec![empty, s]).unwrap()
    }

    #[test]
    fn three_coin_outcomes() {
        let ps = three_coins();
        let s = ps.full_event();
        let act = |v| Act(vec![v]);
        assert_eq!(compare(&ps, s, &act(0), &act(1)).unwrap(), Outcome::Undecided);
        assert_eq!(compare(&ps, s, &act(0), &act(2)).unwrap(), Outcome::Undecided);
        assert_eq!(compare(&ps, s, &act(2), &act(1)).unwrap(), Outcome::SecondPreferred);
        assert_eq!(compare(&ps, s, &act(1), &act(2)).unwrap(), Outcome::FirstPreferred);
        assert_eq!(compare(&ps, Event::EMPTY, &act(1), &act(2)).unwrap(), Outcome::Indifferent);
    }

    #[test]
    fn compare_rejects_mismatched_inputs() {
        let ps = three_coins();
        assert!(compare(&ps, ps.full_event(), &Act(vec![0, 0]), &Act(vec![1])).is_err());
        assert!(compare(&ps, Event(0b10), &Act(vec![0]), &Act(vec![1])).is_err());
        assert!(compare(&ps, ps.full_event(), &Act(vec![3]), &Act(vec![1])).is_err());
    }

    #[test]
    fn negligible_needs_disjoint_events() {
        let ps = three_coins();
        let s = ps.full_event();
        assert!(negligible_given(&ps, s, s).is_err());
        assert!(negligible_given(&ps, Event::EMPTY, s).unwrap());
    }

    #[test]
    fn null_events() {
        let ps = three_coins();
        assert!(is_null(&ps, Event::EMPTY).unwrap());
        assert!(!is_null(&ps, ps.full_event()).unwrap());
    }

    #[test]
    fn outcome_mirror_is_involutive() {
        for o in [
            Outcome::SecondPreferred,
            Outcome::FirstPreferred,
            Outcome::Indifferent,
            Outcome::Undecided,
        ] {
            assert_eq!(o.mirror().mirror(), o);
        }
    }

    #[test]
    fn wrong_table_count_is_rejected() {
        assert!(extensional(space(1, 2), vec![BitMatrix::full(2)]).is_err());
        assert!(extensional(space(1, 2), vec![BitMatrix::full(2), BitMatrix::full(3)]).is_err());
    }
}
