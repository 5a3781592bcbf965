//! States, events, consequences and acts.
//!
//! Events are subsets of a finite state space encoded as bitmasks (state `i`
//! is bit `i`). Acts are functions from states to consequence indices and are
//! addressed by their position in the canonical lexicographic enumeration,
//! where state 0 is the most significant digit.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BitMatrix;
use crate::error::{input, Error, Result};

/// Largest state space the event encoding supports.
pub const MAX_STATES: usize = 16;

/// Default cap on the size of an act space.
pub const DEFAULT_ACT_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSpace {
    n_states: usize,
    labels: Option<Vec<String>>,
}

impl StateSpace {
    pub fn new(n_states: usize) -> Result<Self> {
        if n_states > MAX_STATES {
            return input(format!("{n_states} states exceeds the maximum of {MAX_STATES}"));
        }
        Ok(Self {
            n_states,
            labels: None,
        })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut space = Self::new(labels.len())?;
        space.labels = Some(labels);
        Ok(space)
    }

    #[inline]
    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn n_events(&self) -> usize {
        1 << self.n_states
    }

    /// The whole space `S`.
    pub fn full(&self) -> Event {
        Event::full(self.n_states)
    }

    /// All events in increasing integer order.
    pub fn events(&self) -> impl Iterator<Item = Event> + Clone {
        (0..self.n_events() as u32).map(Event)
    }

    pub fn check_event(&self, event: Event) -> Result<()> {
        if (event.0 as usize) >= self.n_events() {
            return input(format!(
                "event {:#b} is not a subset of a {}-state space",
                event.0, self.n_states
            ));
        }
        Ok(())
    }
}

/// A subset of the state space.
#[derive(Copy, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Event(pub u32);

impl Event {
    pub const EMPTY: Event = Event(0);

    pub fn full(n_states: usize) -> Event {
        Event(((1u64 << n_states) - 1) as u32)
    }

    pub fn singleton(state: usize) -> Event {
        Event(1 << state)
    }

    pub fn from_states(states: impl IntoIterator<Item = usize>) -> Event {
        Event(states.into_iter().fold(0, |acc, s| acc | 1 << s))
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn contains(self, state: usize) -> bool {
        self.0 >> state & 1 == 1
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn union(self, other: Event) -> Event {
        Event(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Event) -> Event {
        Event(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Event) -> Event {
        Event(self.0 & !other.0)
    }

    #[inline]
    pub fn complement(self, n_states: usize) -> Event {
        Event(!self.0 & Event::full(n_states).0)
    }

    #[inline]
    pub fn is_subset_of(self, other: Event) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: Event) -> bool {
        self.0 & other.0 == 0
    }

    /// Member states in increasing order.
    pub fn states(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |s| bits >> s & 1 == 1)
    }

    /// All subsets of `self`, in increasing integer order.
    pub fn subsets(self) -> impl Iterator<Item = Event> {
        let mask = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask {
                None
            } else {
                Some((cur.wrapping_sub(mask)) & mask)
            };
            Some(Event(cur))
        })
    }

    /// Bitstring with state 0 leftmost.
    pub fn to_bitstring(self, n_states: usize) -> String {
        (0..n_states)
            .map(|s| if self.contains(s) { '1' } else { '0' })
            .collect()
    }

    pub fn parse_bitstring(text: &str, n_states: usize) -> Result<Event> {
        if text.len() != n_states {
            return input(format!(
                "event bitstring {text:?} has length {}, expected {n_states}",
                text.len()
            ));
        }
        let mut bits = 0u32;
        for (s, ch) in text.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << s,
                other => return input(format!("invalid character {other:?} in event bitstring")),
            }
        }
        Ok(Event(bits))
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.states().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "s{s}")?;
        }
        write!(f, "}}")
    }
}

/// A finite set of consequences with an extensionally given strict order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsequenceSpace {
    n: usize,
    strict: BitMatrix,
    /// The generating pairs as supplied, kept for emission.
    generators: Vec<(usize, usize)>,
}

impl ConsequenceSpace {
    /// Builds the transitive closure of `pairs` (each `(i, j)` meaning `i < j`)
    /// and rejects cycles.
    pub fn new(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return input("a consequence space needs at least one consequence");
        }
        let mut strict = BitMatrix::new(n);
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return input(format!("order pair {i} < {j} out of range for {n} consequences"));
            }
            strict.set(i, j, true);
        }
        for k in 0..n {
            for i in 0..n {
                if strict.get(i, k) {
                    for j in 0..n {
                        if strict.get(k, j) {
                            strict.set(i, j, true);
                        }
                    }
                }
            }
        }
        if let Some(c) = (0..n).find(|&c| strict.get(c, c)) {
            return input(format!("consequence order has a cycle through {c}"));
        }
        let mut generators = pairs.to_vec();
        generators.sort_unstable();
        generators.dedup();
        Ok(Self {
            n,
            strict,
            generators,
        })
    }

    /// `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Result<Self> {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(n, &pairs)
    }

    /// No two consequences comparable.
    pub fn antichain(n: usize) -> Result<Self> {
        Self::new(n, &[])
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn lt(&self, c: usize, d: usize) -> bool {
        self.strict.get(c, d)
    }

    #[inline]
    pub fn le(&self, c: usize, d: usize) -> bool {
        c == d || self.lt(c, d)
    }

    pub fn is_total(&self) -> bool {
        (0..self.n).all(|c| (0..self.n).all(|d| c == d || self.lt(c, d) || self.lt(d, c)))
    }

    pub fn generators(&self) -> &[(usize, usize)] {
        &self.generators
    }

    /// All pairs `(d, c)` with `d < c`, in increasing order.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for d in 0..self.n {
            for c in 0..self.n {
                if self.lt(d, c) {
                    out.push((d, c));
                }
            }
        }
        out
    }
}

/// A function from states to consequences.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Act(pub Vec<usize>);

impl Act {
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }
}

/// A state space paired with a consequence space; the domain of acts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionSpace {
    states: StateSpace,
    consequences: ConsequenceSpace,
    /// `weights[s] = m^(n-1-s)`; `None` when the act count overflows `usize`.
    weights: Option<Vec<usize>>,
}

impl DecisionSpace {
    pub fn new(states: StateSpace, consequences: ConsequenceSpace) -> Self {
        let n = states.n_states();
        let m = consequences.len();
        let mut weights = Some(vec![0; n]);
        let mut w: usize = 1;
        for s in (0..n).rev() {
            if let Some(ws) = weights.as_mut() {
                ws[s] = w;
            }
            match w.checked_mul(m) {
                Some(next) => w = next,
                None if s == 0 => {}
                None => weights = None,
            }
        }
        Self {
            states,
            consequences,
            weights,
        }
    }

    pub fn states(&self) -> &StateSpace {
        &self.states
    }

    pub fn consequences(&self) -> &ConsequenceSpace {
        &self.consequences
    }

    #[inline]
    pub fn n_states(&self) -> usize {
        self.states.n_states()
    }

    #[inline]
    pub fn n_consequences(&self) -> usize {
        self.consequences.len()
    }

    /// `m^n` as an exact count.
    pub fn act_count(&self) -> u128 {
        (self.n_consequences() as u128).saturating_pow(self.n_states() as u32)
    }

    /// Number of acts, or a budget error when it exceeds `cap`.
    pub fn n_acts(&self, cap: usize) -> Result<usize> {
        let required = self.act_count();
        if required > cap as u128 {
            return Err(Error::Budget {
                what: "act space",
                required,
                cap: cap as u128,
            });
        }
        Ok(required as usize)
    }

    fn weights(&self) -> &[usize] {
        self.weights
            .as_deref()
            .expect("act index arithmetic on an act space larger than usize")
    }

    /// Value of the act with canonical index `act` at `state`.
    #[inline]
    pub fn value(&self, act: usize, state: usize) -> usize {
        act / self.weights()[state] % self.n_consequences()
    }

    pub fn check_act(&self, act: &Act) -> Result<()> {
        if act.0.len() != self.n_states() {
            return input(format!(
                "act has {} values, expected {}",
                act.0.len(),
                self.n_states()
            ));
        }
        if let Some(v) = act.0.iter().find(|&&v| v >= self.n_consequences()) {
            return input(format!(
                "act value {v} out of range for {} consequences",
                self.n_consequences()
            ));
        }
        Ok(())
    }

    pub fn check_consequence(&self, c: usize) -> Result<()> {
        if c >= self.n_consequences() {
            return input(format!(
                "consequence {c} out of range for {} consequences",
                self.n_consequences()
            ));
        }
        Ok(())
    }

    pub fn act_index(&self, act: &Act) -> Result<usize> {
        self.check_act(act)?;
        Ok(act.0.iter().zip(self.weights()).map(|(v, w)| v * w).sum())
    }

    pub fn act_at(&self, index: usize) -> Act {
        Act((0..self.n_states()).map(|s| self.value(index, s)).collect())
    }

    pub fn constant_index(&self, c: usize) -> usize {
        self.weights().iter().map(|w| c * w).sum()
    }

    /// Index of the act that is `c` on `event` and `d` elsewhere.
    pub fn indicator_index(&self, event: Event, c: usize, d: usize) -> usize {
        (0..self.n_states())
            .map(|s| if event.contains(s) { c } else { d } * self.weights()[s])
            .sum()
    }

    /// Index of the act equal to `act` outside `event` and to `c` on it.
    pub fn overwrite(&self, act: usize, event: Event, c: usize) -> usize {
        let mut out = act;
        for s in event.states() {
            let w = self.weights()[s];
            out = out - self.value(act, s) * w + c * w;
        }
        out
    }

    /// Index of the act equal to `other` on `event` and to `base` elsewhere.
    pub fn splice(&self, base: usize, other: usize, event: Event) -> usize {
        let mut out = base;
        for s in event.states() {
            let w = self.weights()[s];
            out = out - self.value(base, s) * w + self.value(other, s) * w;
        }
        out
    }

    #[inline]
    pub fn agree_on(&self, f: usize, g: usize, event: Event) -> bool {
        event.states().all(|s| self.value(f, s) == self.value(g, s))
    }

    /// True iff `act` takes value `c` at every state of `event`.
    #[inline]
    pub fn is_constant_on(&self, act: usize, event: Event, c: usize) -> bool {
        event.states().all(|s| self.value(act, s) == c)
    }

    /// All acts equal to `act` outside `free`, in increasing index order.
    pub fn variants(&self, act: usize, free: Event) -> Vec<usize> {
        let base = self.overwrite(act, free, 0);
        let mut out = vec![base];
        let m = self.n_consequences();
        // Free states visited from least to most significant keep the output sorted.
        for s in free.states().collect::<Vec<_>>().into_iter().rev() {
            let w = self.weights()[s];
            let prev = std::mem::take(&mut out);
            for v in 0..m {
                out.extend(prev.iter().map(|a| a + v * w));
            }
            out.sort_unstable();
        }
        out
    }

    /// The set of states of `within` where `act` takes value `z`.
    pub fn level_set(&self, act: usize, within: Event, z: usize) -> Event {
        Event::from_states(within.states().filter(|&s| self.value(act, s) == z))
    }
}

/// The act that is `c` on `event` and `d` on its complement.
pub fn indicator_act(space: &DecisionSpace, event: Event, c: usize, d: usize) -> Result<Act> {
    space.states().check_event(event)?;
    space.check_consequence(c)?;
    space.check_consequence(d)?;
    Ok(Act((0..space.n_states())
        .map(|s| if event.contains(s) { c } else { d })
        .collect()))
}

/// True iff `f` and `g` coincide at every state of `event`.
pub fn acts_agree_on(space: &DecisionSpace, f: &Act, g: &Act, event: Event) -> Result<bool> {
    space.check_act(f)?;
    space.check_act(g)?;
    space.states().check_event(event)?;
    Ok(event.states().all(|s| f.0[s] == g.0[s]))
}

/// Every act, lexicographically by state index.
pub fn enumerate_acts(space: &DecisionSpace, cap: usize) -> Result<Vec<Act>> {
    let n = space.n_acts(cap)?;
    Ok((0..n).map(|i| space.act_at(i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn space(n: usize, m: usize) -> DecisionSpace {
        DecisionSpace::new(
            StateSpace::new(n).unwrap(),
            ConsequenceSpace::chain(m).unwrap(),
        )
    }

    #[test]
    fn indicator_examples() {
        let sp = space(2, 2);
        let s = sp.states().full();
        assert_eq!(indicator_act(&sp, Event::EMPTY, 1, 0).unwrap(), Act(vec![0, 0]));
        assert_eq!(indicator_act(&sp, s, 1, 0).unwrap(), Act(vec![1, 1]));
        assert_eq!(
            indicator_act(&sp, Event::singleton(0), 1, 0).unwrap(),
            Act(vec![1, 0])
        );
        assert!(indicator_act(&sp, s, 2, 0).is_err());
        assert!(indicator_act(&sp, Event(0b100), 1, 0).is_err());
    }

    #[test]
    fn agreement_examples() {
        let sp = space(2, 2);
        let f = Act(vec![1, 0]);
        let g = Act(vec![1, 1]);
        assert!(acts_agree_on(&sp, &f, &g, Event::EMPTY).unwrap());
        assert!(acts_agree_on(&sp, &f, &g, Event::singleton(0)).unwrap());
        assert!(!acts_agree_on(&sp, &f, &g, sp.states().full()).unwrap());
        assert!(acts_agree_on(&sp, &f, &Act(vec![1]), Event::EMPTY).is_err());
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_acts(&space(0, 3), 10).unwrap(), vec![Act(vec![])]);
        assert_eq!(
            enumerate_acts(&space(1, 2), 10).unwrap(),
            vec![Act(vec![0]), Act(vec![1])]
        );
        assert_eq!(
            enumerate_acts(&space(2, 2), 10).unwrap(),
            vec![
                Act(vec![0, 0]),
                Act(vec![0, 1]),
                Act(vec![1, 0]),
                Act(vec![1, 1])
            ]
        );
        match enumerate_acts(&space(3, 3), 26) {
            Err(Error::Budget { required, .. }) => assert_eq!(required, 27),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn consequence_order_closure_and_cycles() {
        let f = ConsequenceSpace::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(f.lt(0, 2));
        assert!(f.is_total());
        assert!(ConsequenceSpace::new(2, &[(0, 1), (1, 0)]).is_err());
        assert!(ConsequenceSpace::new(2, &[(0, 0)]).is_err());
        assert!(ConsequenceSpace::new(0, &[]).is_err());
        assert!(!ConsequenceSpace::antichain(2).unwrap().is_total());
    }

    #[test]
    fn bitstrings() {
        let e = Event::parse_bitstring("101", 3).unwrap();
        assert_eq!(e, Event::from_states([0, 2]));
        assert_eq!(e.to_bitstring(3), "101");
        assert!(Event::parse_bitstring("10", 3).is_err());
        assert!(Event::parse_bitstring("1x1", 3).is_err());
        assert_eq!(Event::EMPTY.to_bitstring(0), "");
    }

    #[test]
    fn subsets_enumeration() {
        let subs: Vec<_> = Event(0b101).subsets().collect();
        assert_eq!(subs, vec![Event(0), Event(1), Event(4), Event(5)]);
        assert_eq!(Event::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn variants_are_sorted_and_complete() {
        let sp = space(3, 3);
        let f = sp.act_index(&Act(vec![2, 1, 0])).unwrap();
        let vs = sp.variants(f, Event::from_states([0, 2]));
        assert_eq!(vs.len(), 9);
        assert!(vs.windows(2).all(|w| w[0] < w[1]));
        assert!(vs.iter().all(|&v| sp.value(v, 1) == 1));
    }

    proptest! {
        #[test]
        fn indicator_complement_symmetry(n in 0usize..5, bits in 0u32..32, c in 0usize..3, d in 0usize..3) {
            let sp = space(n, 3);
            let a = Event(bits & Event::full(n).0);
            prop_assert_eq!(
                indicator_act(&sp, a, c, d).unwrap(),
                indicator_act(&sp, a.complement(n), d, c).unwrap()
            );
            let idx = sp.indicator_index(a, c, d);
            prop_assert_eq!(sp.act_at(idx), indicator_act(&sp, a, c, d).unwrap());
        }

        #[test]
        fn agreement_is_closed_under_union(f in prop::collection::vec(0usize..3, 4),
                                           g in prop::collection::vec(0usize..3, 4),
                                           a in 0u32..16, b in 0u32..16) {
            let sp = space(4, 3);
            let (f, g) = (Act(f), Act(g));
            let (a, b) = (Event(a), Event(b));
            if acts_agree_on(&sp, &f, &g, a).unwrap() && acts_agree_on(&sp, &f, &g, b).unwrap() {
                prop_assert!(acts_agree_on(&sp, &f, &g, a.union(b)).unwrap());
            }
        }

        #[test]
        fn enumeration_is_distinct_and_complete(n in 0usize..4, m in 1usize..4) {
            let sp = space(n, m);
            let acts = enumerate_acts(&sp, DEFAULT_ACT_CAP).unwrap();
            prop_assert_eq!(acts.len(), m.pow(n as u32));
            prop_assert!(acts.windows(2).all(|w| w[0] < w[1]));
            for (i, act) in acts.iter().enumerate() {
                prop_assert_eq!(sp.act_index(act).unwrap(), i);
            }
        }

        #[test]
        fn set_algebra(a in 0u32..256, b in 0u32..256) {
            let (a, b) = (Event(a), Event(b));
            prop_assert!(a.difference(b).is_subset_of(a));
            prop_assert!(a.is_subset_of(a.union(b)));
            prop_assert_eq!(a.complement(8).complement(8), a);
            prop_assert_eq!(a.union(b).complement(8), a.complement(8).intersection(b.complement(8)));
        }
    }
}
