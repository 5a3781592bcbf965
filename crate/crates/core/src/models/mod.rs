//! Preference structures generated by concrete models: conditional expected
//! utility under a standard or non-standard probability, and comparison at
//! the most plausible state of a ranked state space.

pub mod eps;

use std::cmp::Ordering;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bits::BitMatrix;
use crate::error::{input, Result};
use crate::preference::{PreferenceStructure, TableRule};
use crate::space::{DecisionSpace, Event, DEFAULT_ACT_CAP};

pub use eps::{EpsPoly, EpsilonNumber};

/// Recorded on non-standard structures: the weak relation is a completion.
pub const NONSTANDARD_PROVENANCE: &str =
    "nonstandard: f <=_A g iff standard part of E[g|A] - E[f|A] >= 0 (weak relation completed from the strict one)";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbabilityModel {
    weights: Vec<EpsilonNumber>,
    utilities: Vec<BigRational>,
}

impl ProbabilityModel {
    /// Validates positivity, normalization and order-compatible utilities.
    pub fn new(
        space: &DecisionSpace,
        weights: Vec<EpsilonNumber>,
        utilities: Vec<BigRational>,
    ) -> Result<Self> {
        if weights.len() != space.n_states() {
            return input(format!(
                "{} weights for {} states",
                weights.len(),
                space.n_states()
            ));
        }
        if utilities.len() != space.n_consequences() {
            return input(format!(
                "{} utilities for {} consequences",
                utilities.len(),
                space.n_consequences()
            ));
        }
        if let Some(s) = weights.iter().position(|w| !w.is_positive()) {
            return input(format!("weight of state {s} is not positive"));
        }
        let total = weights
            .iter()
            .fold(EpsilonNumber::zero(), |acc, w| &acc + w);
        if total != EpsilonNumber::one() {
            return input(format!("weights sum to {total}, not 1"));
        }
        if let Some(c) = utilities
            .iter()
            .position(|u| u.is_negative() || *u > BigRational::one())
        {
            return input(format!("utility of consequence {c} is outside [0, 1]"));
        }
        let order = space.consequences();
        if !order.is_total() {
            return input("expected-utility models need a totally ordered consequence space");
        }
        for c in 0..order.len() {
            for d in 0..order.len() {
                if order.lt(c, d) && utilities[c] >= utilities[d] {
                    return input(format!(
                        "utilities must increase along the order: {c} < {d} but u({c}) >= u({d})"
                    ));
                }
            }
        }
        Ok(Self { weights, utilities })
    }

    /// Equal rational weights.
    pub fn uniform(space: &DecisionSpace, utilities: Vec<BigRational>) -> Result<Self> {
        let n = space.n_states();
        if n == 0 {
            return input("no probability on an empty state space");
        }
        let w = EpsilonNumber::from_rational(BigRational::new(1.into(), (n as i64).into()));
        Self::new(space, vec![w; n], utilities)
    }

    pub fn weights(&self) -> &[EpsilonNumber] {
        &self.weights
    }

    pub fn utilities(&self) -> &[BigRational] {
        &self.utilities
    }

    pub fn is_standard(&self) -> bool {
        self.weights.iter().all(|w| w.as_rational().is_some())
    }
}

/// `u_i = i / (m - 1)`, or `0` for a single consequence.
pub fn evenly_spaced_utilities(m: usize) -> Vec<BigRational> {
    (0..m)
        .map(|i| {
            if m == 1 {
                BigRational::zero()
            } else {
                BigRational::new((i as i64).into(), ((m - 1) as i64).into())
            }
        })
        .collect()
}

/// Dense ranks of `values`; equal values share a rank.
fn ranks<T: Ord>(values: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].cmp(&values[b]));
    let mut out = vec![0; values.len()];
    let mut rank = 0;
    for (i, &idx) in order.iter().enumerate() {
        if i > 0 && values[order[i - 1]].cmp(&values[idx]) != Ordering::Equal {
            rank += 1;
        }
        out[idx] = rank;
    }
    out
}

fn table_from_ranks(ranks: &[usize]) -> BitMatrix {
    BitMatrix::from_fn(ranks.len(), |f, g| ranks[f] <= ranks[g])
}

/// Conditional expected utility with rational weights.
pub fn expectation_structure(
    space: &DecisionSpace,
    model: &ProbabilityModel,
) -> Result<PreferenceStructure> {
    let weights: Vec<BigRational> = model
        .weights
        .iter()
        .map(|w| w.as_rational())
        .collect::<Option<_>>()
        .map_or_else(|| input("expectation model needs rational weights"), Ok)?;
    let n_acts = space.n_acts(DEFAULT_ACT_CAP)?;
    let sp = space.clone();
    let utilities = model.utilities.clone();
    let rule: TableRule = Arc::new(move |a: Event| {
        if a.is_empty() {
            return BitMatrix::full(n_acts);
        }
        // the common positive denominator P(A) does not affect the order
        let values: Vec<BigRational> = (0..n_acts)
            .map(|f| {
                a.states()
                    .map(|s| &weights[s] * &utilities[sp.value(f, s)])
                    .fold(BigRational::zero(), |acc, x| acc + x)
            })
            .collect();
        table_from_ranks(&ranks(&values))
    });
    PreferenceStructure::from_rule(space.clone(), DEFAULT_ACT_CAP, "expectation", rule)
}

/// Conditional expected utility under infinitesimal weights; differences
/// with zero standard part count as indifference.
pub fn nonstandard_structure(
    space: &DecisionSpace,
    model: &ProbabilityModel,
) -> Result<PreferenceStructure> {
    let n_acts = space.n_acts(DEFAULT_ACT_CAP)?;
    let sp = space.clone();
    let m = space.n_consequences();
    // products p(s)·u(c)
    let pu: Vec<Vec<EpsilonNumber>> = model
        .weights
        .iter()
        .map(|w| {
            (0..m)
                .map(|c| w * &EpsilonNumber::from_rational(model.utilities[c].clone()))
                .collect()
        })
        .collect();
    let weights = model.weights.clone();
    let rule: TableRule = Arc::new(move |a: Event| {
        if a.is_empty() {
            return BitMatrix::full(n_acts);
        }
        let mass = a
            .states()
            .fold(EpsilonNumber::zero(), |acc, s| &acc + &weights[s]);
        let values: Vec<BigRational> = (0..n_acts)
            .map(|f| {
                let total = a
                    .states()
                    .fold(EpsilonNumber::zero(), |acc, s| &acc + &pu[s][sp.value(f, s)]);
                (&total / &mass)
                    .standard_part()
                    .expect("conditional expectation of bounded utilities is finite")
            })
            .collect();
        table_from_ranks(&ranks(&values))
    });
    PreferenceStructure::from_rule(space.clone(), DEFAULT_ACT_CAP, NONSTANDARD_PROVENANCE, rule)
}

/// A total order on states, listed from least to most plausible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedModel {
    order: Vec<usize>,
}

impl RankedModel {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &s in &order {
            if s >= order.len() || std::mem::replace(&mut seen[s], true) {
                return input(format!("rank {order:?} is not a permutation of the states"));
            }
        }
        Ok(Self { order })
    }

    /// `s0 < s1 < ...`.
    pub fn identity(n: usize) -> Self {
        Self {
            order: (0..n).collect(),
        }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// The most plausible state of a nonempty event.
    pub fn max_state(&self, a: Event) -> Option<usize> {
        self.order.iter().rev().copied().find(|&s| a.contains(s))
    }
}

/// Compares acts at the most plausible state of the conditioning event.
pub fn ranked_structure(space: &DecisionSpace, model: &RankedModel) -> Result<PreferenceStructure> {
    if model.order.len() != space.n_states() {
        return input(format!(
            "rank lists {} states, space has {}",
            model.order.len(),
            space.n_states()
        ));
    }
    if !space.consequences().is_total() {
        return input("ranked structures need a totally ordered consequence space");
    }
    let model = model.clone();
    let sp = space.clone();
    PreferenceStructure::from_predicate(space.clone(), DEFAULT_ACT_CAP, "ranked", move |a, f, g| {
        match model.max_state(a) {
            None => true,
            Some(s) => sp.consequences().le(sp.value(f, s), sp.value(g, s)),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preference::{compare, is_null, negligible_given, Outcome};
    use crate::space::{Act, ConsequenceSpace, StateSpace};

    fn space(n: usize, m: usize) -> DecisionSpace {
        DecisionSpace::new(StateSpace::new(n).unwrap(), ConsequenceSpace::chain(m).unwrap())
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    pub(crate) fn uniform(n: usize, m: usize) -> PreferenceStructure {
        let sp = space(n, m);
        let model = ProbabilityModel::uniform(&sp, evenly_spaced_utilities(m)).unwrap();
        expectation_structure(&sp, &model).unwrap()
    }

    pub(crate) fn nonstandard(weights: &[&str], m: usize) -> PreferenceStructure {
        let sp = space(weights.len(), m);
        let w = weights.iter().map(|t| t.parse().unwrap()).collect();
        let model = ProbabilityModel::new(&sp, w, evenly_spaced_utilities(m)).unwrap();
        nonstandard_structure(&sp, &model).unwrap()
    }

    #[test]
    fn uniform_two_states() {
        let ps = uniform(2, 2);
        let (f, g) = (Act(vec![1, 0]), Act(vec![0, 1]));
        assert_eq!(compare(&ps, ps.full_event(), &f, &g).unwrap(), Outcome::Indifferent);
        assert_eq!(
            compare(&ps, Event::singleton(0), &f, &g).unwrap(),
            Outcome::FirstPreferred
        );
        assert!(is_null(&ps, Event::EMPTY).unwrap());
        assert!(!negligible_given(&ps, Event::singleton(0), Event::singleton(1)).unwrap());
    }

    #[test]
    fn constants_are_ordered_by_utility() {
        let ps = uniform(3, 3);
        for a in ps.events().filter(|a| !a.is_empty()) {
            assert_eq!(
                compare(&ps, a, &Act(vec![0, 0, 0]), &Act(vec![2, 2, 2])).unwrap(),
                Outcome::SecondPreferred
            );
        }
    }

    #[test]
    fn nonstandard_two_states() {
        let ps = nonstandard(&["1 - 1 eps", "0 + 1 eps"], 2);
        let s = ps.full_event();
        // w_S = (1,1) vs w_{s0} = (1,0): the difference ε is infinitesimal
        assert_eq!(
            compare(&ps, s, &Act(vec![1, 1]), &Act(vec![1, 0])).unwrap(),
            Outcome::Indifferent
        );
        // w_{s0} vs w_{s1}: standard difference 1
        assert_eq!(
            compare(&ps, s, &Act(vec![1, 0]), &Act(vec![0, 1])).unwrap(),
            Outcome::FirstPreferred
        );
        let s1 = Event::singleton(1);
        assert_eq!(
            compare(&ps, s1, &Act(vec![0, 0]), &Act(vec![1, 1])).unwrap(),
            Outcome::SecondPreferred
        );
        assert!(!is_null(&ps, s1).unwrap());
        assert!(negligible_given(&ps, s1, Event::singleton(0)).unwrap());
        assert!(ps.provenance().contains("completed"));
    }

    #[test]
    fn ranked_two_states() {
        let sp = space(2, 2);
        let ps = ranked_structure(&sp, &RankedModel::identity(2)).unwrap();
        let s = ps.full_event();
        assert_eq!(
            compare(&ps, s, &Act(vec![1, 0]), &Act(vec![0, 1])).unwrap(),
            Outcome::SecondPreferred
        );
        assert_eq!(
            compare(&ps, s, &Act(vec![0, 1]), &Act(vec![1, 1])).unwrap(),
            Outcome::Indifferent
        );
        for a in ps.events().filter(|a| !a.is_empty()) {
            assert!(!is_null(&ps, a).unwrap());
        }
    }

    #[test]
    fn model_validation() {
        let sp = space(2, 2);
        let half = EpsilonNumber::from_rational(q(1, 2));
        let u = evenly_spaced_utilities(2);
        assert!(ProbabilityModel::new(&sp, vec![half.clone(), half.clone()], u.clone()).is_ok());
        assert!(ProbabilityModel::new(&sp, vec![half.clone()], u.clone()).is_err());
        assert!(ProbabilityModel::new(&sp, vec![half.clone(), half.clone(), EpsilonNumber::zero()], u.clone()).is_err());
        assert!(ProbabilityModel::new(
            &sp,
            vec![EpsilonNumber::one(), EpsilonNumber::zero()],
            u.clone()
        )
        .is_err());
        assert!(ProbabilityModel::new(&sp, vec![half.clone(), half.clone()], vec![q(1, 1), q(0, 1)]).is_err());
        assert!(ProbabilityModel::new(&sp, vec![half.clone(), half.clone()], vec![q(0, 1), q(2, 1)]).is_err());
        let partial = DecisionSpace::new(StateSpace::new(2).unwrap(), ConsequenceSpace::antichain(2).unwrap());
        assert!(ProbabilityModel::new(&partial, vec![half.clone(), half], u).is_err());
        assert!(ranked_structure(&partial, &RankedModel::identity(2)).is_err());
        assert!(RankedModel::new(vec![0, 0]).is_err());
        assert!(RankedModel::new(vec![1, 0]).is_ok());
    }

    #[test]
    fn ranks_share_ties() {
        assert_eq!(ranks(&[3, 1, 3, 2]), vec![2, 0, 2, 1]);
    }
}
