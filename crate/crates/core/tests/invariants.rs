use std::sync::OnceLock;

use num_rational::BigRational;
use proptest::prelude::*;

use gqplab::bridge::{derive_relation, round_trip};
use gqplab::gqp::{classify, is_gqp, EventRelation};
use gqplab::models::{expectation_structure, ranked_structure, EpsilonNumber, ProbabilityModel, RankedModel};
use gqplab::search::{enumerate_gqps, sample_gqps, total_extensions, Entry, PartialRelation};
use gqplab::{CheckConfig, ConsequenceSpace, DecisionSpace, Event, StateSpace};

fn gqps3() -> &'static [EventRelation] {
    static ALL: OnceLock<Vec<EventRelation>> = OnceLock::new();
    ALL.get_or_init(|| enumerate_gqps(3, 1_000_000).unwrap().relations)
}

fn two_prizes(n: usize) -> DecisionSpace {
    DecisionSpace::new(StateSpace::new(n).unwrap(), ConsequenceSpace::new(2, &[(0, 1)]).unwrap())
}

fn decided(p: &PartialRelation) -> Vec<(Event, Event, bool)> {
    let mut out = Vec::new();
    for a in p.events() {
        for b in p.events() {
            match p.get(a, b) {
                Entry::Yes => out.push((a, b, true)),
                Entry::No => out.push((a, b, false)),
                Entry::Unknown => {}
            }
        }
    }
    out
}

/// Seeds a partial relation with the entries of `rel` selected by `mask`.
fn partial_from(rel: &EventRelation, mask: &[bool]) -> PartialRelation {
    let mut p = PartialRelation::new(rel.n_states()).unwrap();
    let pairs = rel.events().flat_map(|a| rel.events().map(move |b| (a, b)));
    for ((a, b), &keep) in pairs.zip(mask.iter().cycle()) {
        if keep {
            p.assert(a, b, rel.leq(a, b)).unwrap();
        }
    }
    p
}

#[test]
fn purely_nonstandard_relations_are_total() {
    for n in 0..=3 {
        for rel in enumerate_gqps(n, 1_000_000).unwrap().relations {
            let f = classify(&rel).unwrap();
            assert!(!f.purely_nonstandard || f.total);
        }
    }
}

#[test]
fn sampled_relations_on_four_states_are_gqps_and_round_trip() {
    let e = sample_gqps(4, 20, 9, 1_000_000).unwrap();
    assert_eq!(e.relations.len(), 20);
    for rel in &e.relations {
        assert!(is_gqp(rel));
        let f = classify(rel).unwrap();
        assert!(!f.purely_nonstandard || f.total);
        assert!(round_trip(rel, &CheckConfig::default()).unwrap().is_faithful());
    }
}

#[test]
fn total_extensions_are_total_gqps_extending_the_input() {
    for rel in gqps3().iter().step_by(7) {
        let ext = total_extensions(rel, 1_000_000).unwrap();
        assert!(ext.stats.complete);
        assert!(!ext.relations.is_empty());
        for t in &ext.relations {
            assert!(t.is_total() && is_gqp(t) && rel.is_contained_in(t));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn propagation_is_sound_for_gqps(idx in 0usize..154, mask in prop::collection::vec(any::<bool>(), 1..64)) {
        let rel = &gqps3()[idx];
        let mut p = partial_from(rel, &mask);
        prop_assert!(p.propagate().is_ok());
        for (a, b, v) in decided(&p) {
            prop_assert_eq!(rel.leq(a, b), v);
        }
    }

    #[test]
    fn propagation_is_idempotent(idx in 0usize..154, mask in prop::collection::vec(any::<bool>(), 1..64)) {
        let mut p = partial_from(&gqps3()[idx], &mask);
        p.propagate().unwrap();
        let once = decided(&p);
        p.propagate().unwrap();
        prop_assert_eq!(once, decided(&p));
    }

    #[test]
    fn propagation_is_monotone(
        idx in 0usize..154,
        mask in prop::collection::vec(any::<bool>(), 64),
        extra in prop::collection::vec(any::<bool>(), 64),
    ) {
        let rel = &gqps3()[idx];
        let wider: Vec<bool> = mask.iter().zip(&extra).map(|(a, b)| *a || *b).collect();
        let mut small = partial_from(rel, &mask);
        let mut large = partial_from(rel, &wider);
        small.propagate().unwrap();
        large.propagate().unwrap();
        let large_facts = decided(&large);
        for fact in decided(&small) {
            prop_assert!(large_facts.contains(&fact));
        }
    }

    #[test]
    fn expectation_models_derive_total_gqps(raw in prop::collection::vec(1u32..20, 1..=3)) {
        let n = raw.len();
        let space = two_prizes(n);
        let total: u32 = raw.iter().sum();
        let weights = raw
            .iter()
            .map(|&w| EpsilonNumber::from_rational(BigRational::new(w.into(), total.into())))
            .collect();
        let utilities = vec![BigRational::from_integer(0.into()), BigRational::from_integer(1.into())];
        let model = ProbabilityModel::new(&space, weights, utilities).unwrap();
        let rel = derive_relation(&expectation_structure(&space, &model).unwrap()).unwrap();
        let f = classify(&rel);
        prop_assert!(f.is_some_and(|f| f.total && f.standard));
    }

    #[test]
    fn ranked_models_derive_purely_nonstandard_gqps(order in Just((0..4).collect::<Vec<usize>>()).prop_shuffle()) {
        let space = two_prizes(4);
        let ps = ranked_structure(&space, &RankedModel::new(order).unwrap()).unwrap();
        let f = classify(&derive_relation(&ps).unwrap());
        prop_assert!(f.is_some_and(|f| f.total && f.purely_nonstandard));
    }
}
