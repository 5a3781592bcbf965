//! Search for structures satisfying Q1 to Q6 on which the conclusion of the
//! level-set indifference theorem fails.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::enumerate::enumerate_gqps;
use crate::corpus::{model_structures, permutations, Classes};
use super::{ConjectureStatus, ConjectureVerdict, Evidence};
use crate::bits::BitMatrix;
use crate::bridge::{construct_preferences, derive_relation, theorem2_violation};
use crate::check::Witness;
use crate::error::{input, Error, Result};
use crate::format::{emit_structure, parse};
use crate::preference::postulates::first_failure;
use crate::preference::{check_postulate, CheckConfig, Postulate, PreferenceStructure};
use crate::space::{ConsequenceSpace, DecisionSpace, Event, StateSpace, DEFAULT_ACT_CAP};

pub const Q7_CONJECTURE: &str = "q7-independence";

/// Node budget for listing g.q.p. fed to the construction.
const CONSTRUCTION_NODES: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q7SearchConfig {
    pub max_states: usize,
    pub max_consequences: usize,
    /// Structures examined, across all sources.
    pub budget: u64,
    pub seed: u64,
    /// Random tables drawn per instance too large to enumerate.
    pub samples_per_instance: u64,
    /// Only structures that also pass Q7 count as candidates.
    pub require_q7: bool,
    pub check: CheckConfig,
}

impl Q7SearchConfig {
    pub fn new(max_states: usize, max_consequences: usize, budget: u64) -> Self {
        Self {
            max_states,
            max_consequences,
            budget,
            seed: 0,
            samples_per_instance: 1000,
            require_q7: false,
            check: CheckConfig::default(),
        }
    }
}

fn random_preorder(k: usize, rng: &mut ChaCha8Rng) -> BitMatrix {
    let density = [0.1, 0.25, 0.4, 0.6][rng.random_range(0..4)];
    let mut m = BitMatrix::from_fn(k, |i, j| i == j || rng.random_bool(density));
    // repair by transitive closure
    for l in 0..k {
        for i in 0..k {
            if m.get(i, l) {
                for j in 0..k {
                    if m.get(l, j) {
                        m.set(i, j, true);
                    }
                }
            }
        }
    }
    m
}

/// True iff no state relabelling gives a lexicographically smaller encoding.
fn is_canonical(ps: &PreferenceStructure, perms: &[Vec<usize>]) -> bool {
    let sp = ps.space();
    let n_acts = ps.n_acts();
    let encode = |map_event: &dyn Fn(Event) -> Event, map_act: &dyn Fn(usize) -> usize| {
        let mut bits = Vec::with_capacity(ps.events().count() * n_acts * n_acts);
        for b in ps.events() {
            let a = map_event(b);
            for f in 0..n_acts {
                for g in 0..n_acts {
                    bits.push(ps.leq(a, map_act(f), map_act(g)));
                }
            }
        }
        bits
    };
    let own = encode(&|e| e, &|f| f);
    perms.iter().all(|p| {
        // image entry at (B, f, g) is the original entry at the preimages
        let pre_event = |b: Event| Event::from_states(b.states().map(|s| p[s]));
        let pre_act = |f: usize| {
            let act = sp.act_at(f);
            let moved: Vec<usize> = (0..act.0.len()).map(|s| act.0[inverse(p, s)]).collect();
            sp.act_index(&crate::space::Act(moved)).expect("valid act")
        };
        own <= encode(&pre_event, &pre_act)
    })
}

fn inverse(p: &[usize], s: usize) -> usize {
    p.iter().position(|&x| x == s).expect("permutation")
}

enum Examined {
    Rejected,
    Candidate { q7: bool },
    Counterexample(Witness, bool),
}

fn examine(ps: &PreferenceStructure, cfg: &Q7SearchConfig) -> Result<Examined> {
    if first_failure(ps, &Postulate::BASIC, &cfg.check)?.is_some() {
        return Ok(Examined::Rejected);
    }
    let q7 = check_postulate(ps, Postulate::Q7, &cfg.check)?.passed();
    if cfg.require_q7 && !q7 {
        return Ok(Examined::Rejected);
    }
    let rel = derive_relation(ps)?;
    Ok(match ps.events().find_map(|a| theorem2_violation(ps, &rel, a)) {
        Some(w) => Examined::Counterexample(w, q7),
        None => Examined::Candidate { q7 },
    })
}

#[derive(Default)]
struct Tally {
    examined: u64,
    candidates: u64,
    q7: u64,
    orbits_skipped: u64,
    exhaustive_instances: u64,
    sampled_instances: u64,
    exhausted: bool,
    found: Option<Evidence>,
}

impl Tally {
    fn remaining(&self, budget: u64) -> u64 {
        budget.saturating_sub(self.examined)
    }

    fn record(&mut self, label: &str, ps: &PreferenceStructure, outcome: Examined) {
        self.examined += 1;
        match outcome {
            Examined::Rejected => {}
            Examined::Candidate { q7 } => {
                self.candidates += 1;
                self.q7 += q7 as u64;
            }
            Examined::Counterexample(w, q7) => {
                self.candidates += 1;
                self.q7 += q7 as u64;
                if self.found.is_none() {
                    self.found = Some(Evidence {
                        description: format!(
                            "{label}: passes Q1-Q6, Q7 {}, level-set indifference fails",
                            if q7 { "passes" } else { "fails" }
                        ),
                        document: emit_structure(ps),
                        witness: Some(w),
                    });
                }
            }
        }
    }
}

fn run_list(tally: &mut Tally, items: Vec<(String, PreferenceStructure)>, cfg: &Q7SearchConfig) -> Result<()> {
    for (label, ps) in items {
        if tally.found.is_some() {
            return Ok(());
        }
        if tally.remaining(cfg.budget) == 0 {
            tally.exhausted = true;
            return Ok(());
        }
        let outcome = examine(&ps, cfg)?;
        tally.record(&label, &ps, outcome);
    }
    Ok(())
}

fn run_instance(tally: &mut Tally, n: usize, m: usize, cfg: &Q7SearchConfig, rng: &mut ChaCha8Rng) -> Result<bool> {
    run_list(tally, model_structures(n, m)?, cfg)?;
    if m == 2 && n <= 3 && tally.found.is_none() && !tally.exhausted {
        let listed = enumerate_gqps(n, CONSTRUCTION_NODES)?;
        let built = listed
            .relations
            .iter()
            .enumerate()
            .map(|(i, r)| Ok((format!("constructed #{i}"), construct_preferences(r)?.to_extensional())))
            .collect::<Result<Vec<_>>>()?;
        run_list(tally, built, cfg)?;
    }
    if tally.found.is_some() || tally.exhausted {
        return Ok(false);
    }
    let classes = Classes::new(DecisionSpace::new(StateSpace::new(n)?, ConsequenceSpace::chain(m)?))?;
    match classes.exhaustive_size() {
        Some(size) if size <= tally.remaining(cfg.budget) as u128 => {
            let perms: Vec<Vec<usize>> = permutations(n).into_iter().skip(1).collect();
            let outcomes: Vec<Option<(PreferenceStructure, Examined)>> = (0..size)
                .into_par_iter()
                .map(|i| {
                    let ps = classes.structure(&classes.decode(i));
                    if !is_canonical(&ps, &perms) {
                        return Ok(None);
                    }
                    let e = examine(&ps, cfg)?;
                    Ok(Some((ps, e)))
                })
                .collect::<Result<_>>()?;
            for (i, o) in outcomes.into_iter().enumerate() {
                match o {
                    None => tally.orbits_skipped += 1,
                    Some((ps, e)) => tally.record(&format!("table #{i}"), &ps, e),
                }
            }
            tally.exhaustive_instances += 1;
            Ok(true)
        }
        Some(_) => {
            tally.exhausted = true;
            Ok(false)
        }
        None => {
            let draws = cfg.samples_per_instance.min(tally.remaining(cfg.budget));
            for i in 0..draws {
                let orders: Vec<BitMatrix> = classes.counts.iter().map(|&k| random_preorder(k, rng)).collect();
                let refs: Vec<&BitMatrix> = orders.iter().collect();
                let ps = classes.structure(&refs);
                let e = examine(&ps, cfg)?;
                tally.record(&format!("random table #{i}"), &ps, e);
                if tally.found.is_some() {
                    break;
                }
            }
            if draws < cfg.samples_per_instance {
                tally.exhausted = true;
            }
            tally.sampled_instances += 1;
            Ok(false)
        }
    }
}

/// Looks for a structure passing Q1 to Q6 whose level-set indifference fails.
///
/// Instances run in order of state count, then consequence count. Each
/// instance examines model-generated structures, the constructions over all
/// g.q.p. when there are two consequences, and then every extensional table
/// up to state relabelling when that space fits the remaining budget, or
/// random tables otherwise. Only fully enumerated runs report
/// `holds-on-instance`.
pub fn search_q7_independence(cfg: &Q7SearchConfig) -> Result<ConjectureVerdict> {
    if cfg.max_states > 4 || cfg.max_consequences > 4 {
        return input("Q7 search bounds are limited to 4 states and 4 consequences");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut tally = Tally::default();
    let mut all_exhaustive = true;
    'outer: for n in 1..=cfg.max_states {
        for m in 2..=cfg.max_consequences {
            if DecisionSpace::new(StateSpace::new(n)?, ConsequenceSpace::chain(m)?)
                .n_acts(DEFAULT_ACT_CAP)
                .is_err()
            {
                all_exhaustive = false;
                continue;
            }
            all_exhaustive &= run_instance(&mut tally, n, m, cfg, &mut rng)?;
            if tally.found.is_some() || tally.exhausted {
                break 'outer;
            }
        }
    }
    let mut verdict = ConjectureVerdict::new(Q7_CONJECTURE, tally.examined);
    verdict.seed = Some(cfg.seed);
    verdict.stats = vec![
        ("structures_examined".into(), tally.examined),
        ("pass_q1_q6".into(), tally.candidates),
        ("pass_q7".into(), tally.q7),
        ("skipped_by_symmetry".into(), tally.orbits_skipped),
        ("exhaustive_instances".into(), tally.exhaustive_instances),
        ("sampled_instances".into(), tally.sampled_instances),
    ];
    verdict.status = if tally.found.is_some() {
        ConjectureStatus::CounterexampleFound
    } else if tally.exhausted || !all_exhaustive || cfg.budget == 0 {
        ConjectureStatus::Inconclusive
    } else {
        ConjectureStatus::HoldsOnInstance
    };
    verdict.evidence = tally.found;
    Ok(verdict)
}

/// Re-checks serialized evidence: Q1 to Q6 pass and the level-set claim fails.
pub fn reverify_q7_evidence(evidence: &Evidence, cfg: &CheckConfig) -> Result<bool> {
    let ps = parse(&evidence.document)?.preference_structure(cfg.act_cap)?;
    if first_failure(&ps, &Postulate::BASIC, cfg)?.is_some() {
        return Ok(false);
    }
    let rel = derive_relation(&ps)?;
    let a = evidence
        .witness
        .as_ref()
        .and_then(|w| w.get_event("A"))
        .ok_or_else(|| Error::Input("evidence lacks event A".into()))?;
    Ok(theorem2_violation(&ps, &rel, a).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_budget_is_inconclusive() {
        let v = search_q7_independence(&Q7SearchConfig::new(2, 2, 0)).unwrap();
        assert_eq!(v.status, ConjectureStatus::Inconclusive);
    }

    #[test]
    fn restricted_to_q7_finds_nothing() {
        let mut cfg = Q7SearchConfig::new(2, 2, 100_000);
        cfg.require_q7 = true;
        let v = search_q7_independence(&cfg).unwrap();
        assert_ne!(v.status, ConjectureStatus::CounterexampleFound);
    }
}
