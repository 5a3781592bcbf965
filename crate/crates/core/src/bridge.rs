//! Moving between preferences on acts and plausibility relations on events.

use serde::{Deserialize, Serialize};

use crate::check::{CheckResult, Witness};
use crate::error::{Error, Result};
use crate::gqp::{check_gqp, EventRelation, MAX_RELATION_STATES};
use crate::preference::postulates::{check_postulates, first_failure};
use crate::preference::{CheckConfig, Postulate, PreferenceStructure, Q5Variant};
use crate::space::{ConsequenceSpace, DecisionSpace, Event, StateSpace, DEFAULT_ACT_CAP};

/// Consequence indices of the two-valued structures built from relations.
pub const LOW: usize = 0;
pub const HIGH: usize = 1;

/// Recorded on every Theorem 2 result.
pub const THEOREM2_NOTE: &str = "level sets compared with the derived event relation";

/// `A ≤ B` iff `w_A^{c,d} ≤_{A∪B} w_B^{c,d}` for every pair `(d, c)` in `pairs`.
pub fn two_valued_leq(ps: &PreferenceStructure, pairs: &[(usize, usize)], a: Event, b: Event) -> bool {
    let sp = ps.space();
    let ab = a.union(b);
    pairs
        .iter()
        .all(|&(d, c)| ps.leq(ab, sp.indicator_index(a, c, d), sp.indicator_index(b, c, d)))
}

fn relation_from_pairs(ps: &PreferenceStructure, pairs: &[(usize, usize)]) -> Result<EventRelation> {
    if ps.n_states() > MAX_RELATION_STATES {
        return Err(Error::Budget {
            what: "event relation states",
            required: ps.n_states() as u128,
            cap: MAX_RELATION_STATES as u128,
        });
    }
    EventRelation::from_fn(ps.n_states(), |a, b| two_valued_leq(ps, pairs, a, b))
}

/// The event relation defined by a structure's two-valued acts.
pub fn derive_relation(ps: &PreferenceStructure) -> Result<EventRelation> {
    let pairs = ps.strict_constant_pairs();
    if pairs.is_empty() {
        return Err(Error::Precondition(
            "Q6 fails: no constants d < c, so the derived relation would be vacuous".into(),
        ));
    }
    relation_from_pairs(ps, &pairs)
}

/// Reads a two-valued act as the event on which it takes the high value.
fn winning_set(space: &DecisionSpace, act: usize) -> Event {
    space.level_set(act, space.states().full(), HIGH)
}

/// Preferences over acts into `{low, high}` defined by a g.q.p.
pub fn construct_preferences(rel: &EventRelation) -> Result<PreferenceStructure> {
    let gqp = check_gqp(rel);
    if !gqp.passed() {
        return Err(Error::Precondition(format!(
            "input is not a generalized qualitative probability: {} at {}",
            gqp.note,
            gqp.witness.map(|w| w.render(rel.n_states())).unwrap_or_default()
        )));
    }
    let space = DecisionSpace::new(
        StateSpace::new(rel.n_states())?,
        ConsequenceSpace::new(2, &[(LOW, HIGH)])?,
    );
    let sp = space.clone();
    let rel = rel.clone();
    PreferenceStructure::from_predicate(space, DEFAULT_ACT_CAP, "constructed", move |d, f, g| {
        let a = winning_set(&sp, f).intersection(d);
        let b = winning_set(&sp, g).intersection(d);
        rel.negligible(a, d) || rel.leq(a, b)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTripReport {
    /// Q1 to Q6 and R on the constructed structure.
    pub construction_postulates: Vec<CheckResult>,
    pub relation_match: bool,
    /// The input has `S ≤ ∅`.
    pub degenerate: bool,
    /// First event pair where the re-derived relation differs.
    pub mismatch: Option<(Event, Event)>,
}

impl RoundTripReport {
    /// Match, Q1 to Q5 pass, and Q6 passes unless degenerate.
    pub fn is_faithful(&self) -> bool {
        self.relation_match
            && self.construction_postulates.iter().all(|r| {
                r.passed()
                    || r.check == Postulate::R.name()
                    || (self.degenerate && r.check == Postulate::Q6.name())
            })
    }

    pub fn result(&self, name: &str) -> Option<&CheckResult> {
        self.construction_postulates.iter().find(|r| r.check == name)
    }
}

/// Constructs preferences from `rel`, checks them, and derives a relation back.
///
/// Q5 is checked with the not-null hypothesis; the note on that result says
/// whether the non-empty hypothesis also holds. The re-derivation uses the
/// declared order `low < high` so that degenerate inputs still compare.
pub fn round_trip(rel: &EventRelation, cfg: &CheckConfig) -> Result<RoundTripReport> {
    let ps = construct_preferences(rel)?;
    let cfg = cfg.with_q5(Q5Variant::NotNull);
    let mut ids = Postulate::BASIC.to_vec();
    ids.push(Postulate::R);
    let construction_postulates = check_postulates(&ps, &ids, &cfg)?;
    let back = relation_from_pairs(&ps, &[(LOW, HIGH)])?;
    let mismatch = rel
        .events()
        .flat_map(|a| rel.events().map(move |b| (a, b)))
        .find(|&(a, b)| rel.leq(a, b) != back.leq(a, b));
    Ok(RoundTripReport {
        construction_postulates,
        relation_match: mismatch.is_none(),
        degenerate: rel.is_null(rel.full_event()),
        mismatch,
    })
}

/// First act pair with matching level sets on `A` that is not indifferent.
pub fn theorem2_violation(ps: &PreferenceStructure, rel: &EventRelation, a: Event) -> Option<Witness> {
    let sp = ps.space();
    let m = ps.n_consequences();
    let levels: Vec<Vec<Event>> = (0..ps.n_acts())
        .map(|f| (0..m).map(|z| sp.level_set(f, a, z)).collect())
        .collect();
    for f in 0..ps.n_acts() {
        for g in 0..ps.n_acts() {
            let matched = (0..m).all(|z| rel.equiv(levels[f][z], levels[g][z]));
            if matched && !ps.indiff(a, f, g) {
                return Some(
                    Witness::new()
                        .event("A", a)
                        .act("f", ps.act(f))
                        .act("g", ps.act(g)),
                );
            }
        }
    }
    None
}

fn theorem2_precondition(ps: &PreferenceStructure, cfg: &CheckConfig) -> Result<Option<CheckResult>> {
    let mut ids = Postulate::BASIC.to_vec();
    ids.push(Postulate::Q7);
    Ok(first_failure(ps, &ids, cfg)?.map(|p| {
        CheckResult::inconclusive("theorem-2", format!("assumption {} fails", p.name()))
    }))
}

/// Acts whose level sets on `A` are pairwise equally plausible are indifferent given `A`.
pub fn verify_theorem2(ps: &PreferenceStructure, a: Event, cfg: &CheckConfig) -> Result<CheckResult> {
    ps.space().states().check_event(a)?;
    if let Some(r) = theorem2_precondition(ps, cfg)? {
        return Ok(r);
    }
    let rel = derive_relation(ps)?;
    Ok(CheckResult::from_witness("theorem-2", theorem2_violation(ps, &rel, a)).with_note(THEOREM2_NOTE))
}

/// [`verify_theorem2`] over every event, stopping at the first violation.
pub fn verify_theorem2_all(ps: &PreferenceStructure, cfg: &CheckConfig) -> Result<CheckResult> {
    if let Some(r) = theorem2_precondition(ps, cfg)? {
        return Ok(r);
    }
    let rel = derive_relation(ps)?;
    let witness = ps.events().find_map(|a| theorem2_violation(ps, &rel, a));
    Ok(CheckResult::from_witness("theorem-2", witness).with_note(THEOREM2_NOTE))
}

/// Claims linking a structure to its derived relation.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BridgeProperty {
    /// The derived relation is a g.q.p.
    DerivedIsGqp,
    /// `A` is null iff `A ≤ ∅`.
    NullIsBottom,
    /// For disjoint `A`, `B`: `ANB` iff `B ∪ A ≤ B`.
    NegligibleIsAbsorbed,
}

impl BridgeProperty {
    pub const ALL: [BridgeProperty; 3] = [
        BridgeProperty::DerivedIsGqp,
        BridgeProperty::NullIsBottom,
        BridgeProperty::NegligibleIsAbsorbed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BridgeProperty::DerivedIsGqp => "derived-gqp",
            BridgeProperty::NullIsBottom => "corollary-6.preferences",
            BridgeProperty::NegligibleIsAbsorbed => "lemma-11",
        }
    }
}

/// Checks a bridge property on a structure passing Q1 to Q6.
pub fn verify_bridge_property(
    ps: &PreferenceStructure,
    id: BridgeProperty,
    cfg: &CheckConfig,
) -> Result<CheckResult> {
    if let Some(p) = first_failure(ps, &Postulate::BASIC, cfg)? {
        return Ok(CheckResult::inconclusive(
            id.name(),
            format!("assumption {} fails", p.name()),
        ));
    }
    let rel = derive_relation(ps)?;
    let witness = match id {
        BridgeProperty::DerivedIsGqp => {
            let r = check_gqp(&rel);
            return Ok(CheckResult {
                check: id.name().into(),
                ..r
            });
        }
        BridgeProperty::NullIsBottom => ps
            .events()
            .find(|&a| ps.null_by_table(a) != rel.is_null(a))
            .map(|a| Witness::new().event("A", a)),
        BridgeProperty::NegligibleIsAbsorbed => ps
            .events()
            .flat_map(|a| ps.events().filter(move |b| a.is_disjoint(*b)).map(move |b| (a, b)))
            .find(|&(a, b)| ps.negligible_unchecked(a, b) != rel.leq(b.union(a), b))
            .map(|(a, b)| Witness::new().event("A", a).event("B", b)),
    };
    Ok(CheckResult::from_witness(id.name(), witness))
}
