//! Exhaustive checkers for the rationality postulates.
//!
//! Every checker visits its quantified tuples in canonical order (events and
//! acts by increasing index, quantifiers in the order the postulate states
//! them) and reports the first violation, so witnesses are reproducible.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::PreferenceStructure;
use crate::check::{CheckResult, Witness};
use crate::error::{Error, Result};
use crate::space::{Event, DEFAULT_ACT_CAP};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Postulate {
    Q0,
    Q1,
    Q2,
    Q3,
    Q4,
    /// Q4 without the negligibility escape.
    Q4Strong,
    Q5,
    Q6,
    Q7,
    R,
}

impl Postulate {
    pub const ALL: [Postulate; 10] = [
        Postulate::Q0,
        Postulate::Q1,
        Postulate::Q2,
        Postulate::Q3,
        Postulate::Q4,
        Postulate::Q4Strong,
        Postulate::Q5,
        Postulate::Q6,
        Postulate::Q7,
        Postulate::R,
    ];

    /// Q1 through Q6.
    pub const BASIC: [Postulate; 6] = [
        Postulate::Q1,
        Postulate::Q2,
        Postulate::Q3,
        Postulate::Q4,
        Postulate::Q5,
        Postulate::Q6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Postulate::Q0 => "Q0",
            Postulate::Q1 => "Q1",
            Postulate::Q2 => "Q2",
            Postulate::Q3 => "Q3",
            Postulate::Q4 => "Q4",
            Postulate::Q4Strong => "Q'4",
            Postulate::Q5 => "Q5",
            Postulate::Q6 => "Q6",
            Postulate::Q7 => "Q7",
            Postulate::R => "R",
        }
    }
}

impl fmt::Display for Postulate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Postulate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Postulate::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s) || (s == "Q4'" && *p == Postulate::Q4Strong))
            .ok_or_else(|| Error::Input(format!("unknown postulate {s:?}")))
    }
}

/// Hypothesis of Q5: the event on which constants are compared.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Q5Variant {
    /// `A` non-empty.
    #[default]
    NonEmpty,
    /// `A` not null.
    NotNull,
}

/// Which prize pairs `(c, d)` Q7 quantifies over.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrizePairs {
    /// Every ordered pair of distinct constants.
    #[default]
    All,
    /// Only pairs with `d < c`.
    Ordered,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub q5: Q5Variant,
    pub q7_prizes: PrizePairs,
    pub act_cap: usize,
    /// Cap on quantified tuples for Q7 and R.
    pub quantifier_cap: u128,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            q5: Q5Variant::NonEmpty,
            q7_prizes: PrizePairs::All,
            act_cap: DEFAULT_ACT_CAP,
            quantifier_cap: 1 << 32,
        }
    }
}

impl CheckConfig {
    pub fn with_q5(mut self, q5: Q5Variant) -> Self {
        self.q5 = q5;
        self
    }

    pub fn with_q7_prizes(mut self, prizes: PrizePairs) -> Self {
        self.q7_prizes = prizes;
        self
    }
}

/// Checks one postulate exhaustively.
pub fn check_postulate(
    ps: &PreferenceStructure,
    id: Postulate,
    cfg: &CheckConfig,
) -> Result<CheckResult> {
    if ps.n_acts() > cfg.act_cap {
        return Err(Error::Budget {
            what: "act space",
            required: ps.n_acts() as u128,
            cap: cfg.act_cap as u128,
        });
    }
    let name = id.name();
    Ok(match id {
        Postulate::Q0 => CheckResult::from_witness(name, q0(ps)),
        Postulate::Q1 => CheckResult::from_witness(name, q1(ps)),
        Postulate::Q2 => CheckResult::from_witness(name, q2(ps)),
        Postulate::Q3 => CheckResult::from_witness(name, q3(ps)),
        Postulate::Q4 => CheckResult::from_witness(name, q4(ps, true)),
        Postulate::Q4Strong => CheckResult::from_witness(name, q4(ps, false)),
        Postulate::Q5 => {
            let primary = q5(ps, cfg.q5);
            let other_variant = match cfg.q5 {
                Q5Variant::NonEmpty => Q5Variant::NotNull,
                Q5Variant::NotNull => Q5Variant::NonEmpty,
            };
            let other = q5(ps, other_variant);
            let result = CheckResult::from_witness(name, primary.clone());
            let label = |v| match v {
                Q5Variant::NonEmpty => "non-empty",
                Q5Variant::NotNull => "not-null",
            };
            if primary.is_some() != other.is_some() {
                result.with_note(format!(
                    "hypothesis {}: {}; hypothesis {}: {}",
                    label(cfg.q5),
                    if primary.is_some() { "fail" } else { "pass" },
                    label(other_variant),
                    if other.is_some() { "fail" } else { "pass" },
                ))
            } else {
                result.with_note(format!("hypothesis {}", label(cfg.q5)))
            }
        }
        Postulate::Q6 => match q6(ps) {
            Some(w) => CheckResult::fail(name, w).with_note("no pair of constants d < c"),
            None => CheckResult::pass(name),
        },
        Postulate::Q7 => {
            let volume = q7_volume(ps, cfg.q7_prizes);
            budget("Q7 quantifier volume", volume, cfg.quantifier_cap)?;
            CheckResult::from_witness(name, q7(ps, cfg.q7_prizes)).with_volume(volume)
        }
        Postulate::R => {
            let pairs = ps.strict_constant_pairs().len() as u128;
            let volume = 4u128.pow(ps.n_states() as u32) * pairs * pairs;
            budget("R quantifier volume", volume, cfg.quantifier_cap)?;
            CheckResult::from_witness(name, r(ps)).with_volume(volume)
        }
    })
}

/// Runs several checks concurrently; results come back in input order.
pub fn check_postulates(
    ps: &PreferenceStructure,
    ids: &[Postulate],
    cfg: &CheckConfig,
) -> Result<Vec<CheckResult>> {
    // Force every table once so workers only read.
    for a in ps.events() {
        ps.table(a);
    }
    ids.par_iter().map(|&id| check_postulate(ps, id, cfg)).collect()
}

/// Returns the first failed postulate among `ids`, if any.
pub fn first_failure(
    ps: &PreferenceStructure,
    ids: &[Postulate],
    cfg: &CheckConfig,
) -> Result<Option<Postulate>> {
    for &id in ids {
        if !check_postulate(ps, id, cfg)?.passed() {
            return Ok(Some(id));
        }
    }
    Ok(None)
}

fn budget(what: &'static str, required: u128, cap: u128) -> Result<()> {
    if required > cap {
        return Err(Error::Budget {
            what,
            required,
            cap,
        });
    }
    Ok(())
}

fn disjoint_pairs(ps: &PreferenceStructure) -> impl Iterator<Item = (Event, Event)> + '_ {
    ps.events()
        .flat_map(move |a| ps.events().filter(move |b| a.is_disjoint(*b)).map(move |b| (a, b)))
}

fn q0(ps: &PreferenceStructure) -> Option<Witness> {
    for a in ps.events() {
        for f in 0..ps.n_acts() {
            if !ps.leq(a, f, f) {
                return Some(Witness::new().event("A", a).act("f", ps.act(f)));
            }
        }
    }
    None
}

fn first_bit(words: impl Iterator<Item = u64>) -> Option<usize> {
    for (i, w) in words.enumerate() {
        if w != 0 {
            return Some(i * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}

fn q1(ps: &PreferenceStructure) -> Option<Witness> {
    for a in ps.events() {
        let t = ps.table(a);
        for f in 0..ps.n_acts() {
            for g in 0..ps.n_acts() {
                if !t.get(f, g) {
                    continue;
                }
                // an h with g ≤ h but not f ≤ h
                let rf = t.row(f);
                let rg = t.row(g);
                if let Some(h) = first_bit(rg.iter().zip(rf).map(|(x, y)| x & !y)) {
                    return Some(
                        Witness::new()
                            .event("A", a)
                            .act("f", ps.act(f))
                            .act("g", ps.act(g))
                            .act("h", ps.act(h)),
                    );
                }
            }
        }
    }
    None
}

fn q2(ps: &PreferenceStructure) -> Option<Witness> {
    let sp = ps.space();
    for a in ps.events() {
        for f in 0..ps.n_acts() {
            for g in 0..ps.n_acts() {
                if sp.agree_on(f, g, a) && !ps.indiff(a, f, g) {
                    return Some(
                        Witness::new()
                            .event("A", a)
                            .act("f", ps.act(f))
                            .act("g", ps.act(g)),
                    );
                }
            }
        }
    }
    None
}

fn q3(ps: &PreferenceStructure) -> Option<Witness> {
    for (a, b) in disjoint_pairs(ps) {
        let ab = a.union(b);
        for f in 0..ps.n_acts() {
            for g in 0..ps.n_acts() {
                if ps.leq(a, f, g) && ps.indiff(b, f, g) && !ps.leq(ab, f, g) {
                    return Some(
                        Witness::new()
                            .event("A", a)
                            .event("B", b)
                            .act("f", ps.act(f))
                            .act("g", ps.act(g)),
                    );
                }
            }
        }
    }
    None
}

fn q4(ps: &PreferenceStructure, allow_negligible: bool) -> Option<Witness> {
    for (a, b) in disjoint_pairs(ps) {
        let ab = a.union(b);
        let mut negligible: Option<bool> = None;
        for f in 0..ps.n_acts() {
            for g in 0..ps.n_acts() {
                if ps.leq(ab, f, g) && ps.indiff(b, f, g) && !ps.leq(a, f, g) {
                    let escape = allow_negligible
                        && *negligible.get_or_insert_with(|| ps.negligible_unchecked(a, b));
                    if !escape {
                        return Some(
                            Witness::new()
                                .event("A", a)
                                .event("B", b)
                                .act("f", ps.act(f))
                                .act("g", ps.act(g)),
                        );
                    }
                }
            }
        }
    }
    None
}

fn q5(ps: &PreferenceStructure, variant: Q5Variant) -> Option<Witness> {
    let sp = ps.space();
    let m = ps.n_consequences();
    for c in 0..m {
        for d in 0..m {
            let (ci, di) = (sp.constant_index(c), sp.constant_index(d));
            for a in ps.events() {
                let qualifies = match variant {
                    Q5Variant::NonEmpty => !a.is_empty(),
                    Q5Variant::NotNull => !ps.null_by_table(a),
                };
                if !qualifies || !ps.leq(a, ci, di) {
                    continue;
                }
                if let Some(b) = ps.events().find(|&b| !ps.leq(b, ci, di)) {
                    return Some(
                        Witness::new()
                            .consequence("c", c)
                            .consequence("d", d)
                            .event("A", a)
                            .event("B", b),
                    );
                }
            }
        }
    }
    None
}

fn q6(ps: &PreferenceStructure) -> Option<Witness> {
    if ps.strict_constant_pairs().is_empty() {
        Some(Witness::new().event("S", ps.full_event()))
    } else {
        None
    }
}

/// Prize pairs `(c, d)` in canonical order.
pub(crate) fn q7_prize_pairs(ps: &PreferenceStructure, prizes: PrizePairs) -> Vec<(usize, usize)> {
    let m = ps.n_consequences();
    let mut out = Vec::new();
    for c in 0..m {
        for d in 0..m {
            let keep = match prizes {
                PrizePairs::All => c != d,
                PrizePairs::Ordered => ps.constant_lt(d, c),
            };
            if keep {
                out.push((c, d));
            }
        }
    }
    out
}

fn q7_volume(ps: &PreferenceStructure, prizes: PrizePairs) -> u128 {
    // each state lies in A, in B, in D only, or outside D
    let m = ps.n_consequences() as u128;
    let per_state = m + m + m * m + m.pow(4);
    q7_prize_pairs(ps, prizes).len() as u128 * per_state.pow(ps.n_states() as u32)
}

fn q7(ps: &PreferenceStructure, prizes: PrizePairs) -> Option<Witness> {
    let sp = ps.space();
    let n = ps.n_states();
    let pairs = q7_prize_pairs(ps, prizes);
    for (a, b) in disjoint_pairs(ps) {
        let ab = a.union(b);
        let rest = ab.complement(n);
        for extra in rest.subsets() {
            let d_event = ab.union(extra);
            let outside = d_event.complement(n);
            for &(c, d) in &pairs {
                let wa = sp.indicator_index(a, c, d);
                let wb = sp.indicator_index(b, c, d);
                if !ps.leq(ab, wa, wb) {
                    continue;
                }
                let fs = sp.variants(sp.constant_index(d), a.complement(n));
                let gs = sp.variants(sp.constant_index(d), b.complement(n));
                for &f in &fs {
                    for &g in &gs {
                        if !ps.leq(d_event, f, g) {
                            continue;
                        }
                        let f_primes = sp.variants(sp.overwrite(f, a, c), outside);
                        let g_primes = sp.variants(sp.overwrite(g, b, c), outside);
                        for &fp in &f_primes {
                            for &gp in &g_primes {
                                if !ps.leq(d_event, fp, gp) {
                                    return Some(
                                        Witness::new()
                                            .event("A", a)
                                            .event("B", b)
                                            .event("D", d_event)
                                            .consequence("c", c)
                                            .consequence("d", d)
                                            .act("f", ps.act(f))
                                            .act("g", ps.act(g))
                                            .act("f'", ps.act(fp))
                                            .act("g'", ps.act(gp)),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

fn r(ps: &PreferenceStructure) -> Option<Witness> {
    let sp = ps.space();
    let pairs = ps.strict_constant_pairs();
    for a in ps.events() {
        for b in ps.events() {
            let ab = a.union(b);
            for &(d, c) in &pairs {
                if !ps.leq(ab, sp.indicator_index(a, c, d), sp.indicator_index(b, c, d)) {
                    continue;
                }
                for &(d2, c2) in &pairs {
                    if !ps.leq(ab, sp.indicator_index(a, c2, d2), sp.indicator_index(b, c2, d2)) {
                        return Some(
                            Witness::new()
                                .event("A", a)
                                .event("B", b)
                                .consequence("c", c)
                                .consequence("d", d)
                                .consequence("c'", c2)
                                .consequence("d'", d2),
                        );
                    }
                }
            }
        }
    }
    None
}

/// Re-evaluates a reported witness: true iff it violates `id` in `ps`.
pub fn witness_violates(
    ps: &PreferenceStructure,
    id: Postulate,
    w: &Witness,
    cfg: &CheckConfig,
) -> Result<bool> {
    let sp = ps.space();
    let ev = |k: &str| {
        let e = w
            .get_event(k)
            .ok_or_else(|| Error::Input(format!("witness lacks event {k}")))?;
        sp.states().check_event(e)?;
        Ok::<_, Error>(e)
    };
    let act = |k: &str| {
        w.get_act(k)
            .ok_or_else(|| Error::Input(format!("witness lacks act {k}")))
            .and_then(|a| ps.index_of(a))
    };
    let con = |k: &str| {
        let c = w
            .get_consequence(k)
            .ok_or_else(|| Error::Input(format!("witness lacks consequence {k}")))?;
        sp.check_consequence(c)?;
        Ok::<_, Error>(c)
    };
    Ok(match id {
        Postulate::Q0 => !ps.leq(ev("A")?, act("f")?, act("f")?),
        Postulate::Q1 => {
            let (a, f, g, h) = (ev("A")?, act("f")?, act("g")?, act("h")?);
            ps.leq(a, f, g) && ps.leq(a, g, h) && !ps.leq(a, f, h)
        }
        Postulate::Q2 => {
            let (a, f, g) = (ev("A")?, act("f")?, act("g")?);
            sp.agree_on(f, g, a) && !ps.indiff(a, f, g)
        }
        Postulate::Q3 => {
            let (a, b, f, g) = (ev("A")?, ev("B")?, act("f")?, act("g")?);
            a.is_disjoint(b) && ps.leq(a, f, g) && ps.indiff(b, f, g) && !ps.leq(a.union(b), f, g)
        }
        Postulate::Q4 | Postulate::Q4Strong => {
            let (a, b, f, g) = (ev("A")?, ev("B")?, act("f")?, act("g")?);
            a.is_disjoint(b)
                && ps.leq(a.union(b), f, g)
                && ps.indiff(b, f, g)
                && !ps.leq(a, f, g)
                && (id == Postulate::Q4Strong || !ps.negligible_unchecked(a, b))
        }
        Postulate::Q5 => {
            let (c, d, a, b) = (con("c")?, con("d")?, ev("A")?, ev("B")?);
            let (ci, di) = (sp.constant_index(c), sp.constant_index(d));
            let qualifies = match cfg.q5 {
                Q5Variant::NonEmpty => !a.is_empty(),
                Q5Variant::NotNull => !ps.null_by_table(a),
            };
            qualifies && ps.leq(a, ci, di) && !ps.leq(b, ci, di)
        }
        Postulate::Q6 => ps.strict_constant_pairs().is_empty(),
        Postulate::Q7 => {
            let (a, b, d_event) = (ev("A")?, ev("B")?, ev("D")?);
            let (c, d) = (con("c")?, con("d")?);
            let (f, g, fp, gp) = (act("f")?, act("g")?, act("f'")?, act("g'")?);
            let prize_ok = match cfg.q7_prizes {
                PrizePairs::All => c != d,
                PrizePairs::Ordered => ps.constant_lt(d, c),
            };
            let ab = a.union(b);
            prize_ok
                && a.is_disjoint(b)
                && ab.is_subset_of(d_event)
                && ps.leq(ab, sp.indicator_index(a, c, d), sp.indicator_index(b, c, d))
                && sp.is_constant_on(f, a, d)
                && sp.is_constant_on(g, b, d)
                && sp.is_constant_on(fp, a, c)
                && sp.is_constant_on(gp, b, c)
                && sp.agree_on(fp, f, d_event.difference(a))
                && sp.agree_on(gp, g, d_event.difference(b))
                && ps.leq(d_event, f, g)
                && !ps.leq(d_event, fp, gp)
        }
        Postulate::R => {
            let (a, b) = (ev("A")?, ev("B")?);
            let (c, d, c2, d2) = (con("c")?, con("d")?, con("c'")?, con("d'")?);
            let ab = a.union(b);
            ps.constant_lt(d, c)
                && ps.constant_lt(d2, c2)
                && ps.leq(ab, sp.indicator_index(a, c, d), sp.indicator_index(b, c, d))
                && !ps.leq(ab, sp.indicator_index(a, c2, d2), sp.indicator_index(b, c2, d2))
        }
    })
}
