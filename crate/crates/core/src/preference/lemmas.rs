//! Brute-force verification of the consequences the postulates are claimed to
//! have on preference structures.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::postulates::{first_failure, CheckConfig, Postulate};
use super::PreferenceStructure;
use crate::bridge::two_valued_leq;
use crate::check::{CheckResult, Witness};
use crate::error::{Error, Result};
use crate::space::Event;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PreferenceLemma {
    /// Equivalent acts are interchangeable given `A`.
    Lemma1,
    /// The empty event carries the trivial relation.
    Lemma2,
    Corollary1,
    Corollary2,
    Corollary3,
    Corollary4,
    /// Weak preference on disjoint parts lifts to the union.
    Lemma3,
    /// Strict preference on disjoint parts lifts to the union.
    Lemma4,
    /// Sure Thing Principle.
    Lemma5,
    Lemma6,
    Lemma7,
}

impl PreferenceLemma {
    pub const ALL: [PreferenceLemma; 11] = [
        PreferenceLemma::Lemma1,
        PreferenceLemma::Lemma2,
        PreferenceLemma::Corollary1,
        PreferenceLemma::Corollary2,
        PreferenceLemma::Corollary3,
        PreferenceLemma::Corollary4,
        PreferenceLemma::Lemma3,
        PreferenceLemma::Lemma4,
        PreferenceLemma::Lemma5,
        PreferenceLemma::Lemma6,
        PreferenceLemma::Lemma7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PreferenceLemma::Lemma1 => "lemma-1",
            PreferenceLemma::Lemma2 => "lemma-2",
            PreferenceLemma::Corollary1 => "corollary-1",
            PreferenceLemma::Corollary2 => "corollary-2",
            PreferenceLemma::Corollary3 => "corollary-3",
            PreferenceLemma::Corollary4 => "corollary-4",
            PreferenceLemma::Lemma3 => "lemma-3",
            PreferenceLemma::Lemma4 => "lemma-4",
            PreferenceLemma::Lemma5 => "lemma-5",
            PreferenceLemma::Lemma6 => "lemma-6",
            PreferenceLemma::Lemma7 => "lemma-7",
        }
    }

    /// Postulates the statement relies on.
    pub fn assumptions(self) -> &'static [Postulate] {
        use Postulate::*;
        match self {
            PreferenceLemma::Lemma1 => &[Q1, Q2],
            PreferenceLemma::Lemma2 => &[Q2],
            PreferenceLemma::Corollary1 => &[Q3],
            PreferenceLemma::Corollary2 => &[Q4],
            PreferenceLemma::Corollary3 | PreferenceLemma::Corollary4 => &[Q3, Q4],
            PreferenceLemma::Lemma3 => &[Q1, Q2, Q3],
            PreferenceLemma::Lemma4 | PreferenceLemma::Lemma5 => &[Q1, Q2, Q3, Q4],
            PreferenceLemma::Lemma6 => &[Q2, Q3],
            PreferenceLemma::Lemma7 => &[Q1, Q2, Q3, Q4, Q5, Q6],
        }
    }
}

impl fmt::Display for PreferenceLemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PreferenceLemma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PreferenceLemma::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown preference lemma {s:?}")))
    }
}

/// Checks a lemma on `ps` after confirming the postulates it assumes.
pub fn verify_preference_lemma(
    ps: &PreferenceStructure,
    id: PreferenceLemma,
    cfg: &CheckConfig,
) -> Result<CheckResult> {
    if let Some(failed) = first_failure(ps, id.assumptions(), cfg)? {
        return Ok(CheckResult::inconclusive(
            id.name(),
            format!("assumed postulate {failed} does not hold"),
        ));
    }
    let witness = match id {
        PreferenceLemma::Lemma1 => lemma1(ps),
        PreferenceLemma::Lemma2 => lemma2(ps),
        PreferenceLemma::Corollary1 => disjoint_scan(ps, |ps, a, b, f, g| {
            ps.indiff(a, f, g) && ps.indiff(b, f, g) && !ps.indiff(a.union(b), f, g)
        }),
        PreferenceLemma::Corollary2 => disjoint_scan(ps, |ps, a, b, f, g| {
            ps.indiff(a.union(b), f, g)
                && ps.indiff(b, f, g)
                && !ps.indiff(a, f, g)
                && !ps.negligible_unchecked(a, b)
        }),
        PreferenceLemma::Corollary3 => disjoint_scan(ps, |ps, a, b, f, g| {
            ps.lt(a, f, g)
                && ps.indiff(b, f, g)
                && !ps.lt(a.union(b), f, g)
                && !ps.negligible_unchecked(a, b)
        }),
        PreferenceLemma::Corollary4 => disjoint_scan(ps, |ps, a, b, f, g| {
            ps.lt(a.union(b), f, g) && ps.indiff(b, f, g) && !ps.lt(a, f, g)
        }),
        PreferenceLemma::Lemma3 => disjoint_scan(ps, |ps, a, b, f, g| {
            ps.leq(a, f, g) && ps.leq(b, f, g) && !ps.leq(a.union(b), f, g)
        }),
        PreferenceLemma::Lemma4 => disjoint_scan(ps, |ps, a, b, f, g| {
            ps.lt(a, f, g) && ps.lt(b, f, g) && !ps.lt(a.union(b), f, g)
        }),
        PreferenceLemma::Lemma5 => lemma5(ps),
        PreferenceLemma::Lemma6 => lemma6(ps),
        PreferenceLemma::Lemma7 => lemma7(ps),
    };
    let result = CheckResult::from_witness(id.name(), witness);
    Ok(if result.failed() {
        result.with_note(format!(
            "violated on a structure satisfying {}; this contradicts the stated result",
            id.assumptions()
                .iter()
                .map(|p| p.name())
                .collect::<Vec<_>>()
                .join(", ")
        ))
    } else {
        result
    })
}

fn lemma1(ps: &PreferenceStructure) -> Option<Witness> {
    let sp = ps.space();
    let n = ps.n_states();
    for a in ps.events() {
        let free = a.complement(n);
        for f in 0..ps.n_acts() {
            for g in 0..ps.n_acts() {
                if !ps.leq(a, f, g) {
                    continue;
                }
                for fp in sp.variants(f, free) {
                    for gp in sp.variants(g, free) {
                        if !ps.leq(a, fp, gp) {
                            return Some(
                                Witness::new()
                                    .event("A", a)
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
    None
}

fn lemma2(ps: &PreferenceStructure) -> Option<Witness> {
    for h in 0..ps.n_acts() {
        for h2 in 0..ps.n_acts() {
            if !ps.leq(Event::EMPTY, h, h2) {
                return Some(Witness::new().act("h", ps.act(h)).act("h'", ps.act(h2)));
            }
        }
    }
    None
}

/// Scans disjoint `(A, B)` and act pairs for a violation of `bad`.
fn disjoint_scan(
    ps: &PreferenceStructure,
    bad: impl Fn(&PreferenceStructure, Event, Event, usize, usize) -> bool,
) -> Option<Witness> {
    for a in ps.events() {
        for b in ps.events().filter(|b| a.is_disjoint(*b)) {
            for f in 0..ps.n_acts() {
                for g in 0..ps.n_acts() {
                    if bad(ps, a, b, f, g) {
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

fn lemma5(ps: &PreferenceStructure) -> Option<Witness> {
    let sp = ps.space();
    let n = ps.n_states();
    for a in ps.events() {
        for b in ps.events().filter(|b| a.is_disjoint(*b)) {
            let ab = a.union(b);
            let outside = ab.complement(n);
            for f in 0..ps.n_acts() {
                for g in 0..ps.n_acts() {
                    if !sp.agree_on(f, g, b) || !ps.leq(ab, f, g) {
                        continue;
                    }
                    for fp in sp.variants(f, a.complement(n)) {
                        // g' is g on A, f' on B, anything elsewhere
                        let base = sp.splice(sp.splice(g, fp, b), g, a);
                        for gp in sp.variants(base, outside) {
                            if !ps.leq(ab, fp, gp) {
                                return Some(
                                    Witness::new()
                                        .event("A", a)
                                        .event("B", b)
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
    None
}

fn lemma6(ps: &PreferenceStructure) -> Option<Witness> {
    let sp = ps.space();
    let n = ps.n_states();
    let m = ps.n_consequences();
    for a in ps.events() {
        for b in ps.events() {
            let ab = a.union(b);
            for extra in ab.complement(n).subsets() {
                let d_event = ab.union(extra);
                for c in 0..m {
                    for d in 0..m {
                        let (wa, wb) = (sp.indicator_index(a, c, d), sp.indicator_index(b, c, d));
                        if ps.leq(ab, wa, wb) && !ps.leq(d_event, wa, wb) {
                            return Some(
                                Witness::new()
                                    .event("A", a)
                                    .event("B", b)
                                    .event("D", d_event)
                                    .consequence("c", c)
                                    .consequence("d", d),
                            );
                        }
                    }
                }
            }
        }
    }
    None
}

fn lemma7(ps: &PreferenceStructure) -> Option<Witness> {
    let sp = ps.space();
    let m = ps.n_consequences();
    let pairs = ps.strict_constant_pairs();
    for a in ps.events() {
        for b in ps.events() {
            if !two_valued_leq(ps, &pairs, a, b) {
                continue;
            }
            let ab = a.union(b);
            for c in 0..m {
                for d in 0..m {
                    if ps.constant_leq(c, d)
                        && !ps.leq(ab, sp.indicator_index(b, c, d), sp.indicator_index(a, c, d))
                    {
                        return Some(
                            Witness::new()
                                .event("A", a)
                                .event("B", b)
                                .consequence("c", c)
                                .consequence("d", d),
                        );
                    }
                }
            }
        }
    }
    None
}
