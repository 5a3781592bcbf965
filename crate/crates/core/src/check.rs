//! Verdicts and witnesses shared by every checker.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::space::{Act, Event};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum WitnessValue {
    Event(Event),
    Act(Act),
    Consequence(usize),
}

/// A named tuple of events, acts and consequences violating a quantified claim.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub entries: Vec<(String, WitnessValue)>,
}

impl Witness {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn event(mut self, name: &str, e: Event) -> Self {
        self.entries.push((name.to_owned(), WitnessValue::Event(e)));
        self
    }

    pub fn act(mut self, name: &str, a: Act) -> Self {
        self.entries.push((name.to_owned(), WitnessValue::Act(a)));
        self
    }

    pub fn consequence(mut self, name: &str, c: usize) -> Self {
        self.entries
            .push((name.to_owned(), WitnessValue::Consequence(c)));
        self
    }

    pub fn get_event(&self, name: &str) -> Option<Event> {
        self.entries.iter().find_map(|(k, v)| match v {
            WitnessValue::Event(e) if k == name => Some(*e),
            _ => None,
        })
    }

    pub fn get_act(&self, name: &str) -> Option<&Act> {
        self.entries.iter().find_map(|(k, v)| match v {
            WitnessValue::Act(a) if k == name => Some(a),
            _ => None,
        })
    }

    pub fn get_consequence(&self, name: &str) -> Option<usize> {
        self.entries.iter().find_map(|(k, v)| match v {
            WitnessValue::Consequence(c) if k == name => Some(*c),
            _ => None,
        })
    }

    /// Human-readable rendering with events as bitstrings.
    pub fn render(&self, n_states: usize) -> String {
        self.entries
            .iter()
            .map(|(k, v)| match v {
                WitnessValue::Event(e) => format!("{k}={}", e.to_bitstring(n_states)),
                WitnessValue::Act(a) => format!(
                    "{k}=({})",
                    a.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                ),
                WitnessValue::Consequence(c) => format!("{k}={c}"),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    /// Identifier of the checked claim, e.g. `Q3` or `lemma-14.subset`.
    pub check: String,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub note: String,
    /// Number of quantified tuples visited, when meaningful.
    pub volume: Option<u128>,
}

impl CheckResult {
    pub fn pass(check: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            verdict: Verdict::Pass,
            witness: None,
            note: String::new(),
            volume: None,
        }
    }

    pub fn fail(check: impl Into<String>, witness: Witness) -> Self {
        Self {
            check: check.into(),
            verdict: Verdict::Fail,
            witness: Some(witness),
            note: String::new(),
            volume: None,
        }
    }

    pub fn inconclusive(check: impl Into<String>, note: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            verdict: Verdict::Inconclusive,
            witness: None,
            note: note.into(),
            volume: None,
        }
    }

    pub fn from_witness(check: impl Into<String>, witness: Option<Witness>) -> Self {
        match witness {
            Some(w) => Self::fail(check, w),
            None => Self::pass(check),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn with_volume(mut self, volume: u128) -> Self {
        self.volume = Some(volume);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}
