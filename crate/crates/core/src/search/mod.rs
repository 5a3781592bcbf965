//! Enumeration of generalized qualitative probabilities on small state
//! spaces and verdict procedures for two open questions about them.
//!
//! Verdicts only ever speak about the instances searched.

pub mod enumerate;
pub mod extensions;
pub mod partial;
pub mod q7;

use serde::{Deserialize, Serialize};

use crate::check::Witness;

pub use enumerate::{enumerate_gqps, enumerate_gqps_with, sample_gqps, Enumeration, SearchStats};
pub use extensions::{
    check_intersection_conjecture, extends, intersect_all, reverify_intersection_evidence, total_extensions,
    Extensions,
};
pub use partial::{Contradiction, Entry, PartialRelation, Rule};
pub use q7::{reverify_q7_evidence, search_q7_independence, Q7SearchConfig};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConjectureStatus {
    HoldsOnInstance,
    CounterexampleFound,
    Inconclusive,
}

impl ConjectureStatus {
    pub fn name(self) -> &'static str {
        match self {
            ConjectureStatus::HoldsOnInstance => "holds-on-instance",
            ConjectureStatus::CounterexampleFound => "counterexample-found",
            ConjectureStatus::Inconclusive => "inconclusive",
        }
    }
}

/// A counterexample in text format v1 with the entries that exhibit it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub description: String,
    pub document: String,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureVerdict {
    pub conjecture: String,
    pub status: ConjectureStatus,
    pub evidence: Option<Evidence>,
    pub nodes_explored: u64,
    pub seed: Option<u64>,
    pub stats: Vec<(String, u64)>,
}

impl ConjectureVerdict {
    pub(crate) fn new(conjecture: &str, nodes_explored: u64) -> Self {
        Self {
            conjecture: conjecture.into(),
            status: ConjectureStatus::Inconclusive,
            evidence: None,
            nodes_explored,
            seed: None,
            stats: Vec::new(),
        }
    }

    pub fn stat(&self, key: &str) -> Option<u64> {
        self.stats.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }
}
