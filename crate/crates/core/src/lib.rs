//! Finite-model toolkit for partially ordered preferences over acts and the
//! plausibility relations on events they induce.

pub mod bits;
pub mod bridge;
pub mod check;
pub mod corpus;
pub mod error;
pub mod format;
pub mod gqp;
pub mod models;
pub mod preference;
pub mod search;
pub mod space;

pub use bits::BitMatrix;
pub use check::{CheckResult, Verdict, Witness, WitnessValue};
pub use error::{Error, Result};
pub use gqp::{check_gqp, classify, EventRelation, FamilyFlags, GqpProperty};
pub use preference::{CheckConfig, Outcome, Postulate, PreferenceStructure, PrizePairs, Q5Variant};
pub use space::{Act, ConsequenceSpace, DecisionSpace, Event, StateSpace};
