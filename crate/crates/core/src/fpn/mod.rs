//! Fuzzy Petri nets: places carry truth degrees of propositions, transitions
//! carry certainty factors, and reasoning propagates degrees with
//! `min(inputs) * mu` merged by `max` on each output place.
//!
//! Truth degrees persist once derived. A transition fires whenever all its
//! inputs reach the threshold, so one antecedent can feed any number of
//! rules, and the reasoner runs to the least fixpoint above the initial
//! marking.

mod export;
mod net;
mod reasoner;
mod rules;

pub use export::{export_dot, marking_from_json, net_from_json, net_to_json, NetDocument};
pub use net::{FuzzyPetriNet, Marking, Place, Proposition, Transition};
pub use reasoner::{enabled, fire, produced_degree, FiringRecord, FiringTrace, ReasoningConfig};
pub use rules::{compile_rules, place_id, RuleSpec, RuleType};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FpnError {
    #[error("invalid net at {path}: {message}")]
    Validation { path: String, message: String },
    #[error("rule type {0} is not supported")]
    UnsupportedRuleType(String),
    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),
    #[error("unknown place `{0}`")]
    UnknownPlace(String),
    #[error("degree {degree} for place `{place}` outside [0,1]")]
    DegreeOutOfRange { place: String, degree: f64 },
    #[error("reasoning did not settle within {iterations} passes")]
    BudgetExceeded { iterations: usize },
    #[error("malformed document at {path}: {source}")]
    Malformed {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}
