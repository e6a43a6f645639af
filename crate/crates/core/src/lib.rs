//! Emotion-oriented tourist concierge.
//!
//! Utterances are parsed into case frames, appraised into one of twenty
//! emotion types, and fed as fuzzy evidence into a rule base that runs on a
//! fuzzy Petri net to pick spots, local food and gifts.

pub mod catalog;
pub mod dialog;
pub mod egc;
pub mod emotion_state;
pub mod fpn;
pub mod parser;
pub mod rules;
pub mod session;

pub use catalog::{load_bundle, BundleError, Catalog, CatalogBundle, CatalogSummary, ItemKind, SpotRecord};
pub use dialog::{Concierge, DialogError, TurnResponse};
pub use egc::{EmotionResult, EmotionType, EmotionVector, FvDatabase, SituationFlags, Valence};
pub use emotion_state::{EmotionProfile, MentalState, MstnConfig};
pub use fpn::{FuzzyPetriNet, Marking, ReasoningConfig, RuleSpec};
pub use parser::{CaseRoute, Lexicon, NounCategory, ParsedUtterance};
pub use rules::{Recommendation, Rule, TabooList};
pub use session::{SessionState, SessionStore, StoreError, TurnRecord};
