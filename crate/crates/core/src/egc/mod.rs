//! Emotion generating calculations.
//!
//! A case frame is mapped onto three axes using the favorite values of its
//! terms, the octant of the resulting vector gives pleasure or displeasure,
//! and situational flags refine that into one of twenty emotion types.

mod axes;
mod emotion;
mod favorite;
mod frame;

pub use axes::{assign_axes, axis_is_blank, intensity, valence, AxisAssignment, EmotionAxes, Valence, BETA};
pub use emotion::{
    classify, emotion_to_vector20, evaluate, Agent, Approval, EmotionGroup, EmotionResult, EmotionType,
    EmotionVector, Evaluation, OtherFortune, Prospect, SituationFlags, Target, EMOTION_COUNT,
};
pub use favorite::{normalize_term, FavoriteValue, FvDatabase, FvLookup};
pub use frame::{CaseFrame, DeepCase, EventType};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EgcError {
    #[error("favorite value {0} outside [-1,1]")]
    FavoriteValueRange(f64),
    #[error("unknown event type `{0}`")]
    UnknownEventType(String),
    #[error("{event_type} frame is missing its {} slot", slot.as_str())]
    MissingSlot { event_type: EventType, slot: DeepCase },
    #[error("inconsistent situation flags: {0}")]
    InconsistentFlags(String),
}
