//! The twenty emotion types and the situational classification of
//! pleasure/displeasure into them.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::axes::{assign_axes, intensity, valence, EmotionAxes, Valence};
use super::favorite::FvDatabase;
use super::frame::CaseFrame;
use super::EgcError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EmotionGroup {
    #[serde(rename = "Well-Being")]
    WellBeing,
    #[serde(rename = "Fortunes-of-Others")]
    FortunesOfOthers,
    #[serde(rename = "Prospect-based")]
    ProspectBased,
    #[serde(rename = "Confirmation")]
    Confirmation,
    #[serde(rename = "Attribution")]
    Attribution,
    #[serde(rename = "Well-Being/Attribution")]
    WellBeingAttribution,
}

impl EmotionGroup {
    pub const ALL: [EmotionGroup; 6] = [
        EmotionGroup::WellBeing,
        EmotionGroup::FortunesOfOthers,
        EmotionGroup::ProspectBased,
        EmotionGroup::Confirmation,
        EmotionGroup::Attribution,
        EmotionGroup::WellBeingAttribution,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EmotionGroup::WellBeing => "Well-Being",
            EmotionGroup::FortunesOfOthers => "Fortunes-of-Others",
            EmotionGroup::ProspectBased => "Prospect-based",
            EmotionGroup::Confirmation => "Confirmation",
            EmotionGroup::Attribution => "Attribution",
            EmotionGroup::WellBeingAttribution => "Well-Being/Attribution",
        }
    }

    pub fn members(self) -> &'static [EmotionType] {
        use EmotionType::*;
        match self {
            EmotionGroup::WellBeing => &[Joy, Distress],
            EmotionGroup::FortunesOfOthers => &[HappyFor, Gloating, Resentment, SorryFor],
            EmotionGroup::ProspectBased => &[Hope, Fear],
            EmotionGroup::Confirmation => &[Satisfaction, Relief, FearsConfirmed, Disappointment],
            EmotionGroup::Attribution => &[Pride, Admiration, Shame, Disliking],
            EmotionGroup::WellBeingAttribution => &[Gratitude, Anger, Gratification, Remorse],
        }
    }
}

impl fmt::Display for EmotionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The twenty emotion types. Declaration order is the fixed index order of
/// 20-d emotion vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmotionType {
    Joy,
    Distress,
    HappyFor,
    Gloating,
    Resentment,
    SorryFor,
    Hope,
    Fear,
    Satisfaction,
    Relief,
    FearsConfirmed,
    Disappointment,
    Pride,
    Admiration,
    Shame,
    Disliking,
    Gratitude,
    Anger,
    Gratification,
    Remorse,
}

pub const EMOTION_COUNT: usize = 20;

impl EmotionType {
    pub const ALL: [EmotionType; EMOTION_COUNT] = [
        EmotionType::Joy,
        EmotionType::Distress,
        EmotionType::HappyFor,
        EmotionType::Gloating,
        EmotionType::Resentment,
        EmotionType::SorryFor,
        EmotionType::Hope,
        EmotionType::Fear,
        EmotionType::Satisfaction,
        EmotionType::Relief,
        EmotionType::FearsConfirmed,
        EmotionType::Disappointment,
        EmotionType::Pride,
        EmotionType::Admiration,
        EmotionType::Shame,
        EmotionType::Disliking,
        EmotionType::Gratitude,
        EmotionType::Anger,
        EmotionType::Gratification,
        EmotionType::Remorse,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EmotionType::Joy => "joy",
            EmotionType::Distress => "distress",
            EmotionType::HappyFor => "happy-for",
            EmotionType::Gloating => "gloating",
            EmotionType::Resentment => "resentment",
            EmotionType::SorryFor => "sorry-for",
            EmotionType::Hope => "hope",
            EmotionType::Fear => "fear",
            EmotionType::Satisfaction => "satisfaction",
            EmotionType::Relief => "relief",
            EmotionType::FearsConfirmed => "fears-confirmed",
            EmotionType::Disappointment => "disappointment",
            EmotionType::Pride => "pride",
            EmotionType::Admiration => "admiration",
            EmotionType::Shame => "shame",
            EmotionType::Disliking => "disliking",
            EmotionType::Gratitude => "gratitude",
            EmotionType::Anger => "anger",
            EmotionType::Gratification => "gratification",
            EmotionType::Remorse => "remorse",
        }
    }

    pub fn group(self) -> EmotionGroup {
        EmotionGroup::ALL
            .into_iter()
            .find(|g| g.members().contains(&self))
            .expect("every emotion type belongs to a group")
    }

    /// Fixed valence of the type, independent of any particular appraisal.
    pub fn is_negative(self) -> bool {
        use EmotionType::*;
        matches!(
            self,
            Distress
                | Resentment
                | SorryFor
                | Fear
                | FearsConfirmed
                | Disappointment
                | Shame
                | Disliking
                | Anger
                | Remorse
        )
    }
}

impl fmt::Display for EmotionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    #[default]
    #[serde(rename = "self")]
    Own,
    Other,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OtherFortune {
    Desirable,
    Undesirable,
    #[default]
    None,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prospect {
    #[default]
    None,
    Prospective,
    Confirmed,
    Disconfirmed,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Agent {
    #[default]
    None,
    #[serde(rename = "self")]
    Own,
    Other,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Approval {
    Approved,
    Disapproved,
    #[default]
    None,
}

/// Situation of the event beyond its pleasantness.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default)]
pub struct SituationFlags {
    pub target: Target,
    pub other_fortune: OtherFortune,
    pub prospect: Prospect,
    pub agent: Agent,
    pub approval: Approval,
}

impl SituationFlags {
    pub fn validate(&self) -> Result<(), EgcError> {
        if self.target == Target::Own && self.other_fortune != OtherFortune::None {
            return Err(EgcError::InconsistentFlags(
                "other_fortune requires target=other".into(),
            ));
        }
        Ok(())
    }

    /// Every flag combination, including ones `validate` rejects.
    pub fn all() -> Vec<SituationFlags> {
        let mut out = Vec::new();
        for target in [Target::Own, Target::Other] {
            for other_fortune in [OtherFortune::Desirable, OtherFortune::Undesirable, OtherFortune::None] {
                for prospect in [Prospect::None, Prospect::Prospective, Prospect::Confirmed, Prospect::Disconfirmed] {
                    for agent in [Agent::None, Agent::Own, Agent::Other] {
                        for approval in [Approval::Approved, Approval::Disapproved, Approval::None] {
                            out.push(SituationFlags { target, other_fortune, prospect, agent, approval });
                        }
                    }
                }
            }
        }
        out
    }
}

/// Classifies a valence into one of the twenty emotion types.
///
/// Checked in order: prospect, fortunes of others, agent with approval
/// (compound), approval alone, plain well-being. A fortune flag only counts
/// when the target is another person.
pub fn classify(valence: Valence, flags: &SituationFlags) -> Option<EmotionType> {
    use EmotionType::*;
    let pleased = match valence {
        Valence::Neutral => return None,
        Valence::Pleasure => true,
        Valence::Displeasure => false,
    };
    let pick = |yes: EmotionType, no: EmotionType| Some(if pleased { yes } else { no });

    match flags.prospect {
        Prospect::Prospective => return pick(Hope, Fear),
        Prospect::Confirmed => return pick(Satisfaction, FearsConfirmed),
        Prospect::Disconfirmed => return pick(Relief, Disappointment),
        Prospect::None => {}
    }
    if flags.target == Target::Other {
        match flags.other_fortune {
            OtherFortune::Desirable => return pick(HappyFor, Resentment),
            OtherFortune::Undesirable => return pick(Gloating, SorryFor),
            OtherFortune::None => {}
        }
    }
    if flags.approval != Approval::None {
        return match flags.agent {
            Agent::Own => pick(Gratification, Remorse),
            Agent::Other => pick(Gratitude, Anger),
            Agent::None if flags.target == Target::Other => pick(Admiration, Disliking),
            Agent::None => pick(Pride, Shame),
        };
    }
    pick(Joy, Distress)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmotionResult {
    pub emotion: Option<EmotionType>,
    pub valence: Valence,
    pub intensity: f64,
}

impl EmotionResult {
    pub fn neutral() -> Self {
        Self {
            emotion: None,
            valence: Valence::Neutral,
            intensity: 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.valence == Valence::Displeasure
    }
}

/// Full appraisal of one frame, with the intermediate axes.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub result: EmotionResult,
    pub axes: EmotionAxes,
    pub unknown_terms: Vec<String>,
}

pub fn evaluate(
    frame: &CaseFrame,
    flags: &SituationFlags,
    db: &FvDatabase,
    person: Option<&str>,
) -> Result<Evaluation, EgcError> {
    let assignment = assign_axes(frame, db, person)?;
    let valence = valence(&assignment.axes);
    let result = match classify(valence, flags) {
        Some(emotion) => EmotionResult {
            emotion: Some(emotion),
            valence,
            intensity: intensity(&assignment.axes),
        },
        None => EmotionResult::neutral(),
    };
    Ok(Evaluation {
        result,
        axes: assignment.axes,
        unknown_terms: assignment.unknown_terms,
    })
}

/// Twenty emotion strengths in [`EmotionType::ALL`] order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EmotionVector(pub [f64; EMOTION_COUNT]);

impl Default for EmotionVector {
    fn default() -> Self {
        Self([0.0; EMOTION_COUNT])
    }
}

impl EmotionVector {
    pub fn get(&self, e: EmotionType) -> f64 {
        self.0[e.index()]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn from_slice(values: &[f64]) -> Option<Self> {
        <[f64; EMOTION_COUNT]>::try_from(values).ok().map(Self)
    }

    /// Summed strength of negatively and positively typed emotions.
    pub fn valence_mass(&self) -> (f64, f64) {
        EmotionType::ALL.iter().fold((0.0, 0.0), |(neg, pos), e| {
            if e.is_negative() {
                (neg + self.get(*e), pos)
            } else {
                (neg, pos + self.get(*e))
            }
        })
    }
}

/// One-hot vector at the emotion's index scaled by intensity; zero if neutral.
pub fn emotion_to_vector20(result: &EmotionResult) -> EmotionVector {
    let mut v = EmotionVector::default();
    if let Some(e) = result.emotion {
        v.0[e.index()] = result.intensity.clamp(0.0, 1.0);
    }
    v
}
