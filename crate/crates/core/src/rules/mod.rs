//! The concierge rule base: membership functions, agreement between the
//! session profile and spot impressions, rule routing, item selection with
//! the taboo list, and the rule net run on each turn.

mod membership;
mod net;
mod select;
mod taboo;

pub use membership::{Defuzzified, FvMembership, MembershipConfig, PiecewiseLinear, DEFUZZ_GRID};
pub use net::{compile_concierge_net, ConciergeNet, Evidence, NetOutcome, RuleCfConfig, CONSEQUENTS};
pub use select::{
    positivity_score, rank_food_gift, rank_spots_by_agreement, rank_spots_by_positivity, select_food_gift_case2,
    select_spots_case1, handle_talk_case3, Recommendation, SelectionContext, Selection, TalkOutcome, FEW_SPOTS,
    DISLIKE_THRESHOLD,
};
pub use taboo::{filter_taboo, TabooList};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::egc::EMOTION_COUNT;
use crate::fpn::FpnError;
use crate::parser::{CaseRoute, NounCategory};

#[derive(Debug, Error)]
pub enum RulesError {
    #[error("vector length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("membership function {path}: {message}")]
    Membership { path: String, message: String },
    #[error("certainty factor {key}: {message}")]
    CertaintyFactor { key: String, message: String },
    #[error("catalog has no candidate items")]
    NoCandidates,
    #[error(transparent)]
    Net(#[from] FpnError),
}

/// `1 - mean |profile_i - impression_i|` over the twenty emotion components.
pub fn agreement_value(profile: &[f64], impression: &[f64]) -> Result<f64, RulesError> {
    for v in [profile, impression] {
        if v.len() != EMOTION_COUNT {
            return Err(RulesError::LengthMismatch {
                expected: EMOTION_COUNT,
                got: v.len(),
            });
        }
    }
    let total: f64 = profile.iter().zip(impression).map(|(a, b)| (a - b).abs()).sum();
    Ok((1.0 - total / EMOTION_COUNT as f64).clamp(0.0, 1.0))
}

/// The eight production rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
}

impl Rule {
    pub const ALL: [Rule; 8] = [Rule::R1, Rule::R2, Rule::R3, Rule::R4, Rule::R5, Rule::R6, Rule::R7, Rule::R8];

    pub fn id(self) -> &'static str {
        match self {
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::R4 => "R4",
            Rule::R5 => "R5",
            Rule::R6 => "R6",
            Rule::R7 => "R7",
            Rule::R8 => "R8",
        }
    }
}

/// Picks the rule a turn falls under. Total over every input combination.
pub fn route(case: CaseRoute, category: Option<NounCategory>, negative: bool) -> Rule {
    match case {
        CaseRoute::Case1 => match category {
            Some(NounCategory::Spot) if negative => Rule::R2,
            Some(NounCategory::Spot) => Rule::R1,
            Some(NounCategory::Food | NounCategory::Gift) => Rule::R3,
            Some(NounCategory::Other) | None if negative => Rule::R5,
            Some(NounCategory::Other) | None => Rule::R4,
        },
        CaseRoute::Case2 => Rule::R6,
        CaseRoute::Case3 if negative => Rule::R7,
        CaseRoute::Case3 => Rule::R8,
    }
}

/// Where a non-negative small-talk turn continues.
pub fn reroute_after_talk(category: Option<NounCategory>) -> CaseRoute {
    match category {
        Some(NounCategory::Food | NounCategory::Gift) => CaseRoute::Case2,
        _ => CaseRoute::Case1,
    }
}
