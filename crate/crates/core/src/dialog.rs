//! One dialog turn end to end: parse, appraise, update the session's affect,
//! select items under the rules and run the rule net on the same evidence.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{CatalogBundle, ItemKind};
use crate::egc::{emotion_to_vector20, evaluate, EgcError, EmotionAxes, EmotionResult, EmotionVector, SituationFlags};
use crate::emotion_state::MentalState;
use crate::fpn::ReasoningConfig;
use crate::parser::{CaseRoute, NounCategory, ParseError, ParsedUtterance};
use crate::rules::{
    agreement_value, filter_taboo, handle_talk_case3, select_food_gift_case2, select_spots_case1, ConciergeNet,
    Evidence, Recommendation, RulesError, Selection, SelectionContext, DISLIKE_THRESHOLD,
};
use crate::session::{new_session_id, SessionState, TurnRecord};

#[derive(Debug, Error)]
pub enum DialogError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Egc(#[from] EgcError),
    #[error(transparent)]
    Rules(#[from] RulesError),
}

/// What a turn produced. Mirrors the session state after the turn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnResponse {
    pub session_id: String,
    pub turn: usize,
    pub reply: String,
    pub parsed: ParsedUtterance,
    pub emotion: EmotionResult,
    pub axes: EmotionAxes,
    pub profile: EmotionVector,
    pub mood: MentalState,
    pub recommendations: Vec<Recommendation>,
    pub taboo: Vec<String>,
    /// Production rules applied by the selection, in order.
    pub fired_rules: Vec<String>,
    /// Net transitions that raised a degree, in firing order.
    pub net_transitions: Vec<String>,
    /// Degrees of the net's conclusion places.
    pub net_degrees: BTreeMap<String, f64>,
    pub diagnostics: Vec<String>,
}

/// The concierge: a loaded bundle plus the compiled rule net.
#[derive(Debug, Clone)]
pub struct Concierge {
    bundle: CatalogBundle,
    net: ConciergeNet,
    reasoning: ReasoningConfig,
}

impl Concierge {
    pub fn new(bundle: CatalogBundle) -> Result<Self, RulesError> {
        let net = ConciergeNet::new(&bundle.rules_cf)?;
        Ok(Self {
            bundle,
            net,
            reasoning: ReasoningConfig::default(),
        })
    }

    pub fn with_reasoning(mut self, reasoning: ReasoningConfig) -> Result<Self, RulesError> {
        reasoning.validate()?;
        self.reasoning = reasoning;
        Ok(self)
    }

    pub fn bundle(&self) -> &CatalogBundle {
        &self.bundle
    }

    pub fn net(&self) -> &ConciergeNet {
        &self.net
    }

    pub fn new_session(&self, person_id: Option<String>) -> SessionState {
        SessionState::new(new_session_id(), person_id, self.bundle.mstn.initial_state())
    }

    /// Runs one turn and records it in `state`. On error `state` is untouched.
    pub fn process_turn(
        &self,
        state: &mut SessionState,
        text: &str,
        flags: Option<SituationFlags>,
    ) -> Result<TurnResponse, DialogError> {
        let b = &self.bundle;
        let flags = flags.unwrap_or_default();
        flags.validate()?;
        let parsed = b.lexicon.parse(text)?;
        let person = state.person_id.as_deref();
        let eval = evaluate(&parsed.frame, &flags, &b.fv, person)?;
        let mut diagnostics: Vec<String> = eval
            .unknown_terms
            .iter()
            .map(|t| format!("no favorite value for `{t}`, read as 0"))
            .collect();

        let profile = state.profile.update(&emotion_to_vector20(&eval.result));
        let mood = b.mstn.update_mood(&state.mood, &eval.result);
        diagnostics.extend(mood.note.clone());
        let negative = eval.result.is_negative();

        let mut ctx = SelectionContext {
            catalog: &b.catalog,
            fv: &b.fv,
            person,
            membership: &b.membership,
            profile: &profile.vector,
            taboo: state.taboo.clone(),
        };
        let selection: Selection = match parsed.case_route {
            CaseRoute::Case1 => select_spots_case1(&mut ctx, &parsed, negative)?,
            CaseRoute::Case2 => select_food_gift_case2(&ctx, &parsed),
            CaseRoute::Case3 => handle_talk_case3(&mut ctx, &parsed, negative).selection,
        };
        let evidence = self.evidence(&ctx, &parsed, negative, &selection)?;
        let outcome = self.net.evaluate(&evidence, &self.reasoning)?;
        let taboo = ctx.taboo;
        let recommendations = filter_taboo(selection.recommendations, &taboo);
        diagnostics.extend(selection.diagnostics);
        let fired_rules: Vec<String> = selection.rules.iter().map(|r| r.id().to_string()).collect();

        state.profile = profile;
        state.mood = mood.state;
        state.taboo = taboo;
        state.history.push(TurnRecord {
            utterance: text.to_string(),
            case_route: parsed.case_route,
            emotion: eval.result,
            recommendations: recommendations.clone(),
            fired_rules: fired_rules.clone(),
            reply: selection.reply.clone(),
        });
        state.last_recommendations.clone_from(&recommendations);

        Ok(TurnResponse {
            session_id: state.session_id.clone(),
            turn: state.history.len(),
            reply: selection.reply,
            parsed,
            emotion: eval.result,
            axes: eval.axes,
            profile: state.profile.vector,
            mood: state.mood.clone(),
            recommendations,
            taboo: state.taboo.iter().map(str::to_string).collect(),
            fired_rules,
            net_transitions: outcome.fired,
            net_degrees: outcome.consequents,
            diagnostics,
        })
    }

    /// Fuzzifies the turn into net evidence.
    fn evidence(
        &self,
        ctx: &SelectionContext<'_>,
        parsed: &ParsedUtterance,
        negative: bool,
        selection: &Selection,
    ) -> Result<Evidence, RulesError> {
        let b = &self.bundle;
        let crisp = |x: bool| if x { 1.0 } else { 0.0 };
        let category = parsed.object_category;
        let is_spot = category == Some(NounCategory::Spot);
        let is_food_gift = matches!(category, Some(NounCategory::Food | NounCategory::Gift));
        let is_nothing = !is_spot && !is_food_gift;

        let named_spot = parsed.object.as_deref().and_then(|id| b.catalog.spot(id));
        let av = match named_spot {
            Some(s) => agreement_value(ctx.profile.as_slice(), &s.impression)?,
            None => {
                let mut best: f64 = 0.0;
                for s in &b.catalog.spots {
                    best = best.max(agreement_value(ctx.profile.as_slice(), &s.impression)?);
                }
                best
            }
        };
        let av_high = b.membership.fuzzify_av(av);

        let fv_term = match (&parsed.object, is_food_gift) {
            (Some(term), true) => Some(term.clone()),
            _ => selection
                .recommendations
                .iter()
                .find(|r| r.kind != ItemKind::Spot)
                .and_then(|r| r.fv_term.clone()),
        };
        let fv_positive = fv_term.map_or(0.0, |t| b.membership.fuzzify_fv(b.fv.lookup(&t, ctx.person).value).like);
        let dislike = parsed
            .nouns
            .iter()
            .any(|n| b.fv.lookup(n, ctx.person).value < DISLIKE_THRESHOLD);

        let route = parsed.case_route;
        Ok(Evidence {
            obj_is_spot: crisp(route == CaseRoute::Case1 && is_spot),
            obj_is_food_gift: crisp(route == CaseRoute::Case1 && is_food_gift),
            obj_is_nothing: crisp(route == CaseRoute::Case1 && is_nothing),
            noun_is_spot: crisp(route == CaseRoute::Case3 && is_spot),
            noun_is_food_gift: crisp(route == CaseRoute::Case3 && is_food_gift),
            noun_is_nothing: crisp(route == CaseRoute::Case3 && is_nothing),
            av_high,
            av_not_high: 1.0 - av_high,
            fv_positive,
            emotion_negative: crisp(negative),
            emotion_non_negative: crisp(!negative),
            utterance_case2: crisp(route == CaseRoute::Case2),
            utterance_case3: crisp(route == CaseRoute::Case3),
            dislike_word: crisp(dislike),
        })
    }
}
