use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{agreement_value, filter_taboo, reroute_after_talk, route, MembershipConfig, Rule, RulesError, TabooList};
use crate::catalog::{Catalog, ItemKind, ItemRecord, SpotRecord};
use crate::egc::{normalize_term, EmotionType, EmotionVector, FvDatabase, EMOTION_COUNT};
use crate::parser::{CaseRoute, NounCategory, ParsedUtterance};

/// How many spots "a few" means.
pub const FEW_SPOTS: usize = 3;

/// Favorite values strictly below this mark a dislike word.
pub const DISLIKE_THRESHOLD: f64 = -0.3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub kind: ItemKind,
    pub id: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fv_term: Option<String>,
    pub strength: f64,
    pub fired_rules: Vec<String>,
    pub rationale: String,
    /// Spot ids close to the item.
    pub nearby: Vec<String>,
}

impl Recommendation {
    /// Id, name and favorite-value term, for taboo matching.
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        [Some(self.id.as_str()), Some(self.name.as_str()), self.fv_term.as_deref()]
            .into_iter()
            .flatten()
    }
}

/// Everything item selection reads, plus the taboo list it may extend.
pub struct SelectionContext<'a> {
    pub catalog: &'a Catalog,
    pub fv: &'a FvDatabase,
    pub person: Option<&'a str>,
    pub membership: &'a MembershipConfig,
    pub profile: &'a EmotionVector,
    pub taboo: TabooList,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    /// Rules applied, in order; a hand-over between cases lists both.
    pub rules: Vec<Rule>,
    pub recommendations: Vec<Recommendation>,
    pub reply: String,
    pub diagnostics: Vec<String>,
}

impl Selection {
    fn new(rule: Rule) -> Self {
        Self {
            rules: vec![rule],
            recommendations: Vec::new(),
            reply: String::new(),
            diagnostics: Vec::new(),
        }
    }

    fn rule_ids(&self) -> Vec<String> {
        self.rules.iter().map(|r| r.id().to_string()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TalkOutcome {
    pub selection: Selection,
    /// Terms newly added to the taboo list this turn.
    pub captured: Vec<String>,
}

/// Positively typed impression mass minus negatively typed mass.
pub fn positivity_score(impression: &[f64]) -> f64 {
    EmotionType::ALL
        .iter()
        .zip(impression)
        .map(|(e, v)| if e.is_negative() { -v } else { *v })
        .sum()
}

fn by_score_then_id<T>(a: &(f64, T), b: &(f64, T), id: impl Fn(&T) -> &str) -> Ordering {
    b.0.partial_cmp(&a.0)
        .unwrap_or(Ordering::Equal)
        .then_with(|| id(&a.1).cmp(id(&b.1)))
}

fn spot_blocked(taboo: &TabooList, s: &SpotRecord) -> bool {
    taboo.blocks([s.id.as_str(), s.name.as_str()])
}

fn item_blocked(taboo: &TabooList, i: &ItemRecord) -> bool {
    taboo.blocks([i.id.as_str(), i.name.as_str(), i.fv_term.as_str()])
}

/// Non-taboo spots by agreement with the profile, best first.
pub fn rank_spots_by_agreement<'c>(
    ctx: &SelectionContext<'c>,
    exclude: Option<&str>,
) -> Result<Vec<(f64, &'c SpotRecord)>, RulesError> {
    let mut ranked = Vec::new();
    for s in &ctx.catalog.spots {
        if Some(s.id.as_str()) == exclude || spot_blocked(&ctx.taboo, s) {
            continue;
        }
        ranked.push((agreement_value(ctx.profile.as_slice(), &s.impression)?, s));
    }
    ranked.sort_by(|a, b| by_score_then_id(a, b, |s| &s.id));
    Ok(ranked)
}

/// Non-taboo spots by positivity of their impression, best first.
pub fn rank_spots_by_positivity<'c>(ctx: &SelectionContext<'c>, exclude: Option<&str>) -> Vec<(f64, &'c SpotRecord)> {
    let mut ranked: Vec<_> = ctx
        .catalog
        .spots
        .iter()
        .filter(|s| Some(s.id.as_str()) != exclude && !spot_blocked(&ctx.taboo, s))
        .map(|s| (positivity_score(&s.impression), s))
        .collect();
    ranked.sort_by(|a, b| by_score_then_id(a, b, |s| &s.id));
    ranked
}

fn spot_rec(s: &SpotRecord, strength: f64, rules: &[String], rationale: String) -> Recommendation {
    Recommendation {
        kind: ItemKind::Spot,
        id: s.id.clone(),
        name: s.name.clone(),
        fv_term: None,
        strength,
        fired_rules: rules.to_vec(),
        rationale,
        nearby: s.nearby.clone(),
    }
}

fn names(recs: &[Recommendation]) -> String {
    recs.iter().map(|r| r.name.as_str()).collect::<Vec<_>>().join(", ")
}

fn spot_names(catalog: &Catalog, ids: &[String]) -> String {
    ids.iter()
        .map(|id| catalog.spot(id).map_or(id.as_str(), |s| s.name.as_str()))
        .collect::<Vec<_>>()
        .join(", ")
}

fn item_matches(item: &ItemRecord, term: &str) -> bool {
    item.id == term || item.fv_term == term || normalize_term(&item.name) == term
}

/// Food and gift candidates scored from their favorite values. An item the
/// user named comes first when it is liked; liked items rank above the rest.
pub fn rank_food_gift(
    ctx: &SelectionContext<'_>,
    kinds: &[ItemKind],
    named: Option<&str>,
    rules: &[String],
) -> Vec<Recommendation> {
    struct Scored<'r> {
        item: &'r ItemRecord,
        kind: ItemKind,
        fv: f64,
        strength: f64,
        named: bool,
    }
    let mut scored: Vec<Scored> = kinds
        .iter()
        .flat_map(|k| ctx.catalog.items(*k).iter().map(move |i| (*k, i)))
        .filter(|(_, i)| !item_blocked(&ctx.taboo, i))
        .map(|(kind, item)| {
            let fv = ctx.fv.lookup(&item.fv_term, ctx.person).value;
            Scored {
                item,
                kind,
                fv,
                strength: ctx.membership.strength_from_fv(fv).strength,
                named: named.is_some_and(|t| item_matches(item, t)) && fv > 0.0,
            }
        })
        .collect();
    scored.sort_by(|a, b| {
        b.named
            .cmp(&a.named)
            .then((b.fv > 0.0).cmp(&(a.fv > 0.0)))
            .then(b.strength.partial_cmp(&a.strength).unwrap_or(Ordering::Equal))
            .then_with(|| a.item.id.cmp(&b.item.id))
    });
    scored
        .into_iter()
        .map(|s| Recommendation {
            kind: s.kind,
            id: s.item.id.clone(),
            name: s.item.name.clone(),
            fv_term: Some(s.item.fv_term.clone()),
            strength: s.strength,
            fired_rules: rules.to_vec(),
            rationale: format!("favorite value {:.2} for {}", s.fv, s.item.fv_term),
            nearby: s.item.nearby.clone(),
        })
        .collect()
}

fn requested_kinds(parsed: &ParsedUtterance) -> Vec<ItemKind> {
    match parsed.object_category.or(parsed.target) {
        Some(NounCategory::Food) => vec![ItemKind::Food],
        Some(NounCategory::Gift) => vec![ItemKind::Gift],
        _ => vec![ItemKind::Food, ItemKind::Gift],
    }
}

/// Rules 1 to 5: the user asked about going somewhere or seeing something.
pub fn select_spots_case1(
    ctx: &mut SelectionContext<'_>,
    parsed: &ParsedUtterance,
    negative: bool,
) -> Result<Selection, RulesError> {
    if ctx.catalog.spots.is_empty() {
        return Err(RulesError::NoCandidates);
    }
    let rule = route(CaseRoute::Case1, parsed.object_category, negative);
    let named = parsed.object.as_deref();
    let mut sel = Selection::new(rule);
    let ids = sel.rule_ids();
    match rule {
        Rule::R1 => {
            let target = named.and_then(|id| ctx.catalog.spot(id));
            let target = target.filter(|s| !spot_blocked(&ctx.taboo, s));
            let own = target
                .map(|s| agreement_value(ctx.profile.as_slice(), &s.impression))
                .transpose()?;
            let high = own.map(|av| ctx.membership.fuzzify_av(av));
            match (target, own, high) {
                (Some(s), Some(av), Some(high)) if high >= 0.5 => {
                    let strength = ctx.membership.strength_from_high(high).strength;
                    sel.recommendations
                        .push(spot_rec(s, strength, &ids, format!("agreement {av:.2} with your current feelings")));
                    sel.reply = format!("{} suits how you feel right now.", s.name);
                }
                _ => {
                    let ranked = rank_spots_by_agreement(ctx, named)?;
                    if let Some((av, s)) = ranked.first() {
                        let strength = ctx.membership.strength_from_high(ctx.membership.fuzzify_av(*av)).strength;
                        sel.recommendations
                            .push(spot_rec(s, strength, &ids, format!("agreement {av:.2}, closer to your mood")));
                        sel.reply = match target {
                            Some(t) => format!("{} may suit your mood better than {}.", s.name, t.name),
                            None => format!("How about {}?", s.name),
                        };
                    }
                }
            }
        }
        Rule::R2 => {
            for (score, s) in rank_spots_by_positivity(ctx, named).into_iter().take(FEW_SPOTS) {
                let strength = ((score / (EMOTION_COUNT as f64 / 2.0)).clamp(-1.0, 1.0) + 1.0) / 2.0;
                sel.recommendations
                    .push(spot_rec(s, strength, &ids, format!("positivity {score:.2} of its impression")));
            }
            sel.reply = format!("You seem a little down. These places tend to lift the mood: {}.", names(&sel.recommendations));
        }
        Rule::R3 => {
            sel.recommendations = rank_food_gift(ctx, &requested_kinds(parsed), named, &ids);
            sel.recommendations.truncate(FEW_SPOTS);
            food_reply(ctx, &mut sel);
        }
        Rule::R4 => {
            for (av, s) in rank_spots_by_agreement(ctx, None)?.into_iter().take(FEW_SPOTS) {
                let strength = ctx.membership.strength_from_high(ctx.membership.fuzzify_av(av)).strength;
                sel.recommendations
                    .push(spot_rec(s, strength, &ids, format!("agreement {av:.2} with your current feelings")));
            }
            sel.reply = format!("Some places that match your mood: {}.", names(&sel.recommendations));
        }
        Rule::R5 => {
            let talk = handle_talk_case3(ctx, parsed, true);
            sel.rules.extend(talk.selection.rules);
            sel.recommendations = talk.selection.recommendations;
            sel.reply = talk.selection.reply;
            sel.diagnostics = talk.selection.diagnostics;
        }
        Rule::R6 | Rule::R7 | Rule::R8 => unreachable!("not a case 1 rule"),
    }
    if sel.recommendations.is_empty() && rule != Rule::R5 {
        sel.diagnostics.push("no candidates left after the taboo list".into());
        sel.reply = "I have nothing new to suggest right now.".into();
    }
    Ok(sel)
}

fn food_reply(ctx: &SelectionContext<'_>, sel: &mut Selection) {
    match sel.recommendations.first() {
        Some(top) if top.nearby.is_empty() => sel.reply = format!("How about {}?", top.name),
        Some(top) => {
            sel.reply = format!("How about {}? You can find it near {}.", top.name, spot_names(ctx.catalog, &top.nearby))
        }
        None => {
            sel.diagnostics.push("no candidates left after the taboo list".into());
            sel.reply = "I have nothing new to suggest right now.".into();
        }
    }
}

/// Rule 6: the user wants to eat or buy something.
pub fn select_food_gift_case2(ctx: &SelectionContext<'_>, parsed: &ParsedUtterance) -> Selection {
    let mut sel = Selection::new(Rule::R6);
    let ids = sel.rule_ids();
    sel.recommendations = rank_food_gift(ctx, &requested_kinds(parsed), parsed.object.as_deref(), &ids);
    sel.recommendations.truncate(FEW_SPOTS);
    food_reply(ctx, &mut sel);
    sel
}

/// Rules 7 and 8: small talk. A negative turn records disliked words and
/// steers toward a favorite item; otherwise the talk moves to case 1 or 2.
pub fn handle_talk_case3(ctx: &mut SelectionContext<'_>, parsed: &ParsedUtterance, negative: bool) -> TalkOutcome {
    if !negative {
        let mut sel = Selection::new(Rule::R8);
        let next = match reroute_after_talk(parsed.object_category) {
            CaseRoute::Case2 => select_food_gift_case2(ctx, parsed),
            _ => select_spots_case1(ctx, parsed, false).unwrap_or_else(|e| {
                let mut s = Selection::new(Rule::R4);
                s.diagnostics.push(e.to_string());
                s
            }),
        };
        sel.rules.extend(next.rules);
        sel.recommendations = next.recommendations;
        sel.reply = next.reply;
        sel.diagnostics = next.diagnostics;
        return TalkOutcome { selection: sel, captured: Vec::new() };
    }

    let mut sel = Selection::new(Rule::R7);
    let mut captured = Vec::new();
    for noun in &parsed.nouns {
        if ctx.fv.lookup(noun, ctx.person).value < DISLIKE_THRESHOLD && ctx.taboo.insert(noun) {
            captured.push(noun.clone());
        }
    }
    if captured.is_empty() {
        sel.reply = "I see. Tell me more about it.".into();
        return TalkOutcome { selection: sel, captured };
    }

    let ids = sel.rule_ids();
    let mut candidates: Vec<(f64, &ItemRecord, ItemKind)> = [ItemKind::Food, ItemKind::Gift]
        .into_iter()
        .flat_map(|k| ctx.catalog.items(k).iter().map(move |i| (k, i)))
        .filter(|(_, i)| !item_blocked(&ctx.taboo, i))
        .map(|(k, i)| (ctx.fv.lookup(&i.fv_term, ctx.person).value, i, k))
        .collect();
    candidates.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.1.id.cmp(&b.1.id))
    });
    let words = captured.join(", ").replace('_', " ");
    match candidates.first() {
        Some((fv, item, kind)) => {
            let rec = Recommendation {
                kind: *kind,
                id: item.id.clone(),
                name: item.name.clone(),
                fv_term: Some(item.fv_term.clone()),
                strength: ctx.membership.strength_from_fv(*fv).strength,
                fired_rules: ids,
                rationale: format!("your favorite among the local specialties (favorite value {fv:.2})"),
                nearby: item.nearby.clone(),
            };
            let mut recs = filter_taboo(vec![rec], &ctx.taboo);
            let top = recs.remove(0);
            sel.reply = if top.nearby.is_empty() {
                format!("Sorry about the {words}. How about {} instead?", top.name)
            } else {
                format!(
                    "Sorry about the {words}. How about {} instead? There is a place near {}.",
                    top.name,
                    spot_names(ctx.catalog, &top.nearby)
                )
            };
            sel.recommendations.push(top);
        }
        None => {
            sel.reply = format!("Sorry about the {words}. Let's talk about something else.");
            sel.diagnostics.push("no candidates left after the taboo list".into());
        }
    }
    TalkOutcome { selection: sel, captured }
}
