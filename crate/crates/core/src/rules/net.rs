use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::RulesError;
use crate::fpn::{compile_rules, FuzzyPetriNet, Marking, ReasoningConfig, RuleSpec};

/// Certainty factors keyed `R1`..`R8` and `RC1`..`RC3`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, f64>", into = "BTreeMap<String, f64>")]
pub struct RuleCfConfig {
    factors: BTreeMap<String, f64>,
}

const CF_KEYS: [&str; 11] = ["R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8", "RC1", "RC2", "RC3"];

impl Default for RuleCfConfig {
    fn default() -> Self {
        let factors = CF_KEYS
            .iter()
            .map(|k| {
                let cf = if matches!(*k, "R7" | "R8") || k.starts_with("RC") { 0.8 } else { 0.9 };
                (k.to_string(), cf)
            })
            .collect();
        Self { factors }
    }
}

impl TryFrom<BTreeMap<String, f64>> for RuleCfConfig {
    type Error = RulesError;

    fn try_from(factors: BTreeMap<String, f64>) -> Result<Self, Self::Error> {
        for key in CF_KEYS {
            match factors.get(key) {
                None => {
                    return Err(RulesError::CertaintyFactor {
                        key: key.into(),
                        message: "missing".into(),
                    })
                }
                Some(cf) if !(0.0..=1.0).contains(cf) => {
                    return Err(RulesError::CertaintyFactor {
                        key: key.into(),
                        message: format!("{cf} outside [0,1]"),
                    })
                }
                Some(_) => {}
            }
        }
        if let Some(extra) = factors.keys().find(|k| !CF_KEYS.contains(&k.as_str())) {
            return Err(RulesError::CertaintyFactor {
                key: extra.clone(),
                message: "unknown rule".into(),
            });
        }
        Ok(Self { factors })
    }
}

impl From<RuleCfConfig> for BTreeMap<String, f64> {
    fn from(c: RuleCfConfig) -> Self {
        c.factors
    }
}

impl RuleCfConfig {
    pub fn get(&self, key: &str) -> f64 {
        self.factors[key]
    }

    pub fn set(&mut self, key: &str, cf: f64) -> Result<(), RulesError> {
        let mut factors = self.factors.clone();
        factors.insert(key.to_string(), cf);
        *self = Self::try_from(factors)?;
        Ok(())
    }
}

/// Fuzzified facts about one turn, each a degree in `[0, 1]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub obj_is_spot: f64,
    pub obj_is_food_gift: f64,
    pub obj_is_nothing: f64,
    /// Category of the topic noun during small talk.
    pub noun_is_spot: f64,
    pub noun_is_food_gift: f64,
    pub noun_is_nothing: f64,
    pub av_high: f64,
    pub av_not_high: f64,
    pub fv_positive: f64,
    pub emotion_negative: f64,
    pub emotion_non_negative: f64,
    pub utterance_case2: f64,
    pub utterance_case3: f64,
    pub dislike_word: f64,
}

impl Evidence {
    pub fn degrees(&self) -> [(&'static str, f64); 14] {
        [
            ("obj_is_spot", self.obj_is_spot),
            ("obj_is_food_gift", self.obj_is_food_gift),
            ("obj_is_nothing", self.obj_is_nothing),
            ("noun_is_spot", self.noun_is_spot),
            ("noun_is_food_gift", self.noun_is_food_gift),
            ("noun_is_nothing", self.noun_is_nothing),
            ("av_high", self.av_high),
            ("av_not_high", self.av_not_high),
            ("fv_positive", self.fv_positive),
            ("emotion_negative", self.emotion_negative),
            ("emotion_non_negative", self.emotion_non_negative),
            ("utterance_case2", self.utterance_case2),
            ("utterance_case3", self.utterance_case3),
            ("dislike_word", self.dislike_word),
        ]
    }
}

/// Propositions read back after a run.
pub const CONSEQUENTS: [&str; 11] = [
    "recommend_spot",
    "recommend_alt_spot",
    "recommend_positive_spots",
    "recommend_food_gift",
    "select_few_spots",
    "goto_case3",
    "case3_active",
    "case2_active",
    "continue_talk",
    "capture_taboo",
    "leave_case3",
];

const LABELS: [(&str, &str); 25] = [
    ("obj_is_spot", "Obj is Spot"),
    ("obj_is_food_gift", "Obj is Food or Gift"),
    ("obj_is_nothing", "Obj is Nothing"),
    ("noun_is_spot", "talk topic is a Spot"),
    ("noun_is_food_gift", "talk topic is Food or Gift"),
    ("noun_is_nothing", "talk topic is nothing in the catalog"),
    ("av_high", "AV of Emotion is high"),
    ("av_not_high", "AV of Emotion is not high"),
    ("fv_positive", "FV is positive"),
    ("emotion_negative", "Emotion is negative"),
    ("emotion_non_negative", "Emotion is not negative"),
    ("utterance_case2", "sentence has eat/buy verb"),
    ("utterance_case3", "sentence is talk"),
    ("dislike_word", "a dislike word was found"),
    ("recommend_spot", "Recommend Spot"),
    ("recommend_alt_spot", "Recommend another Spot"),
    ("recommend_positive_spots", "Recommend Spots where emotion becomes positive"),
    ("recommend_food_gift", "Recommend Food or Gift"),
    ("select_few_spots", "Select a few Spots with small difference"),
    ("goto_case3", "Go to case 3"),
    ("case3_active", "in case 3"),
    ("case2_active", "in case 2"),
    ("continue_talk", "Continue talk"),
    ("capture_taboo", "record the dislike word as taboo"),
    ("leave_case3", "Go to case 1 or case 2"),
];

/// Builds the concierge rule base as fuzzy production rules and compiles it.
///
/// Case 1 holds rules 1 to 5, case 2 rule 6 and case 3 rules 7 and 8. RC3
/// carries rule 5 into case 3, RC1 and RC2 carry rule 8 back to cases 1
/// and 2. Utterances enter cases 2 and 3 directly with certainty 1.
pub fn compile_concierge_net(cf: &RuleCfConfig) -> Result<FuzzyPetriNet, RulesError> {
    let c = |k: &str| cf.get(k);
    let rules = vec![
        RuleSpec::conjunctive("R1", &["obj_is_spot", "av_high"], "recommend_spot", c("R1")),
        RuleSpec::conjunctive("R1.alt", &["obj_is_spot", "av_not_high"], "recommend_alt_spot", c("R1")),
        RuleSpec::conjunctive("R2", &["obj_is_spot", "emotion_negative"], "recommend_positive_spots", c("R2")),
        RuleSpec::conjunctive("R3", &["obj_is_food_gift", "fv_positive"], "recommend_food_gift", c("R3")),
        RuleSpec::conjunctive("R4", &["obj_is_nothing", "av_high"], "select_few_spots", c("R4")),
        RuleSpec::conjunctive("R5", &["obj_is_nothing", "emotion_negative"], "goto_case3", c("R5")),
        RuleSpec::conjunctive("RC3", &["goto_case3"], "case3_active", c("RC3")),
        RuleSpec::conjunctive("C3", &["utterance_case3"], "case3_active", 1.0),
        RuleSpec::conjunctive("C2", &["utterance_case2"], "case2_active", 1.0),
        RuleSpec::conjunctive("R6", &["case2_active", "fv_positive"], "recommend_food_gift", c("R6")),
        RuleSpec::conjunctive("R7", &["case3_active", "emotion_negative"], "continue_talk", c("R7")),
        RuleSpec::conjunctive(
            "R7.taboo",
            &["case3_active", "emotion_negative", "dislike_word"],
            "capture_taboo",
            c("R7"),
        ),
        RuleSpec::conjunctive("R8", &["case3_active", "emotion_non_negative"], "leave_case3", c("R8")),
        RuleSpec::conjunctive("RC1.spot", &["leave_case3", "noun_is_spot"], "obj_is_spot", c("RC1")),
        RuleSpec::conjunctive("RC1.nothing", &["leave_case3", "noun_is_nothing"], "obj_is_nothing", c("RC1")),
        RuleSpec::conjunctive("RC2", &["leave_case3", "noun_is_food_gift"], "case2_active", c("RC2")),
    ];
    let labels: BTreeMap<String, String> = LABELS.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    Ok(compile_rules(&rules)?.with_labels(&labels))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetOutcome {
    /// Degrees of [`CONSEQUENTS`] after the run.
    pub consequents: BTreeMap<String, f64>,
    /// Transitions that raised a degree, in firing order, without repeats.
    pub fired: Vec<String>,
}

/// The compiled concierge net.
#[derive(Debug, Clone)]
pub struct ConciergeNet {
    net: FuzzyPetriNet,
}

impl ConciergeNet {
    pub fn new(cf: &RuleCfConfig) -> Result<Self, RulesError> {
        Ok(Self {
            net: compile_concierge_net(cf)?,
        })
    }

    pub fn net(&self) -> &FuzzyPetriNet {
        &self.net
    }

    pub fn initial_marking(&self, evidence: &Evidence) -> Result<Marking, RulesError> {
        Ok(self.net.marking_from_propositions(evidence.degrees())?)
    }

    pub fn evaluate(&self, evidence: &Evidence, cfg: &ReasoningConfig) -> Result<NetOutcome, RulesError> {
        let (marking, trace) = self.net.run(&self.initial_marking(evidence)?, cfg)?;
        let mut consequents = BTreeMap::new();
        for prop in CONSEQUENTS {
            consequents.insert(prop.to_string(), self.net.query(&marking, prop)?);
        }
        let mut fired: Vec<String> = Vec::new();
        for id in trace.fired_transitions() {
            if !fired.iter().any(|f| f == id) {
                fired.push(id.to_string());
            }
        }
        Ok(NetOutcome { consequents, fired })
    }
}
