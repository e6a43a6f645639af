//! Fuzzy production rules and their compilation onto a net.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::net::{FuzzyPetriNet, Place, Proposition, Transition};
use super::FpnError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleType {
    /// `IF d1 and .. and dn THEN dk`, one certainty factor.
    #[serde(rename = "TYPE1")]
    Conjunctive,
    /// `IF dj THEN dk1 and .. and dkn`, one certainty factor.
    #[serde(rename = "TYPE2")]
    FanOut,
    /// `IF d1 or .. or dn THEN dk`, one certainty factor per antecedent.
    #[serde(rename = "TYPE3")]
    Disjunctive,
    /// `IF dj THEN dk1 or .. or dkn`. Parsed so it can be rejected explicitly.
    #[serde(rename = "TYPE4")]
    DisjunctiveConsequent,
}

impl RuleType {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleType::Conjunctive => "TYPE1",
            RuleType::FanOut => "TYPE2",
            RuleType::Disjunctive => "TYPE3",
            RuleType::DisjunctiveConsequent => "TYPE4",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleSpec {
    /// Transition id stem. TYPE3 rules expand to `<id>.1 .. <id>.n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub rule_type: RuleType,
    pub antecedents: Vec<String>,
    pub consequents: Vec<String>,
    pub cf: Vec<f64>,
}

impl RuleSpec {
    pub fn conjunctive(
        id: impl Into<String>,
        antecedents: &[&str],
        consequent: &str,
        cf: f64,
    ) -> Self {
        Self {
            id: Some(id.into()),
            rule_type: RuleType::Conjunctive,
            antecedents: antecedents.iter().map(|s| s.to_string()).collect(),
            consequents: vec![consequent.to_string()],
            cf: vec![cf],
        }
    }

    pub fn fan_out(id: impl Into<String>, antecedent: &str, consequents: &[&str], cf: f64) -> Self {
        Self {
            id: Some(id.into()),
            rule_type: RuleType::FanOut,
            antecedents: vec![antecedent.to_string()],
            consequents: consequents.iter().map(|s| s.to_string()).collect(),
            cf: vec![cf],
        }
    }

    pub fn disjunctive(
        id: impl Into<String>,
        antecedents: &[&str],
        consequent: &str,
        cf: &[f64],
    ) -> Self {
        Self {
            id: Some(id.into()),
            rule_type: RuleType::Disjunctive,
            antecedents: antecedents.iter().map(|s| s.to_string()).collect(),
            consequents: vec![consequent.to_string()],
            cf: cf.to_vec(),
        }
    }

    fn validate(&self, idx: usize) -> Result<(), FpnError> {
        let err = |field: &str, message: String| FpnError::Validation {
            path: format!("rules[{idx}].{field}"),
            message,
        };
        let (a, c, k) = (self.antecedents.len(), self.consequents.len(), self.cf.len());
        match self.rule_type {
            RuleType::DisjunctiveConsequent => {
                return Err(FpnError::UnsupportedRuleType(self.rule_type.as_str().into()))
            }
            RuleType::Conjunctive => {
                if a < 1 {
                    return Err(err("antecedents", "TYPE1 needs at least one antecedent".into()));
                }
                if c != 1 {
                    return Err(err("consequents", format!("TYPE1 needs one consequent, got {c}")));
                }
                if k != 1 {
                    return Err(err("cf", format!("TYPE1 needs one certainty factor, got {k}")));
                }
            }
            RuleType::FanOut => {
                if a != 1 {
                    return Err(err("antecedents", format!("TYPE2 needs one antecedent, got {a}")));
                }
                if c < 1 {
                    return Err(err("consequents", "TYPE2 needs at least one consequent".into()));
                }
                if k != 1 {
                    return Err(err("cf", format!("TYPE2 needs one certainty factor, got {k}")));
                }
            }
            RuleType::Disjunctive => {
                if a < 2 {
                    return Err(err("antecedents", format!("TYPE3 needs two or more antecedents, got {a}")));
                }
                if c != 1 {
                    return Err(err("consequents", format!("TYPE3 needs one consequent, got {c}")));
                }
                if k != a {
                    return Err(err("cf", format!("TYPE3 needs {a} certainty factors, got {k}")));
                }
            }
        }
        for (j, cf) in self.cf.iter().enumerate() {
            if !(0.0..=1.0).contains(cf) {
                return Err(err(&format!("cf[{j}]"), format!("certainty factor {cf} outside [0,1]")));
            }
        }
        for (field, list) in [("antecedents", &self.antecedents), ("consequents", &self.consequents)] {
            if let Some(j) = list.iter().position(|s| s.is_empty()) {
                return Err(err(&format!("{field}[{j}]"), "empty proposition id".into()));
            }
        }
        Ok(())
    }
}

/// Place id used for a proposition in compiled nets.
pub fn place_id(proposition: &str) -> String {
    format!("p_{proposition}")
}

/// Compiles rules into a net. Propositions shared across rules share one place.
///
/// TYPE1 and TYPE2 rules become one transition each. A TYPE3 rule becomes one
/// transition per antecedent, all writing the same consequent place, so the
/// max-merge on that place yields the max over `y_j * mu_j`.
pub fn compile_rules(rules: &[RuleSpec]) -> Result<FuzzyPetriNet, FpnError> {
    let mut propositions: Vec<Proposition> = Vec::new();
    let mut seen = HashSet::new();
    let mut transitions = Vec::new();

    let mut intern = |id: &str, props: &mut Vec<Proposition>| {
        if seen.insert(id.to_string()) {
            props.push(Proposition {
                id: id.to_string(),
                label: id.to_string(),
            });
        }
        place_id(id)
    };

    for (idx, rule) in rules.iter().enumerate() {
        rule.validate(idx)?;
        let stem = rule.id.clone().unwrap_or_else(|| format!("t{}", idx + 1));
        let inputs: Vec<String> = rule
            .antecedents
            .iter()
            .map(|a| intern(a, &mut propositions))
            .collect();
        let outputs: Vec<String> = rule
            .consequents
            .iter()
            .map(|c| intern(c, &mut propositions))
            .collect();
        match rule.rule_type {
            RuleType::Conjunctive | RuleType::FanOut => transitions.push(Transition {
                id: stem,
                mu: rule.cf[0],
                inputs,
                outputs,
            }),
            RuleType::Disjunctive => {
                for (j, (input, &mu)) in inputs.into_iter().zip(&rule.cf).enumerate() {
                    transitions.push(Transition {
                        id: format!("{stem}.{}", j + 1),
                        mu,
                        inputs: vec![input],
                        outputs: outputs.clone(),
                    });
                }
            }
            RuleType::DisjunctiveConsequent => unreachable!("rejected by validate"),
        }
    }

    let places = propositions
        .iter()
        .map(|p| Place {
            id: place_id(&p.id),
            proposition: p.id.clone(),
        })
        .collect();
    FuzzyPetriNet::new(propositions, places, transitions)
}
