//! Session-level affect: an accumulated 20-d emotion profile and a mood
//! that moves through a small mental state transition network.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::egc::{EmotionResult, EmotionVector, Valence, EMOTION_COUNT};

#[derive(Debug, Error)]
pub enum StateError {
    #[error("decay {0} outside [0,1)")]
    Decay(f64),
    #[error("invalid mood network at {path}: {message}")]
    Config { path: String, message: String },
}

/// Exponential moving average of per-turn emotion vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmotionProfile {
    pub vector: EmotionVector,
    pub rho: f64,
}

impl Default for EmotionProfile {
    fn default() -> Self {
        Self {
            vector: EmotionVector::default(),
            rho: 0.5,
        }
    }
}

impl EmotionProfile {
    pub fn with_decay(rho: f64) -> Result<Self, StateError> {
        if !(0.0..1.0).contains(&rho) {
            return Err(StateError::Decay(rho));
        }
        Ok(Self {
            rho,
            ..Self::default()
        })
    }

    /// `rho * profile + (1 - rho) * v`, componentwise.
    pub fn update(&self, v: &EmotionVector) -> EmotionProfile {
        let mut next = *self;
        for i in 0..EMOTION_COUNT {
            let x = self.rho * self.vector.0[i] + (1.0 - self.rho) * v.0[i].clamp(0.0, 1.0);
            next.vector.0[i] = x.clamp(0.0, 1.0);
        }
        next
    }

    /// More displeasure-typed than pleasure-typed mass.
    pub fn is_negative(&self) -> bool {
        let (neg, pos) = self.vector.valence_mass();
        neg > pos
    }
}

pub fn update_profile(p: &EmotionProfile, v: &EmotionVector) -> EmotionProfile {
    p.update(v)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MentalState(pub String);

impl MentalState {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl std::fmt::Display for MentalState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Mood network: for each state and trigger, weights over next states.
///
/// Triggers are an emotion group name with a `+`/`-` valence suffix
/// (`"Well-Being-"`), or a bare valence (`"Pleasure"`, `"Displeasure"`) used
/// when no group row matches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMstn")]
pub struct MstnConfig {
    pub states: Vec<String>,
    pub weights: BTreeMap<String, BTreeMap<String, BTreeMap<String, f64>>>,
}

#[derive(Deserialize)]
struct RawMstn {
    states: Vec<String>,
    #[serde(default)]
    weights: BTreeMap<String, BTreeMap<String, BTreeMap<String, f64>>>,
}

impl TryFrom<RawMstn> for MstnConfig {
    type Error = StateError;

    fn try_from(raw: RawMstn) -> Result<Self, Self::Error> {
        // accept the typographic minus in trigger names
        let weights = raw
            .weights
            .into_iter()
            .map(|(state, rows)| {
                let rows = rows
                    .into_iter()
                    .map(|(trigger, row)| (trigger.replace('\u{2212}', "-"), row))
                    .collect();
                (state, rows)
            })
            .collect();
        let cfg = MstnConfig {
            states: raw.states,
            weights,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Outcome of a mood update; `note` explains a kept state.
#[derive(Debug, Clone, PartialEq)]
pub struct MoodUpdate {
    pub state: MentalState,
    pub note: Option<String>,
}

impl MstnConfig {
    pub fn validate(&self) -> Result<(), StateError> {
        let bad = |path: String, message: String| StateError::Config { path, message };
        if self.states.is_empty() {
            return Err(bad("states".into(), "no states".into()));
        }
        for (i, s) in self.states.iter().enumerate() {
            if self.states[..i].contains(s) {
                return Err(bad(format!("states[{i}]"), format!("duplicate state `{s}`")));
            }
        }
        for (state, rows) in &self.weights {
            if !self.states.contains(state) {
                return Err(bad(format!("weights.{state}"), format!("unknown state `{state}`")));
            }
            for (trigger, row) in rows {
                let path = format!("weights.{state}.{trigger}");
                if !row.values().any(|w| *w > 0.0) {
                    return Err(bad(path, "no positive weight".into()));
                }
                for (next, w) in row {
                    if !self.states.contains(next) {
                        return Err(bad(format!("{path}.{next}"), format!("unknown state `{next}`")));
                    }
                    if !w.is_finite() || *w < 0.0 {
                        return Err(bad(format!("{path}.{next}"), format!("weight {w} must be finite and non-negative")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn initial_state(&self) -> MentalState {
        let id = if self.states.iter().any(|s| s == "neutral") {
            "neutral"
        } else {
            &self.states[0]
        };
        MentalState::new(id)
    }

    pub fn contains(&self, s: &MentalState) -> bool {
        self.states.contains(&s.0)
    }

    fn row(&self, s: &MentalState, e: &EmotionResult) -> Result<&BTreeMap<String, f64>, String> {
        let rows = self.weights.get(s.as_str());
        let sign = if e.valence == Valence::Pleasure { '+' } else { '-' };
        let group_key = e.emotion.map(|t| format!("{}{sign}", t.group().as_str()));
        let valence_key = if sign == '+' { "Pleasure" } else { "Displeasure" };
        rows.and_then(|r| group_key.as_ref().and_then(|k| r.get(k)).or_else(|| r.get(valence_key)))
            .ok_or_else(|| {
                format!(
                    "no transition row for state `{s}` and trigger `{}`",
                    group_key.as_deref().unwrap_or(valence_key)
                )
            })
    }

    /// Deterministic update: the heaviest next state, ties to the smallest id.
    pub fn update_mood(&self, s: &MentalState, e: &EmotionResult) -> MoodUpdate {
        if e.valence == Valence::Neutral {
            return MoodUpdate { state: s.clone(), note: None };
        }
        match self.row(s, e) {
            Ok(row) => {
                let mut best: Option<(&String, f64)> = None;
                for (next, &w) in row {
                    // BTreeMap iterates ids in ascending order, so `>` keeps the first on ties
                    if best.is_none_or(|(_, bw)| w > bw) {
                        best = Some((next, w));
                    }
                }
                MoodUpdate {
                    state: MentalState::new(best.expect("validated rows are non-empty").0.clone()),
                    note: None,
                }
            }
            Err(note) => MoodUpdate { state: s.clone(), note: Some(note) },
        }
    }

    /// Samples the next state with probability proportional to its weight.
    pub fn sample_mood<R: Rng + ?Sized>(&self, s: &MentalState, e: &EmotionResult, rng: &mut R) -> MoodUpdate {
        if e.valence == Valence::Neutral {
            return MoodUpdate { state: s.clone(), note: None };
        }
        match self.row(s, e) {
            Ok(row) => {
                let total: f64 = row.values().sum();
                let mut pick = rng.random::<f64>() * total;
                let mut chosen = None;
                for (next, &w) in row {
                    if w <= 0.0 {
                        continue;
                    }
                    chosen = Some(next);
                    if pick < w {
                        break;
                    }
                    pick -= w;
                }
                MoodUpdate {
                    state: MentalState::new(chosen.expect("validated rows have a positive weight").clone()),
                    note: None,
                }
            }
            Err(note) => MoodUpdate { state: s.clone(), note: Some(note) },
        }
    }
}

pub fn update_mood(s: &MentalState, e: &EmotionResult, cfg: &MstnConfig) -> MoodUpdate {
    cfg.update_mood(s, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::egc::{emotion_to_vector20, EmotionType};
    use rand::SeedableRng;

    fn result(e: EmotionType, intensity: f64) -> EmotionResult {
        EmotionResult {
            emotion: Some(e),
            valence: if e.is_negative() { Valence::Displeasure } else { Valence::Pleasure },
            intensity,
        }
    }

    fn config() -> MstnConfig {
        serde_json::from_str(
            r#"{"states":["neutral","happy","sad","angry","anxious"],
                "weights":{
                  "neutral":{"Well-Being−":{"sad":1.0},"Well-Being+":{"happy":1.0},
                             "Displeasure":{"anxious":1.0}},
                  "sad":{"Well-Being+":{"neutral":0.6,"happy":0.4}},
                  "happy":{"Well-Being+":{"sad":1.0,"angry":1.0,"happy":1.0}}}}"#,
        )
        .unwrap()
    }

    #[test]
    fn profile_ema() {
        let p = EmotionProfile::default();
        let joy = emotion_to_vector20(&result(EmotionType::Joy, 0.8));
        let p1 = p.update(&joy);
        assert!((p1.vector.get(EmotionType::Joy) - 0.4).abs() < 1e-12);

        let mut p = p1;
        for _ in 0..20 {
            p = p.update(&EmotionVector::default());
        }
        assert!(p.vector.get(EmotionType::Joy) < 0.4 * 0.5f64.powi(19));

        let latest = EmotionProfile::with_decay(0.0).unwrap().update(&joy);
        assert_eq!(latest.vector, joy);
        assert!(EmotionProfile::with_decay(1.0).is_err());
    }

    #[test]
    fn negativity() {
        assert!(result(EmotionType::Distress, 0.6).is_negative());
        assert!(!result(EmotionType::Joy, 0.6).is_negative());
        let mut p = EmotionProfile::default();
        p.vector.0[EmotionType::Distress.index()] = 0.5;
        p.vector.0[EmotionType::Joy.index()] = 0.2;
        assert!(p.is_negative());
    }

    #[test]
    fn mood_transitions() {
        let cfg = config();
        let neutral = MentalState::new("neutral");
        assert_eq!(cfg.update_mood(&neutral, &result(EmotionType::Distress, 0.5)).state.as_str(), "sad");
        assert_eq!(cfg.update_mood(&neutral, &EmotionResult::neutral()).state, neutral);
        // anger falls back to the valence row
        assert_eq!(cfg.update_mood(&neutral, &result(EmotionType::Anger, 0.5)).state.as_str(), "anxious");
        // ties go to the smallest id
        let happy = MentalState::new("happy");
        assert_eq!(cfg.update_mood(&happy, &result(EmotionType::Joy, 0.5)).state.as_str(), "angry");
        let missing = cfg.update_mood(&happy, &result(EmotionType::Distress, 0.5));
        assert_eq!(missing.state, happy);
        assert!(missing.note.is_some());
    }

    #[test]
    fn sampled_mood_is_reproducible() {
        let cfg = config();
        let sad = MentalState::new("sad");
        let joy = result(EmotionType::Joy, 0.5);
        let run = |seed| {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            (0..50).map(|_| cfg.sample_mood(&sad, &joy, &mut rng).state.0).collect::<Vec<_>>()
        };
        let a = run(7);
        assert_eq!(a, run(7));
        assert!(a.iter().any(|s| s == "neutral") && a.iter().any(|s| s == "happy"));
        assert!(a.iter().all(|s| cfg.states.contains(s)));
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            r#"{"states":[]}"#,
            r#"{"states":["a","a"]}"#,
            r#"{"states":["a"],"weights":{"a":{"Pleasure":{"b":1.0}}}}"#,
            r#"{"states":["a"],"weights":{"a":{"Pleasure":{"a":0.0}}}}"#,
            r#"{"states":["a"],"weights":{"a":{"Pleasure":{"a":-1.0}}}}"#,
        ];
        for doc in bad {
            assert!(serde_json::from_str::<MstnConfig>(doc).is_err(), "{doc}");
        }
    }
}
