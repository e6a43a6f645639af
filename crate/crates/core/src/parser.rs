//! Keyword-lexicon extraction of case frames from romanized utterances.
//!
//! The first lexicon verb (lemma or synonym, left to right) decides the case
//! route and event type. The first recognized noun after it fills the
//! frame's object slot. Utterances without a known verb are treated as small
//! talk.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::egc::{normalize_term, CaseFrame, DeepCase, EventType};

/// Longest multi-word noun the matcher tries.
const MAX_NOUN_WORDS: usize = 3;

pub const DEFAULT_SUBJECT: &str = "user";
pub const SMALL_TALK_VERB: &str = "talk";

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("empty utterance")]
    EmptyUtterance,
    #[error("invalid lexicon at {path}: {message}")]
    Lexicon { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseRoute {
    #[serde(rename = "CASE1")]
    Case1,
    #[serde(rename = "CASE2")]
    Case2,
    #[serde(rename = "CASE3")]
    Case3,
}

impl CaseRoute {
    pub const ALL: [CaseRoute; 3] = [CaseRoute::Case1, CaseRoute::Case2, CaseRoute::Case3];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseRoute::Case1 => "CASE1",
            CaseRoute::Case2 => "CASE2",
            CaseRoute::Case3 => "CASE3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NounCategory {
    Spot,
    Food,
    Gift,
    Other,
}

impl NounCategory {
    pub const ALL: [NounCategory; 4] = [
        NounCategory::Spot,
        NounCategory::Food,
        NounCategory::Gift,
        NounCategory::Other,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerbEntry {
    pub lemma: String,
    #[serde(default)]
    pub synonyms: Vec<String>,
    pub case: CaseRoute,
    pub event_type: EventType,
    /// Kind of item a Case 2 verb asks for when the object does not say.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<NounCategory>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NounEntry {
    pub term: String,
    pub category: NounCategory,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawLexicon {
    verbs: Vec<VerbEntry>,
    #[serde(default)]
    nouns: Vec<NounEntry>,
    #[serde(default)]
    stopwords: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawLexicon", into = "RawLexicon")]
pub struct Lexicon {
    verbs: Vec<VerbEntry>,
    nouns: Vec<NounEntry>,
    stopwords: BTreeSet<String>,
    verb_forms: HashMap<String, usize>,
    noun_index: HashMap<String, usize>,
}

impl PartialEq for Lexicon {
    fn eq(&self, other: &Self) -> bool {
        self.verbs == other.verbs && self.nouns == other.nouns && self.stopwords == other.stopwords
    }
}

impl From<Lexicon> for RawLexicon {
    fn from(l: Lexicon) -> Self {
        RawLexicon {
            verbs: l.verbs,
            nouns: l.nouns,
            stopwords: l.stopwords.into_iter().collect(),
        }
    }
}

impl TryFrom<RawLexicon> for Lexicon {
    type Error = ParseError;

    fn try_from(raw: RawLexicon) -> Result<Self, Self::Error> {
        Lexicon::new(raw.verbs, raw.nouns, raw.stopwords)
    }
}

/// Verbs each case must know about.
const REQUIRED_VERBS: [(CaseRoute, &[&str]); 3] = [
    (CaseRoute::Case1, &["go", "come", "see", "look_for"]),
    (CaseRoute::Case2, &["eat", "buy", "hungry"]),
    (CaseRoute::Case3, &["talk"]),
];

impl Lexicon {
    pub fn new(
        verbs: Vec<VerbEntry>,
        nouns: Vec<NounEntry>,
        stopwords: Vec<String>,
    ) -> Result<Self, ParseError> {
        let bad = |path: String, message: String| ParseError::Lexicon { path, message };
        let mut verbs = verbs;
        let mut verb_forms = HashMap::new();
        for (i, v) in verbs.iter_mut().enumerate() {
            v.lemma = normalize_term(&v.lemma);
            if v.lemma.is_empty() {
                return Err(bad(format!("verbs[{i}].lemma"), "empty lemma".into()));
            }
            for s in &mut v.synonyms {
                *s = normalize_term(s);
            }
            for (j, form) in std::iter::once(&v.lemma).chain(&v.synonyms).enumerate() {
                if let Some(prev) = verb_forms.insert(form.clone(), i) {
                    let path = if j == 0 {
                        format!("verbs[{i}].lemma")
                    } else {
                        format!("verbs[{i}].synonyms[{}]", j - 1)
                    };
                    return Err(bad(path, format!("`{form}` already belongs to verbs[{prev}]")));
                }
            }
        }
        for (case, required) in REQUIRED_VERBS {
            for lemma in required {
                if !verbs.iter().any(|v| v.lemma == *lemma && v.case == case) {
                    return Err(bad(
                        "verbs".into(),
                        format!("missing {} verb `{lemma}`", case.as_str()),
                    ));
                }
            }
        }

        let mut nouns = nouns;
        let mut noun_index = HashMap::new();
        for (i, n) in nouns.iter_mut().enumerate() {
            n.term = normalize_term(&n.term);
            if n.term.is_empty() {
                return Err(bad(format!("nouns[{i}].term"), "empty term".into()));
            }
            if noun_index.insert(n.term.clone(), i).is_some() {
                return Err(bad(format!("nouns[{i}].term"), format!("duplicate noun `{}`", n.term)));
            }
        }
        Ok(Self {
            verbs,
            nouns,
            stopwords: stopwords.iter().map(|s| normalize_term(s)).collect(),
            verb_forms,
            noun_index,
        })
    }

    pub fn verbs(&self) -> &[VerbEntry] {
        &self.verbs
    }

    pub fn nouns(&self) -> &[NounEntry] {
        &self.nouns
    }

    pub fn verb(&self, form: &str) -> Option<&VerbEntry> {
        self.verb_forms.get(form).map(|&i| &self.verbs[i])
    }

    pub fn noun_category(&self, term: &str) -> Option<NounCategory> {
        self.noun_index.get(term).map(|&i| self.nouns[i].category)
    }

    pub fn add_noun(&mut self, term: &str, category: NounCategory) {
        let term = normalize_term(term);
        match self.noun_index.get(&term) {
            Some(&i) => self.nouns[i].category = category,
            None => {
                self.noun_index.insert(term.clone(), self.nouns.len());
                self.nouns.push(NounEntry { term, category });
            }
        }
    }

    pub fn remove_noun(&mut self, term: &str) {
        let term = normalize_term(term);
        self.nouns.retain(|n| n.term != term);
        self.noun_index = self
            .nouns
            .iter()
            .enumerate()
            .map(|(i, n)| (n.term.clone(), i))
            .collect();
    }

    /// Lowercases, strips punctuation, folds "look up"/"look for" into
    /// `look_for` and drops stopwords.
    pub fn tokenize(&self, text: &str) -> Result<Vec<String>, ParseError> {
        let cleaned: String = text
            .chars()
            .map(|c| if c.is_alphanumeric() || c == '_' { c.to_ascii_lowercase() } else { ' ' })
            .collect();
        let raw: Vec<&str> = cleaned.split_whitespace().collect();
        let mut out = Vec::with_capacity(raw.len());
        let mut i = 0;
        while i < raw.len() {
            if raw[i] == "look" && matches!(raw.get(i + 1), Some(&"up") | Some(&"for")) {
                out.push("look_for".to_string());
                i += 2;
                continue;
            }
            if !self.stopwords.contains(raw[i]) {
                out.push(raw[i].to_string());
            }
            i += 1;
        }
        if out.is_empty() {
            return Err(ParseError::EmptyUtterance);
        }
        Ok(out)
    }

    /// Recognized nouns with the token index they start at, longest match first.
    fn nouns_in(&self, tokens: &[String]) -> Vec<(usize, String)> {
        let mut found = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            let longest = (1..=MAX_NOUN_WORDS.min(tokens.len() - i))
                .rev()
                .map(|n| tokens[i..i + n].join("_"))
                .zip((1..=MAX_NOUN_WORDS.min(tokens.len() - i)).rev())
                .find(|(term, _)| self.noun_index.contains_key(term));
            match longest {
                Some((term, n)) => {
                    found.push((i, term));
                    i += n;
                }
                None => i += 1,
            }
        }
        found
    }

    pub fn parse(&self, text: &str) -> Result<ParsedUtterance, ParseError> {
        let tokens = self.tokenize(text)?;
        let nouns = self.nouns_in(&tokens);

        let verb = tokens
            .iter()
            .enumerate()
            .find_map(|(i, t)| self.verb(t).map(|v| (i, v)));
        let (verb_pos, verb_lemma, case_route, event_type, target) = match verb {
            Some((i, v)) => (Some(i), v.lemma.clone(), v.case, v.event_type, v.target),
            None => {
                let talk = self.verb(SMALL_TALK_VERB).expect("lexicon validation requires talk");
                (None, talk.lemma.clone(), CaseRoute::Case3, talk.event_type, talk.target)
            }
        };

        let object = nouns
            .iter()
            .find(|(pos, _)| verb_pos.is_none_or(|v| *pos > v))
            .map(|(_, term)| term.clone());
        let object_category = object.as_deref().and_then(|t| self.noun_category(t));

        let mut frame = CaseFrame::new(event_type)
            .with(DeepCase::Subject, DEFAULT_SUBJECT)
            .with(DeepCase::Predicate, verb_lemma.clone());
        match (event_type.object_slot(), &object) {
            (Some(slot), Some(term)) if event_type.required_slots().len() == 3 => {
                frame = frame.with(slot, term.clone());
            }
            (Some(_), _) => {
                // a frame that cannot be filled is read as a bare verb event
                frame.event_type = EventType::VerbS;
                if let Some(term) = &object {
                    frame = frame.with(DeepCase::Object, term.clone());
                }
            }
            (None, _) => {}
        }

        Ok(ParsedUtterance {
            frame,
            verb_lemma,
            case_route,
            object,
            object_category,
            target,
            nouns: nouns.into_iter().map(|(_, t)| t).collect(),
            tokens,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParsedUtterance {
    pub frame: CaseFrame,
    pub verb_lemma: String,
    pub case_route: CaseRoute,
    pub object: Option<String>,
    pub object_category: Option<NounCategory>,
    /// Item kind the verb asks for, if the lexicon names one.
    pub target: Option<NounCategory>,
    pub nouns: Vec<String>,
    pub tokens: Vec<String>,
}

/// Terms of an utterance that are known nouns, in order.
pub fn distinct_nouns(p: &ParsedUtterance) -> Vec<&str> {
    let mut seen = HashSet::new();
    p.nouns.iter().map(String::as_str).filter(|n| seen.insert(*n)).collect()
}
