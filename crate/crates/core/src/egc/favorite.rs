use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::EgcError;

/// Like/dislike strength of a term, in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct FavoriteValue(f64);

impl FavoriteValue {
    pub fn new(value: f64) -> Result<Self, EgcError> {
        if (-1.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(EgcError::FavoriteValueRange(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl<'de> Deserialize<'de> for FavoriteValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Self::new(f64::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Lowercases, trims and joins inner whitespace with `_`.
pub fn normalize_term(term: &str) -> String {
    term.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join("_")
}

/// Result of a favorite-value lookup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FvLookup {
    pub value: f64,
    /// False when neither a personal nor an initial value exists.
    pub known: bool,
}

/// Initial (shared) and personal favorite values.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawFvDatabase")]
pub struct FvDatabase {
    #[serde(default)]
    initial: BTreeMap<String, FavoriteValue>,
    #[serde(default)]
    personal: BTreeMap<String, BTreeMap<String, FavoriteValue>>,
}

#[derive(Deserialize)]
struct RawFvDatabase {
    #[serde(default)]
    initial: BTreeMap<String, FavoriteValue>,
    #[serde(default)]
    personal: BTreeMap<String, BTreeMap<String, FavoriteValue>>,
}

impl From<RawFvDatabase> for FvDatabase {
    fn from(raw: RawFvDatabase) -> Self {
        let mut db = FvDatabase::default();
        for (term, v) in raw.initial {
            db.initial.insert(normalize_term(&term), v);
        }
        for (person, terms) in raw.personal {
            let entry = db.personal.entry(person).or_default();
            for (term, v) in terms {
                entry.insert(normalize_term(&term), v);
            }
        }
        db
    }
}

impl FvDatabase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_initial(&mut self, term: &str, value: f64) -> Result<(), EgcError> {
        self.initial.insert(normalize_term(term), FavoriteValue::new(value)?);
        Ok(())
    }

    pub fn set_personal(&mut self, person: &str, term: &str, value: f64) -> Result<(), EgcError> {
        self.personal
            .entry(person.to_string())
            .or_default()
            .insert(normalize_term(term), FavoriteValue::new(value)?);
        Ok(())
    }

    pub fn contains(&self, term: &str) -> bool {
        self.initial.contains_key(&normalize_term(term))
    }

    pub fn initial_terms(&self) -> impl Iterator<Item = &str> {
        self.initial.keys().map(String::as_str)
    }

    /// Personal value for `person` if present, else the initial value, else 0
    /// flagged as unknown.
    pub fn lookup(&self, term: &str, person: Option<&str>) -> FvLookup {
        let term = normalize_term(term);
        let personal = person
            .and_then(|p| self.personal.get(p))
            .and_then(|terms| terms.get(&term));
        match personal.or_else(|| self.initial.get(&term)) {
            Some(v) => FvLookup {
                value: v.value(),
                known: true,
            },
            None => FvLookup {
                value: 0.0,
                known: false,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn personal_overrides_initial() {
        let mut db = FvDatabase::new();
        db.set_initial("okonomiyaki", 0.4).unwrap();
        db.set_personal("alice", "okonomiyaki", 0.9).unwrap();
        assert_eq!(db.lookup("okonomiyaki", Some("alice")).value, 0.9);
        assert_eq!(db.lookup("okonomiyaki", Some("bob")).value, 0.4);
        assert_eq!(db.lookup("okonomiyaki", None).value, 0.4);
        let unknown = db.lookup("durian", None);
        assert_eq!((unknown.value, unknown.known), (0.0, false));
    }

    #[test]
    fn terms_are_normalized() {
        let db: FvDatabase =
            serde_json::from_str(r#"{"initial":{" Hiroshima  Castle ":0.5},"personal":{"p":{"KAKI":-0.2}}}"#).unwrap();
        assert_eq!(db.lookup("hiroshima_castle", None).value, 0.5);
        assert_eq!(db.lookup("kaki", Some("p")).value, -0.2);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(serde_json::from_str::<FvDatabase>(r#"{"initial":{"x":1.5}}"#).is_err());
        assert!(FavoriteValue::new(-1.01).is_err());
        assert!(FavoriteValue::new(-1.0).is_ok());
    }
}
