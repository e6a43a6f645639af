use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::Recommendation;
use crate::egc::normalize_term;

/// Terms the user reacted badly to. Only ever grows within a session.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TabooList {
    terms: BTreeSet<String>,
}

impl TabooList {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns true when the term was not already taboo.
    pub fn insert(&mut self, term: &str) -> bool {
        let term = normalize_term(term);
        !term.is_empty() && self.terms.insert(term)
    }

    pub fn contains(&self, term: &str) -> bool {
        self.terms.contains(&normalize_term(term))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(String::as_str)
    }

    /// Whether any of the labels, or any single word of them, is taboo.
    pub fn blocks<'a>(&self, labels: impl IntoIterator<Item = &'a str>) -> bool {
        if self.terms.is_empty() {
            return false;
        }
        labels.into_iter().any(|label| {
            let norm = normalize_term(label);
            self.terms.contains(&norm) || norm.split('_').any(|w| self.terms.contains(w))
        })
    }
}

/// Drops recommendations whose id, name or favorite-value term hits the
/// taboo list, and taboo spots from the nearby lists of the rest.
pub fn filter_taboo(recs: Vec<Recommendation>, taboo: &TabooList) -> Vec<Recommendation> {
    recs.into_iter()
        .filter(|r| !taboo.blocks(r.labels()))
        .map(|mut r| {
            r.nearby.retain(|spot| !taboo.blocks([spot.as_str()]));
            r
        })
        .collect()
}
