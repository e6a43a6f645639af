//! Net structure: propositions, places, transitions and the truth-degree marking.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::FpnError;

/// A proposition `d_i` whose truth degree a place carries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Proposition {
    pub id: String,
    pub label: String,
}

/// A place, bound one-to-one to a proposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Place {
    pub id: String,
    pub proposition: String,
}

/// A transition with certainty factor `mu` and bags of input/output places.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub id: String,
    pub mu: f64,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

/// Wire form of a net. Validation happens on conversion into [`FuzzyPetriNet`].
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub(crate) struct RawNet {
    #[serde(default)]
    pub propositions: Vec<Proposition>,
    #[serde(default)]
    pub places: Vec<Place>,
    #[serde(default)]
    pub transitions: Vec<Transition>,
}

/// A validated fuzzy Petri net.
///
/// Immutable once built. Arcs are resolved to place indices so reasoning
/// runs without string lookups.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawNet", into = "RawNet")]
pub struct FuzzyPetriNet {
    propositions: Vec<Proposition>,
    places: Vec<Place>,
    transitions: Vec<Transition>,
    place_index: HashMap<String, usize>,
    place_of_proposition: HashMap<String, usize>,
    arcs: Vec<(Vec<usize>, Vec<usize>)>,
}

impl PartialEq for FuzzyPetriNet {
    fn eq(&self, other: &Self) -> bool {
        self.propositions == other.propositions
            && self.places == other.places
            && self.transitions == other.transitions
    }
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> FpnError {
    FpnError::Validation {
        path: path.into(),
        message: message.into(),
    }
}

impl FuzzyPetriNet {
    pub fn new(
        propositions: Vec<Proposition>,
        places: Vec<Place>,
        transitions: Vec<Transition>,
    ) -> Result<Self, FpnError> {
        let mut prop_ids = HashSet::new();
        for (i, p) in propositions.iter().enumerate() {
            if p.id.is_empty() {
                return Err(invalid(format!("propositions[{i}].id"), "empty id"));
            }
            if !prop_ids.insert(p.id.as_str()) {
                return Err(invalid(
                    format!("propositions[{i}].id"),
                    format!("duplicate proposition id `{}`", p.id),
                ));
            }
        }

        let mut place_index = HashMap::new();
        let mut place_of_proposition = HashMap::new();
        for (i, p) in places.iter().enumerate() {
            if p.id.is_empty() {
                return Err(invalid(format!("places[{i}].id"), "empty id"));
            }
            if place_index.insert(p.id.clone(), i).is_some() {
                return Err(invalid(
                    format!("places[{i}].id"),
                    format!("duplicate place id `{}`", p.id),
                ));
            }
            if !prop_ids.contains(p.proposition.as_str()) {
                return Err(invalid(
                    format!("places[{i}].proposition"),
                    format!("unknown proposition `{}`", p.proposition),
                ));
            }
            if place_of_proposition.insert(p.proposition.clone(), i).is_some() {
                return Err(invalid(
                    format!("places[{i}].proposition"),
                    format!("proposition `{}` already has a place", p.proposition),
                ));
            }
        }
        if let Some((i, p)) = propositions
            .iter()
            .enumerate()
            .find(|(_, p)| !place_of_proposition.contains_key(&p.id))
        {
            return Err(invalid(
                format!("propositions[{i}]"),
                format!("proposition `{}` has no place", p.id),
            ));
        }

        let mut transition_ids = HashSet::new();
        let mut arcs = Vec::with_capacity(transitions.len());
        for (i, t) in transitions.iter().enumerate() {
            if t.id.is_empty() {
                return Err(invalid(format!("transitions[{i}].id"), "empty id"));
            }
            if !transition_ids.insert(t.id.as_str()) || place_index.contains_key(&t.id) {
                return Err(invalid(
                    format!("transitions[{i}].id"),
                    format!("duplicate node id `{}`", t.id),
                ));
            }
            if !(0.0..=1.0).contains(&t.mu) {
                return Err(invalid(
                    format!("transitions[{i}].mu"),
                    format!("certainty factor {} outside [0,1]", t.mu),
                ));
            }
            if t.inputs.is_empty() {
                return Err(invalid(format!("transitions[{i}].inputs"), "no input places"));
            }
            if t.outputs.is_empty() {
                return Err(invalid(format!("transitions[{i}].outputs"), "no output places"));
            }
            let resolve = |list: &[String], field: &str| -> Result<Vec<usize>, FpnError> {
                list.iter()
                    .enumerate()
                    .map(|(j, id)| {
                        place_index.get(id).copied().ok_or_else(|| {
                            invalid(
                                format!("transitions[{i}].{field}[{j}]"),
                                format!("unknown place `{id}`"),
                            )
                        })
                    })
                    .collect()
            };
            arcs.push((resolve(&t.inputs, "inputs")?, resolve(&t.outputs, "outputs")?));
        }

        Ok(Self {
            propositions,
            places,
            transitions,
            place_index,
            place_of_proposition,
            arcs,
        })
    }

    pub fn propositions(&self) -> &[Proposition] {
        &self.propositions
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition(&self, id: &str) -> Option<&Transition> {
        self.transitions.iter().find(|t| t.id == id)
    }

    pub fn has_place(&self, id: &str) -> bool {
        self.place_index.contains_key(id)
    }

    /// Place carrying the given proposition.
    pub fn place_of(&self, proposition: &str) -> Option<&Place> {
        self.place_of_proposition
            .get(proposition)
            .map(|&i| &self.places[i])
    }

    /// Replaces proposition labels; ids without an entry keep their label.
    pub fn with_labels(mut self, labels: &BTreeMap<String, String>) -> Self {
        for p in &mut self.propositions {
            if let Some(label) = labels.get(&p.id) {
                p.label.clone_from(label);
            }
        }
        self
    }

    /// Builds a marking from proposition-keyed degrees.
    pub fn marking_from_propositions<'a>(
        &self,
        degrees: impl IntoIterator<Item = (&'a str, f64)>,
    ) -> Result<Marking, FpnError> {
        let mut m = Marking::new();
        for (prop, degree) in degrees {
            let place = self
                .place_of(prop)
                .ok_or_else(|| FpnError::UnknownProposition(prop.to_string()))?;
            m.set(&place.id, degree)?;
        }
        Ok(m)
    }

    pub(crate) fn index_of_place(&self, id: &str) -> Option<usize> {
        self.place_index.get(id).copied()
    }

    pub(crate) fn arcs(&self) -> &[(Vec<usize>, Vec<usize>)] {
        &self.arcs
    }
}

impl TryFrom<RawNet> for FuzzyPetriNet {
    type Error = FpnError;

    fn try_from(raw: RawNet) -> Result<Self, Self::Error> {
        Self::new(raw.propositions, raw.places, raw.transitions)
    }
}

impl From<FuzzyPetriNet> for RawNet {
    fn from(net: FuzzyPetriNet) -> Self {
        RawNet {
            propositions: net.propositions,
            places: net.places,
            transitions: net.transitions,
        }
    }
}

/// Truth degrees per place id. Places without an entry have degree 0.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMarking")]
pub struct Marking {
    degrees: BTreeMap<String, f64>,
}

#[derive(Deserialize)]
struct RawMarking {
    #[serde(default)]
    degrees: BTreeMap<String, f64>,
}

impl TryFrom<RawMarking> for Marking {
    type Error = FpnError;

    fn try_from(raw: RawMarking) -> Result<Self, Self::Error> {
        let mut m = Marking::new();
        for (place, degree) in raw.degrees {
            m.set(&place, degree).map_err(|_| {
                invalid(
                    format!("degrees.{place}"),
                    format!("degree {degree} outside [0,1]"),
                )
            })?;
        }
        Ok(m)
    }
}

impl Marking {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, place: &str, degree: f64) -> Result<(), FpnError> {
        if !(0.0..=1.0).contains(&degree) {
            return Err(FpnError::DegreeOutOfRange {
                place: place.to_string(),
                degree,
            });
        }
        self.degrees.insert(place.to_string(), degree);
        Ok(())
    }

    pub fn with(mut self, place: &str, degree: f64) -> Result<Self, FpnError> {
        self.set(place, degree)?;
        Ok(self)
    }

    pub fn get(&self, place: &str) -> f64 {
        self.degrees.get(place).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.degrees.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub(crate) fn insert_unchecked(&mut self, place: &str, degree: f64) {
        self.degrees.insert(place.to_string(), degree);
    }
}
