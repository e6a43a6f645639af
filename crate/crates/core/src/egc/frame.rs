use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::EgcError;

/// Deep-case roles a case frame can fill.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeepCase {
    Subject,
    Object,
    ObjectFrom,
    ObjectTo,
    ObjectMutual,
    ObjectSource,
    ObjectContent,
    Instrument,
    Predicate,
}

impl DeepCase {
    pub fn as_str(self) -> &'static str {
        match self {
            DeepCase::Subject => "subject",
            DeepCase::Object => "object",
            DeepCase::ObjectFrom => "object_from",
            DeepCase::ObjectTo => "object_to",
            DeepCase::ObjectMutual => "object_mutual",
            DeepCase::ObjectSource => "object_source",
            DeepCase::ObjectContent => "object_content",
            DeepCase::Instrument => "instrument",
            DeepCase::Predicate => "predicate",
        }
    }
}

/// Event (verb, `V`) and attribute (adjective, `A`) frame shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EventType {
    VerbS,
    AttrSC,
    AttrSOfC,
    AttrSOtC,
    AttrSOmC,
    AttrSOsC,
    VerbSOf,
    VerbSOt,
    VerbSOm,
    VerbSOs,
    VerbSO,
    VerbSOOf,
    VerbSOOt,
    VerbSOOm,
    VerbSOI,
    VerbSOOc,
    AttrSOC,
}

impl EventType {
    pub const ALL: [EventType; 17] = [
        EventType::VerbS,
        EventType::AttrSC,
        EventType::AttrSOfC,
        EventType::AttrSOtC,
        EventType::AttrSOmC,
        EventType::AttrSOsC,
        EventType::VerbSOf,
        EventType::VerbSOt,
        EventType::VerbSOm,
        EventType::VerbSOs,
        EventType::VerbSO,
        EventType::VerbSOOf,
        EventType::VerbSOOt,
        EventType::VerbSOOm,
        EventType::VerbSOI,
        EventType::VerbSOOc,
        EventType::AttrSOC,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EventType::VerbS => "V(S)",
            EventType::AttrSC => "A(S,C)",
            EventType::AttrSOfC => "A(S,OF,C)",
            EventType::AttrSOtC => "A(S,OT,C)",
            EventType::AttrSOmC => "A(S,OM,C)",
            EventType::AttrSOsC => "A(S,OS,C)",
            EventType::VerbSOf => "V(S,OF)",
            EventType::VerbSOt => "V(S,OT)",
            EventType::VerbSOm => "V(S,OM)",
            EventType::VerbSOs => "V(S,OS)",
            EventType::VerbSO => "V(S,O)",
            EventType::VerbSOOf => "V(S,O,OF)",
            EventType::VerbSOOt => "V(S,O,OT)",
            EventType::VerbSOOm => "V(S,O,OM)",
            EventType::VerbSOI => "V(S,O,I)",
            EventType::VerbSOOc => "V(S,O,OC)",
            EventType::AttrSOC => "A(S,O,C)",
        }
    }

    /// Slots a frame of this type must fill. Subject and predicate always.
    pub fn required_slots(self) -> Vec<DeepCase> {
        use DeepCase::*;
        let extra: &[DeepCase] = match self {
            EventType::VerbS | EventType::AttrSC => &[],
            EventType::AttrSOfC | EventType::VerbSOf => &[ObjectFrom],
            EventType::AttrSOtC | EventType::VerbSOt => &[ObjectTo],
            EventType::AttrSOmC | EventType::VerbSOm => &[ObjectMutual],
            EventType::AttrSOsC | EventType::VerbSOs => &[ObjectSource],
            EventType::VerbSO | EventType::AttrSOC => &[Object],
            EventType::VerbSOOf => &[Object, ObjectFrom],
            EventType::VerbSOOt => &[Object, ObjectTo],
            EventType::VerbSOOm => &[Object, ObjectMutual],
            EventType::VerbSOI => &[Object, Instrument],
            EventType::VerbSOOc => &[Object, ObjectContent],
        };
        let mut slots = vec![Subject];
        slots.extend_from_slice(extra);
        slots.push(Predicate);
        slots
    }

    /// Slot a parsed object noun goes into, if the frame takes one.
    pub fn object_slot(self) -> Option<DeepCase> {
        self.required_slots()
            .into_iter()
            .find(|s| !matches!(s, DeepCase::Subject | DeepCase::Predicate))
    }
}

impl fmt::Display for EventType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EventType {
    type Err = EgcError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        Self::ALL
            .into_iter()
            .find(|e| e.as_str() == compact)
            .ok_or_else(|| EgcError::UnknownEventType(s.to_string()))
    }
}

impl Serialize for EventType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for EventType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A verb-centred frame: event type plus the terms filling its deep cases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseFrame {
    pub event_type: EventType,
    pub slots: BTreeMap<DeepCase, String>,
}

impl CaseFrame {
    pub fn new(event_type: EventType) -> Self {
        Self {
            event_type,
            slots: BTreeMap::new(),
        }
    }

    pub fn with(mut self, case: DeepCase, term: impl Into<String>) -> Self {
        self.slots.insert(case, term.into());
        self
    }

    pub fn get(&self, case: DeepCase) -> Option<&str> {
        self.slots.get(&case).map(String::as_str)
    }

    pub fn validate(&self) -> Result<(), EgcError> {
        for slot in self.event_type.required_slots() {
            if self.get(slot).is_none_or(|t| t.trim().is_empty()) {
                return Err(EgcError::MissingSlot {
                    event_type: self.event_type,
                    slot,
                });
            }
        }
        Ok(())
    }
}
