//! JSON documents and Graphviz output for nets.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::net::{FuzzyPetriNet, Marking, Place, Proposition, RawNet, Transition};
use super::FpnError;

/// A net document, optionally carrying an initial marking.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetDocument {
    #[serde(default)]
    pub propositions: Vec<Proposition>,
    #[serde(default)]
    pub places: Vec<Place>,
    #[serde(default)]
    pub transitions: Vec<Transition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marking: Option<Marking>,
}

impl NetDocument {
    pub fn into_parts(self) -> Result<(FuzzyPetriNet, Option<Marking>), FpnError> {
        let net = FuzzyPetriNet::try_from(RawNet {
            propositions: self.propositions,
            places: self.places,
            transitions: self.transitions,
        })?;
        if let Some(m) = &self.marking {
            for (place, _) in m.iter() {
                if !net.has_place(place) {
                    return Err(FpnError::Validation {
                        path: format!("marking.degrees.{place}"),
                        message: format!("unknown place `{place}`"),
                    });
                }
            }
        }
        Ok((net, self.marking))
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, FpnError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let source = e.into_inner();
        // range and integrity failures surface as custom serde errors
        match source.to_string() {
            msg if msg.starts_with("invalid net at ") => FpnError::Validation {
                path,
                message: msg,
            },
            _ => FpnError::Malformed { path, source },
        }
    })
}

pub fn net_to_json(net: &FuzzyPetriNet) -> String {
    serde_json::to_string_pretty(net).expect("net serialization is infallible")
}

/// Parses a net document. An embedded `marking`, if present, is validated too.
pub fn net_from_json(text: &str) -> Result<FuzzyPetriNet, FpnError> {
    let doc: NetDocument = parse(text)?;
    doc.into_parts().map(|(net, _)| net)
}

pub fn marking_from_json(text: &str) -> Result<Marking, FpnError> {
    parse(text)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering: circles for places, filled bars for transitions.
pub fn export_dot(net: &FuzzyPetriNet) -> String {
    let mut out = String::from("digraph fpn {\n  rankdir=LR;\n");
    for p in net.places() {
        let label = net
            .propositions()
            .iter()
            .find(|d| d.id == p.proposition)
            .map_or(p.proposition.as_str(), |d| d.label.as_str());
        let _ = writeln!(out, "  {} [shape=circle, label={}];", quote(&p.id), quote(label));
    }
    for t in net.transitions() {
        let _ = writeln!(
            out,
            "  {} [shape=box, style=filled, fillcolor=black, fontcolor=white, height=0.1, label={}];",
            quote(&t.id),
            quote(&format!("{} mu={}", t.id, t.mu))
        );
    }
    for t in net.transitions() {
        for p in &t.inputs {
            let _ = writeln!(out, "  {} -> {};", quote(p), quote(&t.id));
        }
        for p in &t.outputs {
            let _ = writeln!(out, "  {} -> {};", quote(&t.id), quote(p));
        }
    }
    out.push_str("}\n");
    out
}
