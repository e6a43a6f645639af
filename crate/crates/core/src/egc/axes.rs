//! Mapping a case frame onto the three-axis emotion space and reading
//! pleasure/displeasure off the octant.

use serde::{Deserialize, Serialize};

use super::favorite::FvDatabase;
use super::frame::{CaseFrame, DeepCase, EventType};
use super::EgcError;

/// Dummy favorite value for axes the event type leaves empty.
pub const BETA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmotionAxes {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
}

impl EmotionAxes {
    pub fn new(f1: f64, f2: f64, f3: f64) -> Self {
        Self { f1, f2, f3 }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.f1, self.f2, self.f3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Valence {
    Pleasure,
    Displeasure,
    Neutral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxisAssignment {
    pub axes: EmotionAxes,
    /// Terms that had no favorite value and were read as 0.
    pub unknown_terms: Vec<String>,
}

/// How one axis is computed from the frame.
#[derive(Debug, Clone, Copy, PartialEq)]
enum AxisTerm {
    Fv(DeepCase),
    /// `fv(a) - fv(b)`, clamped; an unfilled operand reads as 0.
    Diff(DeepCase, DeepCase),
    Abs(DeepCase),
    Beta,
}

fn axis_terms(event_type: EventType) -> [AxisTerm; 3] {
    use AxisTerm::*;
    use DeepCase::*;
    match event_type {
        EventType::VerbS
        | EventType::AttrSC
        | EventType::AttrSOfC
        | EventType::AttrSOtC
        | EventType::AttrSOmC
        | EventType::AttrSOsC => [Fv(Subject), Beta, Fv(Predicate)],
        EventType::VerbSOf | EventType::VerbSOt => {
            [Fv(Subject), Diff(ObjectTo, ObjectFrom), Fv(Predicate)]
        }
        EventType::VerbSOm => [Fv(Subject), Fv(ObjectMutual), Fv(Predicate)],
        EventType::VerbSOs => [Diff(Subject, ObjectSource), Beta, Fv(Predicate)],
        EventType::VerbSO => [Fv(Subject), Fv(Object), Fv(Predicate)],
        EventType::VerbSOOf | EventType::VerbSOOt => {
            [Fv(Object), Diff(ObjectTo, ObjectFrom), Fv(Predicate)]
        }
        EventType::VerbSOOm => [Fv(Object), Fv(ObjectMutual), Fv(Predicate)],
        EventType::VerbSOI => [Fv(Object), Abs(Instrument), Fv(Predicate)],
        EventType::VerbSOOc => [Fv(Object), Beta, Fv(ObjectContent)],
        EventType::AttrSOC => [Fv(Object), Beta, Fv(Predicate)],
    }
}

/// Whether the event type leaves the given axis (0-based) to the dummy value.
pub fn axis_is_blank(event_type: EventType, axis: usize) -> bool {
    axis_terms(event_type)[axis] == AxisTerm::Beta
}

struct Reader<'a> {
    frame: &'a CaseFrame,
    db: &'a FvDatabase,
    person: Option<&'a str>,
    unknown: Vec<String>,
}

impl Reader<'_> {
    fn fv(&mut self, case: DeepCase) -> f64 {
        let Some(term) = self.frame.get(case) else {
            return 0.0;
        };
        let hit = self.db.lookup(term, self.person);
        if !hit.known && !self.unknown.iter().any(|t| t == term) {
            self.unknown.push(term.to_string());
        }
        hit.value
    }

    fn axis(&mut self, term: AxisTerm) -> f64 {
        match term {
            AxisTerm::Fv(c) => self.fv(c),
            AxisTerm::Diff(a, b) => (self.fv(a) - self.fv(b)).clamp(-1.0, 1.0),
            AxisTerm::Abs(c) => self.fv(c).abs(),
            AxisTerm::Beta => BETA,
        }
    }
}

/// Assigns the three emotion axes for a frame.
///
/// `V(S,O)` has a second form `(f_O, beta, f_P)` that is used when the
/// subject has no favorite value.
pub fn assign_axes(
    frame: &CaseFrame,
    db: &FvDatabase,
    person: Option<&str>,
) -> Result<AxisAssignment, EgcError> {
    frame.validate()?;
    let mut terms = axis_terms(frame.event_type);
    if frame.event_type == EventType::VerbSO {
        let subject = frame.get(DeepCase::Subject).unwrap_or_default();
        if !db.lookup(subject, person).known {
            terms = [
                AxisTerm::Fv(DeepCase::Object),
                AxisTerm::Beta,
                AxisTerm::Fv(DeepCase::Predicate),
            ];
        }
    }
    let mut reader = Reader {
        frame,
        db,
        person,
        unknown: Vec::new(),
    };
    let axes = EmotionAxes::new(
        reader.axis(terms[0]),
        reader.axis(terms[1]),
        reader.axis(terms[2]),
    );
    Ok(AxisAssignment {
        axes,
        unknown_terms: reader.unknown,
    })
}

/// Pleasure when the axis signs multiply to a positive number, displeasure
/// when negative, neutral when the vector lies on an axis plane.
pub fn valence(axes: &EmotionAxes) -> Valence {
    let [a, b, c] = axes.as_array();
    if a == 0.0 || b == 0.0 || c == 0.0 {
        return Valence::Neutral;
    }
    let negatives = [a, b, c].iter().filter(|v| **v < 0.0).count();
    if negatives % 2 == 0 {
        Valence::Pleasure
    } else {
        Valence::Displeasure
    }
}

/// Geometric mean of the axis magnitudes; 0 on any axis plane.
pub fn intensity(axes: &EmotionAxes) -> f64 {
    let product = axes.f1.abs() * axes.f2.abs() * axes.f3.abs();
    product.cbrt().min(1.0)
}
