//! Forward reasoning: enabling, firing and the fixpoint loop.

use serde::{Deserialize, Serialize};

use super::net::{FuzzyPetriNet, Marking, Transition};
use super::FpnError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReasoningConfig {
    /// Minimum input degree for a transition to be enabled.
    pub lambda: f64,
    /// Pass budget. `None` means ten passes per transition.
    pub max_iterations: Option<usize>,
    /// A pass whose largest degree change is within this bound ends the run.
    pub tolerance: f64,
}

impl Default for ReasoningConfig {
    fn default() -> Self {
        Self {
            lambda: 0.1,
            max_iterations: None,
            tolerance: 1e-9,
        }
    }
}

impl ReasoningConfig {
    pub fn with_lambda(lambda: f64) -> Self {
        Self {
            lambda,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), FpnError> {
        let bad = |path: &str, message: String| FpnError::Validation {
            path: path.into(),
            message,
        };
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(bad("lambda", format!("threshold {} outside [0,1]", self.lambda)));
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return Err(bad("tolerance", format!("tolerance {} is negative", self.tolerance)));
        }
        if self.max_iterations == Some(0) {
            return Err(bad("max_iterations", "must be positive".into()));
        }
        Ok(())
    }

    fn budget(&self, transitions: usize) -> usize {
        self.max_iterations.unwrap_or(10 * transitions).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiringRecord {
    pub iteration: usize,
    pub transition: String,
    pub inputs: Vec<f64>,
    pub produced: f64,
}

/// Firings that raised at least one output degree, in firing order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FiringTrace {
    pub records: Vec<FiringRecord>,
}

impl FiringTrace {
    /// Distinct transition ids in first-firing order.
    pub fn fired_transitions(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for r in &self.records {
            if !out.contains(&r.transition.as_str()) {
                out.push(&r.transition);
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// True iff every input place holds a degree of at least `lambda`.
pub fn enabled(t: &Transition, m: &Marking, lambda: f64) -> bool {
    t.inputs.iter().all(|p| m.get(p) >= lambda)
}

/// Degree a transition deposits: the minimum input degree scaled by `mu`.
pub fn produced_degree(t: &Transition, m: &Marking) -> f64 {
    let weakest = t.inputs.iter().map(|p| m.get(p)).fold(1.0_f64, f64::min);
    weakest * t.mu
}

/// Fires `t` once. Output places keep the larger of their current degree and
/// the produced one; input degrees are left in place.
pub fn fire(t: &Transition, m: &Marking) -> Marking {
    let produced = produced_degree(t, m);
    let mut next = m.clone();
    for out in &t.outputs {
        if produced > next.get(out) {
            next.insert_unchecked(out, produced);
        }
    }
    next
}

impl FuzzyPetriNet {
    /// Runs all enabled transitions to a fixpoint, in declaration order.
    pub fn run(
        &self,
        initial: &Marking,
        cfg: &ReasoningConfig,
    ) -> Result<(Marking, FiringTrace), FpnError> {
        let order: Vec<usize> = (0..self.transitions().len()).collect();
        self.run_in_order(initial, cfg, &order)
    }

    /// Same as [`run`](Self::run) but visits transitions in `order` each pass.
    /// `order` must be a permutation of the transition indices.
    pub fn run_in_order(
        &self,
        initial: &Marking,
        cfg: &ReasoningConfig,
        order: &[usize],
    ) -> Result<(Marking, FiringTrace), FpnError> {
        cfg.validate()?;
        let n = self.transitions().len();
        let mut seen = vec![false; n];
        if order.len() != n || !order.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true)) {
            return Err(FpnError::Validation {
                path: "order".into(),
                message: "evaluation order is not a permutation of the transitions".into(),
            });
        }

        let mut y = vec![0.0; self.places().len()];
        for (place, degree) in initial.iter() {
            let idx = self
                .index_of_place(place)
                .ok_or_else(|| FpnError::UnknownPlace(place.to_string()))?;
            y[idx] = degree;
        }

        let arcs = self.arcs();
        let mut trace = FiringTrace::default();
        let budget = cfg.budget(n);
        let mut converged = false;
        for iteration in 0..budget {
            let mut largest_change = 0.0_f64;
            for &ti in order {
                let (inputs, outputs) = &arcs[ti];
                if !inputs.iter().all(|&p| y[p] >= cfg.lambda) {
                    continue;
                }
                let mu = self.transitions()[ti].mu;
                let input_degrees: Vec<f64> = inputs.iter().map(|&p| y[p]).collect();
                let produced = input_degrees.iter().copied().fold(1.0_f64, f64::min) * mu;
                let mut changed = false;
                for &o in outputs {
                    if produced > y[o] {
                        largest_change = largest_change.max(produced - y[o]);
                        y[o] = produced;
                        changed = true;
                    }
                }
                if changed {
                    trace.records.push(FiringRecord {
                        iteration,
                        transition: self.transitions()[ti].id.clone(),
                        inputs: input_degrees,
                        produced,
                    });
                }
            }
            if largest_change <= cfg.tolerance {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(FpnError::BudgetExceeded { iterations: budget });
        }

        let mut marking = Marking::new();
        for (place, &degree) in self.places().iter().zip(&y) {
            if degree > 0.0 {
                marking.insert_unchecked(&place.id, degree);
            }
        }
        Ok((marking, trace))
    }

    /// Degree of a proposition under `m`.
    pub fn query(&self, m: &Marking, proposition: &str) -> Result<f64, FpnError> {
        self.place_of(proposition)
            .map(|p| m.get(&p.id))
            .ok_or_else(|| FpnError::UnknownProposition(proposition.to_string()))
    }
}
