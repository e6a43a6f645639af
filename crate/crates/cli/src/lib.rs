//! Front ends for the concierge: an HTTP session service and a line-oriented
//! REPL. Both are thin shells over [`concierge_core::Concierge`].

pub mod api;
pub mod repl;

use std::path::Path;

use concierge_core::{load_bundle, Concierge, ReasoningConfig};

/// Loads a bundle directory and builds a concierge at the given threshold.
///
/// The error text is the full validation report, one issue per line.
pub fn open_concierge(data: &Path, lambda: Option<f64>) -> anyhow::Result<Concierge> {
    let bundle = load_bundle(data).map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut concierge = Concierge::new(bundle)?;
    if let Some(lambda) = lambda {
        concierge = concierge.with_reasoning(ReasoningConfig::with_lambda(lambda))?;
    }
    Ok(concierge)
}
