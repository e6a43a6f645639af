use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use concierge_core::fpn::{export_dot, marking_from_json, FiringTrace, NetDocument, ReasoningConfig};
use concierge_core::{FuzzyPetriNet, Marking};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "fpn", version, about = "Run and draw fuzzy Petri nets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reason to a fixpoint and print every place's degree.
    Run {
        #[arg(long)]
        net: PathBuf,
        /// Initial marking; defaults to the one embedded in the net file.
        #[arg(long)]
        marking: Option<PathBuf>,
        #[arg(long, default_value_t = 0.1)]
        lambda: f64,
        /// List firings in the order they happened.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the net in Graphviz dot.
    Dot {
        #[arg(long)]
        net: PathBuf,
    },
}

#[derive(Serialize)]
struct RunOutput<'a> {
    degrees: Vec<PlaceDegree<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a FiringTrace>,
}

#[derive(Serialize)]
struct PlaceDegree<'a> {
    place: &'a str,
    proposition: &'a str,
    degree: f64,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn read_net(path: &Path) -> anyhow::Result<(FuzzyPetriNet, Option<Marking>)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: NetDocument = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    doc.into_parts().with_context(|| format!("checking {}", path.display()))
}

/// Drops float noise below 1e-9 so a chain of 0.9s prints as 0.81.
fn tidy(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Dot { net } => {
            let (net, _) = read_net(&net)?;
            print!("{}", export_dot(&net));
        }
        Command::Run {
            net,
            marking,
            lambda,
            trace,
            json,
        } => {
            let (net, embedded) = read_net(&net)?;
            let initial = match marking {
                Some(path) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    marking_from_json(&text).with_context(|| format!("checking {}", path.display()))?
                }
                None => embedded.context("no --marking given and the net file embeds none")?,
            };
            for (place, _) in initial.iter() {
                anyhow::ensure!(net.has_place(place), "marking names unknown place `{place}`");
            }
            let cfg = ReasoningConfig::with_lambda(lambda);
            let (out, firings) = net.run(&initial, &cfg)?;
            let degrees: Vec<PlaceDegree> = net
                .places()
                .iter()
                .map(|p| PlaceDegree {
                    place: &p.id,
                    proposition: &p.proposition,
                    degree: out.get(&p.id),
                })
                .collect();
            if json {
                let doc = RunOutput {
                    degrees,
                    trace: trace.then_some(&firings),
                };
                println!("{}", serde_json::to_string_pretty(&doc)?);
                return Ok(());
            }
            if trace {
                for r in &firings.records {
                    println!("#{} {} inputs={:?} -> {}", r.iteration, r.transition, r.inputs, tidy(r.produced));
                }
            }
            for d in degrees {
                println!("{}\t{}\t{}", d.proposition, d.place, tidy(d.degree));
            }
        }
    }
    Ok(())
}
