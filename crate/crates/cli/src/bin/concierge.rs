use std::io::{self, IsTerminal};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use concierge_cli::{api, open_concierge, repl};
use concierge_core::SessionStore;

#[derive(Parser)]
#[command(name = "concierge", version, about = "Emotion-aware tourist concierge")]
struct Cli {
    /// Bundle directory holding catalog, lexicon, fv, membership, mstn and rules_cf JSON.
    #[arg(long, global = true, env = "CONCIERGE_DATA", default_value = "data")]
    data: PathBuf,
    /// Firing threshold for the rule net.
    #[arg(long, global = true)]
    lambda: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Interactive dialog on stdin.
    Repl {
        #[arg(long)]
        person: Option<String>,
        /// One JSON turn response per line instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a single utterance.
    Once {
        #[arg(long)]
        text: String,
        #[arg(long)]
        person: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run the HTTP session service.
    Serve {
        #[arg(long, env = "CONCIERGE_ADDR", default_value = "127.0.0.1:8080")]
        addr: String,
        /// Persist sessions in this directory.
        #[arg(long)]
        sessions: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .with_writer(io::stderr)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let concierge = open_concierge(&cli.data, cli.lambda)?;
    match cli.command {
        Command::Repl { person, json } => {
            let mut state = concierge.new_session(person);
            if io::stdin().is_terminal() {
                eprintln!("session {} (:help for commands)", state.session_id);
            }
            repl::run(&concierge, &mut state, io::stdin().lock(), io::stdout().lock(), json)?;
        }
        Command::Once { text, person, json } => {
            let mut state = concierge.new_session(person);
            let r = concierge.process_turn(&mut state, &text, None)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r)?);
            } else {
                print!("{}", repl::render_turn(&r));
            }
        }
        Command::Serve { addr, sessions } => {
            let store = sessions.map(SessionStore::open).transpose()?;
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async {
                let listener = tokio::net::TcpListener::bind(&addr)
                    .await
                    .with_context(|| format!("cannot listen on {addr}"))?;
                tracing::info!("listening on {}", listener.local_addr()?);
                api::serve(listener, api::ApiState::new(concierge, store)).await?;
                anyhow::Ok(())
            })?;
        }
    }
    Ok(())
}
