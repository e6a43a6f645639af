//! Line-oriented dialog loop. Lines starting with `:` are meta-commands,
//! everything else is an utterance.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use concierge_core::{Concierge, SessionState, TurnResponse, Valence};

const HELP: &str = ":state  print the session as JSON\n:help   this text\n:quit   leave";

/// Plain-text rendering of one turn.
pub fn render_turn(r: &TurnResponse) -> String {
    let mut s = String::new();
    let emotion = r.emotion.emotion.map_or("neutral".to_string(), |e| e.to_string());
    let valence = match r.emotion.valence {
        Valence::Pleasure => "pleasure",
        Valence::Displeasure => "displeasure",
        Valence::Neutral => "neutral",
    };
    let _ = writeln!(s, "[{}] {} {emotion} ({valence}, {:.3})", r.turn, r.parsed.case_route.as_str(), r.emotion.intensity);
    let _ = writeln!(s, "mood: {}", r.mood);
    let _ = writeln!(s, "rules: {}", if r.fired_rules.is_empty() { "-".into() } else { r.fired_rules.join(" ") });
    for (i, rec) in r.recommendations.iter().enumerate() {
        let _ = write!(s, "  {}. {} [{:?} {}] {:.3}", i + 1, rec.name, rec.kind, rec.id, rec.strength);
        if !rec.nearby.is_empty() {
            let _ = write!(s, " near {}", rec.nearby.join(", "));
        }
        s.push('\n');
    }
    if !r.taboo.is_empty() {
        let _ = writeln!(s, "taboo: {}", r.taboo.join(", "));
    }
    let _ = writeln!(s, "> {}", r.reply);
    s
}

/// Runs the loop until `:quit` or end of input. Turn errors are reported and
/// the loop carries on with the state unchanged.
pub fn run<R: BufRead, W: Write>(
    concierge: &Concierge,
    state: &mut SessionState,
    input: R,
    mut out: W,
    json: bool,
) -> io::Result<()> {
    for line in input.lines() {
        let line = line?;
        let text = line.trim();
        match text {
            "" => continue,
            ":quit" | ":q" => break,
            ":state" => writeln!(out, "{}", serde_json::to_string_pretty(state).map_err(io::Error::other)?)?,
            ":help" => writeln!(out, "{HELP}")?,
            meta if meta.starts_with(':') => writeln!(out, "unknown command `{meta}`\n{HELP}")?,
            utterance => match concierge.process_turn(state, utterance, None) {
                Ok(r) if json => writeln!(out, "{}", serde_json::to_string(&r).map_err(io::Error::other)?)?,
                Ok(r) => write!(out, "{}", render_turn(&r))?,
                Err(e) => writeln!(out, "error: {e}")?,
            },
        }
        out.flush()?;
    }
    Ok(())
}
