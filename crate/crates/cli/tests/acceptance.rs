//! Acceptance run. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any fails. Every check carries its own oracle rather than reusing the
//! engine's helpers.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use axum::body::{to_bytes, Body};
use axum::http::{Method, Request, StatusCode};
use concierge_cli::api::{router, ApiState, CreatedSession};
use concierge_cli::open_concierge;
use concierge_core::egc::{
    assign_axes, classify, valence, Agent, Approval, CaseFrame, DeepCase, EmotionAxes, EmotionGroup, EventType,
    OtherFortune, Prospect, Target, BETA,
};
use concierge_core::fpn::{compile_rules, place_id, Place, Proposition, Transition};
use concierge_core::rules::{agreement_value, route};
use concierge_core::{
    CaseRoute, Concierge, FuzzyPetriNet, FvDatabase, ItemKind, Marking, NounCategory, ReasoningConfig, Rule, RuleSpec,
    SessionStore, SituationFlags, TurnResponse, Valence,
};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tower::ServiceExt;

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn data() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn concierge() -> Result<Concierge, String> {
    open_concierge(&data(), None).map_err(|e| format!("{e:#}"))
}

// ---------------------------------------------------------------- appraisal

const OCTANTS: [([i8; 3], Valence); 8] = [
    ([1, 1, 1], Valence::Pleasure),
    ([-1, 1, 1], Valence::Displeasure),
    ([-1, -1, 1], Valence::Pleasure),
    ([1, -1, 1], Valence::Displeasure),
    ([1, 1, -1], Valence::Displeasure),
    ([-1, 1, -1], Valence::Pleasure),
    ([-1, -1, -1], Valence::Displeasure),
    ([1, -1, -1], Valence::Pleasure),
];

fn octant_label(axes: [f64; 3]) -> Valence {
    if axes.contains(&0.0) {
        return Valence::Neutral;
    }
    let signs = axes.map(|v| if v > 0.0 { 1 } else { -1 });
    OCTANTS.iter().find(|(s, _)| *s == signs).map_or(Valence::Neutral, |o| o.1)
}

fn octant_labels() -> Outcome {
    let grid = [0.1, 0.25, 0.5, 0.75, 1.0];
    let mut n = 0;
    for (signs, _) in OCTANTS {
        for a in grid {
            for b in grid {
                for c in grid {
                    let axes = [signs[0] as f64 * a, signs[1] as f64 * b, signs[2] as f64 * c];
                    let got = valence(&EmotionAxes::new(axes[0], axes[1], axes[2]));
                    ensure(got == octant_label(axes), || format!("{axes:?} gave {got:?}"))?;
                    n += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut zeros = 0;
    for _ in 0..1000 {
        let axes: [f64; 3] = std::array::from_fn(|_| if rng.random_bool(0.1) { 0.0 } else { rng.random_range(-1.0..=1.0) });
        zeros += usize::from(axes.contains(&0.0));
        let got = valence(&EmotionAxes::new(axes[0], axes[1], axes[2]));
        ensure(got == octant_label(axes), || format!("{axes:?} gave {got:?}"))?;
    }
    Ok(format!("{n} grid points, 1000 random samples ({zeros} on a zero axis)"))
}

const SLOT_FVS: [(DeepCase, &str, f64); 9] = [
    (DeepCase::Subject, "subj", 0.9),
    (DeepCase::Object, "obj", 0.7),
    (DeepCase::ObjectFrom, "from", 0.2),
    (DeepCase::ObjectTo, "to", 0.6),
    (DeepCase::ObjectMutual, "mutual", 0.3),
    (DeepCase::ObjectSource, "source", 0.25),
    (DeepCase::ObjectContent, "content", -0.35),
    (DeepCase::Instrument, "tool", -0.45),
    (DeepCase::Predicate, "pred", 0.8),
];

/// Rows whose second axis has no slot behind it.
fn has_blank_second_axis(t: EventType) -> bool {
    use EventType::*;
    matches!(t, VerbS | AttrSC | AttrSOfC | AttrSOtC | AttrSOmC | AttrSOsC | VerbSOs | VerbSOOc | AttrSOC)
}

fn blank_axes() -> Outcome {
    let mut db = FvDatabase::new();
    for (_, term, v) in SLOT_FVS {
        db.set_initial(term, v).map_err(|e| e.to_string())?;
    }
    let mut blanks = 0;
    for t in EventType::ALL {
        let mut frame = CaseFrame::new(t);
        for slot in t.required_slots() {
            let term = SLOT_FVS.iter().find(|(s, _, _)| *s == slot).map(|s| s.1).unwrap_or("pred");
            frame = frame.with(slot, term);
        }
        let axes = assign_axes(&frame, &db, None).map_err(|e| format!("{t}: {e}"))?.axes.as_array();
        for (k, v) in axes.iter().enumerate() {
            let blank = k == 1 && has_blank_second_axis(t);
            ensure(blank == (*v == BETA), || format!("{t} axis {} = {v}", k + 1))?;
            blanks += usize::from(blank);
        }
    }
    ensure(blanks == 9, || format!("{blanks} blank axes"))?;
    Ok(format!("{} event types, {blanks} blank axes filled with {BETA}", EventType::ALL.len()))
}

fn expected_group(flags: &SituationFlags) -> EmotionGroup {
    match flags.prospect {
        Prospect::Prospective => EmotionGroup::ProspectBased,
        Prospect::Confirmed | Prospect::Disconfirmed => EmotionGroup::Confirmation,
        Prospect::None if flags.target == Target::Other && flags.other_fortune != OtherFortune::None => {
            EmotionGroup::FortunesOfOthers
        }
        Prospect::None if flags.approval != Approval::None && flags.agent != Agent::None => {
            EmotionGroup::WellBeingAttribution
        }
        Prospect::None if flags.approval != Approval::None => EmotionGroup::Attribution,
        Prospect::None => EmotionGroup::WellBeing,
    }
}

fn classification_totality() -> Outcome {
    let listed: [(&str, [&str; 4]); 6] = [
        ("Well-Being", ["joy", "distress", "", ""]),
        ("Fortunes-of-Others", ["happy-for", "gloating", "resentment", "sorry-for"]),
        ("Prospect-based", ["hope", "fear", "", ""]),
        ("Confirmation", ["satisfaction", "relief", "fears-confirmed", "disappointment"]),
        ("Attribution", ["pride", "admiration", "shame", "disliking"]),
        ("Well-Being/Attribution", ["gratitude", "anger", "gratification", "remorse"]),
    ];
    for (name, members) in listed {
        let g = EmotionGroup::ALL.into_iter().find(|g| g.as_str() == name).ok_or(format!("no group {name}"))?;
        let got: BTreeSet<&str> = g.members().iter().map(|e| e.as_str()).collect();
        let want: BTreeSet<&str> = members.into_iter().filter(|m| !m.is_empty()).collect();
        ensure(got == want, || format!("{name}: {got:?} vs {want:?}"))?;
    }
    let mut reached = BTreeSet::new();
    let flag_space = SituationFlags::all();
    for flags in &flag_space {
        for v in [Valence::Pleasure, Valence::Displeasure] {
            let e = classify(v, flags).ok_or(format!("{v:?} {flags:?} unclassified"))?;
            ensure(e.group() == expected_group(flags), || format!("{v:?} {flags:?} -> {e:?}"))?;
            ensure(e.is_negative() == (v == Valence::Displeasure), || format!("{v:?} {flags:?} -> {e:?}"))?;
            reached.insert(e.as_str());
        }
        ensure(classify(Valence::Neutral, flags).is_none(), || format!("neutral {flags:?}"))?;
    }
    ensure(reached.len() == 20, || format!("{} types reached", reached.len()))?;
    Ok(format!("2 x {} flag combinations, 20 types reached, 6 groups verbatim", flag_space.len()))
}

// ---------------------------------------------------------------- nets

struct IndexNet {
    places: usize,
    transitions: Vec<(Vec<usize>, Vec<usize>, f64)>,
    initial: Vec<f64>,
}

fn random_index_net(rng: &mut ChaCha8Rng) -> IndexNet {
    let places = rng.random_range(1..=8);
    let transitions = (0..rng.random_range(0..=6))
        .map(|_| {
            let ins = (0..rng.random_range(1..=3)).map(|_| rng.random_range(0..places)).collect();
            let outs = (0..rng.random_range(1..=2)).map(|_| rng.random_range(0..places)).collect();
            (ins, outs, rng.random::<f64>())
        })
        .collect();
    let initial = (0..places).map(|_| if rng.random_bool(0.4) { 0.0 } else { rng.random() }).collect();
    IndexNet { places, transitions, initial }
}

/// Synchronous sweeps from a frozen copy until nothing changes.
fn brute_force(net: &IndexNet, initial: &[f64], lambda: f64) -> Vec<f64> {
    let mut y = initial.to_vec();
    loop {
        let prev = y.clone();
        for (ins, outs, mu) in &net.transitions {
            if ins.iter().all(|&p| prev[p] >= lambda) {
                let v = ins.iter().map(|&p| prev[p]).fold(1.0, f64::min) * mu;
                for &o in outs {
                    y[o] = y[o].max(v);
                }
            }
        }
        if y == prev {
            return y;
        }
    }
}

fn to_engine(net: &IndexNet) -> Result<FuzzyPetriNet, String> {
    let propositions = (0..net.places).map(|i| Proposition { id: format!("d{i}"), label: format!("d{i}") }).collect();
    let places = (0..net.places).map(|i| Place { id: format!("p{i}"), proposition: format!("d{i}") }).collect();
    let transitions = net
        .transitions
        .iter()
        .enumerate()
        .map(|(k, (ins, outs, mu))| Transition {
            id: format!("t{k}"),
            mu: *mu,
            inputs: ins.iter().map(|p| format!("p{p}")).collect(),
            outputs: outs.iter().map(|p| format!("p{p}")).collect(),
        })
        .collect();
    FuzzyPetriNet::new(propositions, places, transitions).map_err(|e| e.to_string())
}

fn marking(degrees: &[f64]) -> Result<Marking, String> {
    let mut m = Marking::new();
    for (i, &d) in degrees.iter().enumerate() {
        m.set(&format!("p{i}"), d).map_err(|e| e.to_string())?;
    }
    Ok(m)
}

fn read(m: &Marking, n: usize) -> Vec<f64> {
    (0..n).map(|i| m.get(&format!("p{i}"))).collect()
}

fn run(net: &FuzzyPetriNet, degrees: &[f64], lambda: f64, order: Option<&[usize]>) -> Result<Vec<f64>, String> {
    let cfg = ReasoningConfig::with_lambda(lambda);
    let m = marking(degrees)?;
    let (out, _) = match order {
        Some(o) => net.run_in_order(&m, &cfg, o),
        None => net.run(&m, &cfg),
    }
    .map_err(|e| e.to_string())?;
    Ok(read(&out, degrees.len()))
}

fn fixpoint_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for i in 0..250 {
        let raw = random_index_net(&mut rng);
        let net = to_engine(&raw)?;
        for lambda in [0.0, 0.1, 0.5] {
            let got = run(&net, &raw.initial, lambda, None)?;
            let want = brute_force(&raw, &raw.initial, lambda);
            for (g, w) in got.iter().zip(&want) {
                worst = worst.max((g - w).abs());
            }
            ensure(worst <= 1e-9, || format!("net {i} lambda {lambda}: {got:?} vs {want:?}"))?;
        }
    }
    Ok(format!("250 nets x 3 thresholds, max deviation {worst:e}"))
}

fn monotone_and_confluent() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut raises = 0;
    for i in 0..100 {
        let raw = random_index_net(&mut rng);
        let net = to_engine(&raw)?;
        let lambda = *[0.0, 0.1, 0.5].choose(&mut rng).unwrap_or(&0.1);
        let base = run(&net, &raw.initial, lambda, None)?;
        for p in 0..raw.places {
            let mut raised = raw.initial.clone();
            raised[p] = (raised[p] + rng.random_range(0.0..=1.0)).min(1.0);
            let out = run(&net, &raised, lambda, None)?;
            raises += 1;
            ensure(out.iter().zip(&base).all(|(a, b)| *a + 1e-12 >= *b), || {
                format!("net {i}: raising p{p} lowered {base:?} -> {out:?}")
            })?;
        }
        let mut order: Vec<usize> = (0..raw.transitions.len()).collect();
        for _ in 0..10 {
            order.shuffle(&mut rng);
            let out = run(&net, &raw.initial, lambda, Some(&order))?;
            ensure(out.iter().zip(&base).all(|(a, b)| (a - b).abs() <= 1e-12), || {
                format!("net {i} order {order:?}: {out:?} vs {base:?}")
            })?;
        }
    }
    Ok(format!("100 nets, {raises} raised inputs, 10 firing orders each"))
}

fn threshold_law() -> Outcome {
    let net = compile_rules(&[
        RuleSpec::conjunctive("a", &["weak", "strong"], "mid", 1.0),
        RuleSpec::conjunctive("b", &["mid"], "end", 1.0),
    ])
    .map_err(|e| e.to_string())?;
    for lambda in [0.1, 0.3, 0.5, 0.9] {
        let m = net
            .marking_from_propositions([("weak", lambda - 0.01), ("strong", 1.0)])
            .map_err(|e| e.to_string())?;
        let (out, trace) = net.run(&m, &ReasoningConfig::with_lambda(lambda)).map_err(|e| e.to_string())?;
        for p in ["mid", "end"] {
            ensure(out.get(&place_id(p)) == 0.0, || format!("lambda {lambda}: {p} = {}", out.get(&place_id(p))))?;
        }
        ensure(trace.is_empty(), || format!("lambda {lambda}: {:?}", trace.fired_transitions()))?;
        let m = net.marking_from_propositions([("weak", lambda), ("strong", 1.0)]).map_err(|e| e.to_string())?;
        let (out, _) = net.run(&m, &ReasoningConfig::with_lambda(lambda)).map_err(|e| e.to_string())?;
        ensure(out.get(&place_id("end")) == lambda, || format!("lambda {lambda}: at the threshold nothing fired"))?;
    }
    Ok("inputs 0.01 below the threshold leave both downstream places at 0 for 4 thresholds".into())
}

fn fan_out_exact() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for i in 0..200 {
        let y: f64 = rng.random_range(0.1..=1.0);
        let mu: f64 = rng.random();
        let outs: Vec<String> = (0..rng.random_range(1..=5)).map(|k| format!("c{k}")).collect();
        let names: Vec<&str> = outs.iter().map(String::as_str).collect();
        let net = compile_rules(&[RuleSpec::fan_out("split", "a", &names, mu)]).map_err(|e| e.to_string())?;
        let m = net.marking_from_propositions([("a", y)]).map_err(|e| e.to_string())?;
        let (out, _) = net.run(&m, &ReasoningConfig::with_lambda(0.1)).map_err(|e| e.to_string())?;
        for c in &names {
            let got = out.get(&place_id(c));
            ensure(got == y * mu, || format!("case {i}: {c} = {got}, expected {}", y * mu))?;
            checked += 1;
        }
    }
    Ok(format!("200 rules, {checked} consequents equal y*mu bit for bit"))
}

// ---------------------------------------------------------------- rules

fn routing_totality() -> Outcome {
    type Cond = fn(CaseRoute, Option<NounCategory>, bool) -> bool;
    let spot = |k: Option<NounCategory>| k == Some(NounCategory::Spot);
    let food_gift = |k: Option<NounCategory>| matches!(k, Some(NounCategory::Food | NounCategory::Gift));
    let nothing = |k: Option<NounCategory>| matches!(k, None | Some(NounCategory::Other));
    let conditions: [(Rule, Cond); 8] = [
        (Rule::R1, |c, k, neg| c == CaseRoute::Case1 && k == Some(NounCategory::Spot) && !neg),
        (Rule::R2, |c, k, neg| c == CaseRoute::Case1 && k == Some(NounCategory::Spot) && neg),
        (Rule::R3, |c, k, _| c == CaseRoute::Case1 && matches!(k, Some(NounCategory::Food | NounCategory::Gift))),
        (Rule::R4, |c, k, neg| c == CaseRoute::Case1 && matches!(k, None | Some(NounCategory::Other)) && !neg),
        (Rule::R5, |c, k, neg| c == CaseRoute::Case1 && matches!(k, None | Some(NounCategory::Other)) && neg),
        (Rule::R6, |c, _, _| c == CaseRoute::Case2),
        (Rule::R7, |c, _, neg| c == CaseRoute::Case3 && neg),
        (Rule::R8, |c, _, neg| c == CaseRoute::Case3 && !neg),
    ];
    let mut reached = BTreeSet::new();
    let mut combos = 0;
    for case in CaseRoute::ALL {
        for k in std::iter::once(None).chain(NounCategory::ALL.map(Some)) {
            ensure(spot(k) as u8 + food_gift(k) as u8 + nothing(k) as u8 == 1, || format!("{k:?}"))?;
            for v in [Valence::Pleasure, Valence::Displeasure, Valence::Neutral] {
                let neg = v == Valence::Displeasure;
                let matching: Vec<Rule> = conditions.iter().filter(|(_, c)| c(case, k, neg)).map(|r| r.0).collect();
                ensure(matching.len() == 1, || format!("{case:?} {k:?} {v:?}: {matching:?}"))?;
                let got = route(case, k, neg);
                ensure(got == matching[0], || format!("{case:?} {k:?} {v:?}: {got:?}"))?;
                reached.insert(got);
                combos += 1;
            }
        }
    }
    ensure(reached.len() == 8, || format!("{} rules reached", reached.len()))?;
    Ok(format!("{combos} combinations, each reaches exactly one of 8 rules"))
}

fn taboo_monotonic() -> Outcome {
    let c = concierge()?;
    let mut s = c.new_session(Some("hanako".into()));
    let script = [
        "i want to go to miyajima",
        "miyajima was awful",
        "i want to go to miyajima",
        "i want to buy a gift",
        "i am hungry",
        "i want to see something",
        "let's talk about the weather",
        "i want to buy miyajima shakushi",
        "go to hondori",
        "nice garden",
    ];
    let mut captured: Option<usize> = None;
    let mut checked = 0;
    for (i, line) in script.iter().enumerate() {
        let r = c.process_turn(&mut s, line, None).map_err(|e| format!("turn {i}: {e}"))?;
        if captured.is_none() && r.taboo.iter().any(|t| t == "miyajima") {
            ensure(r.fired_rules == ["R7"], || format!("captured by {:?}", r.fired_rules))?;
            captured = Some(i);
        }
        if captured.is_some() {
            for rec in &r.recommendations {
                let labels = [rec.id.as_str(), rec.name.as_str(), rec.fv_term.as_deref().unwrap_or("")];
                let mentions = labels.iter().any(|l| l.to_lowercase().contains("miyajima"))
                    || rec.nearby.iter().any(|n| n.contains("miyajima"));
                ensure(!mentions, || format!("turn {i} recommended {}", rec.id))?;
                checked += 1;
            }
        }
    }
    let at = captured.ok_or("dislike word never captured")?;
    Ok(format!("captured at turn {}, {checked} later recommendations clean", at + 1))
}

fn station_walk() -> Outcome {
    let c = concierge()?;
    let mut s = c.new_session(None);
    let turn = |s: &mut _, text: &str| c.process_turn(s, text, None).map_err(|e| format!("{text}: {e}"));
    let arrive = turn(&mut s, "I arrived at Hiroshima Station")?;
    ensure(arrive.fired_rules == ["R4"] && arrive.recommendations.len() == 3, || format!("arrive: {:?}", arrive.fired_rules))?;
    let eat = turn(&mut s, "I want to eat kaki")?;
    ensure(eat.recommendations.first().is_some_and(|r| r.kind == ItemKind::Food), || "food request: no food".into())?;
    let closed = turn(&mut s, "There was a temporary closure at the restaurant")?;
    ensure(closed.emotion.valence == Valence::Displeasure, || format!("{:?}", closed.emotion))?;
    ensure(closed.taboo.contains(&"closure".to_string()), || format!("taboo {:?}", closed.taboo))?;
    let top = closed.recommendations.first().ok_or("no recommendation after the closure")?;
    ensure(top.id == "okonomiyaki" && top.kind == ItemKind::Food, || format!("top {}", top.id))?;
    ensure(!top.nearby.is_empty(), || "okonomiyaki lists no nearby spot".into())?;
    Ok(format!(
        "{} detected, top food {} near {}",
        closed.emotion.emotion.map_or("neutral".into(), |e| e.to_string()),
        top.name,
        top.nearby.join(", ")
    ))
}

fn agreement_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let vec20 = |rng: &mut ChaCha8Rng| (0..20).map(|_| rng.random::<f64>()).collect::<Vec<f64>>();
    for i in 0..1000 {
        let (x, y, z) = (vec20(&mut rng), vec20(&mut rng), vec20(&mut rng));
        let av = |a: &[f64], b: &[f64]| agreement_value(a, b).map_err(|e| e.to_string());
        let xz = av(&x, &z)?;
        let expected = 1.0 - x.iter().zip(&z).map(|(a, b)| (a - b).abs()).sum::<f64>() / 20.0;
        ensure((xz - expected).abs() < 1e-12, || format!("pair {i}: {xz} vs {expected}"))?;
        ensure((0.0..=1.0).contains(&xz), || format!("pair {i}: {xz}"))?;
        ensure(av(&x, &x)? == 1.0, || format!("pair {i}: self agreement"))?;
        ensure(av(&z, &x)? == xz, || format!("pair {i}: asymmetric"))?;
        let dist = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum::<f64>() / 20.0;
        ensure((xz - av(&y, &z)?).abs() <= dist + 1e-12, || format!("pair {i}: Lipschitz bound"))?;
    }
    Ok("1000 random pairs: range, identity, symmetry, Lipschitz".into())
}

// ---------------------------------------------------------------- service

const UTTERANCES: [&str; 14] = [
    "I arrived at Hiroshima Station",
    "I want to go to Hiroshima Castle",
    "I want to eat kaki",
    "There was a temporary closure at the restaurant",
    "i am hungry",
    "let's visit shukkeien",
    "buy momiji manju",
    "the queue was terrible",
    "see the atomic bomb dome",
    "nice weather today",
    "look for a souvenir",
    "miyajima was awful",
    "go to miyajima",
    "talk about mazda stadium",
];

async fn post(app: &axum::Router, uri: &str, body: Value) -> Result<(StatusCode, Value), String> {
    let req = Request::builder()
        .method(Method::POST)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .map_err(|e| e.to_string())?;
    let res = app.clone().oneshot(req).await.map_err(|e| e.to_string())?;
    let status = res.status();
    let bytes = to_bytes(res.into_body(), usize::MAX).await.map_err(|e| e.to_string())?;
    Ok((status, serde_json::from_slice(&bytes).map_err(|e| e.to_string())?))
}

fn persistence_and_api() -> Outcome {
    let lib = concierge()?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let store = SessionStore::open(dir.path()).map_err(|e| e.to_string())?;
    let app = router(ApiState::new(concierge()?, None));
    let rt = tokio::runtime::Builder::new_current_thread().enable_all().build().map_err(|e| e.to_string())?;

    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut state = lib.new_session(Some("hanako".into()));
    rt.block_on(async {
        let (status, v) = post(&app, "/api/v1/sessions", json!({ "person_id": "hanako" })).await?;
        ensure(status == StatusCode::CREATED, || format!("create: {status}"))?;
        let id = serde_json::from_value::<CreatedSession>(v).map_err(|e| e.to_string())?.session_id;
        for i in 0..20 {
            let text = *UTTERANCES.choose(&mut rng).ok_or("no utterances")?;
            let mut direct = lib.process_turn(&mut state, text, None).map_err(|e| format!("turn {i}: {e}"))?;
            store.save(&state).map_err(|e| e.to_string())?;
            let loaded = store.load(&state.session_id).map_err(|e| e.to_string())?;
            ensure(loaded == state, || format!("turn {i}: reloaded state differs"))?;

            let (status, v) = post(&app, &format!("/api/v1/sessions/{id}/utterances"), json!({ "text": text })).await?;
            ensure(status == StatusCode::OK, || format!("turn {i}: {status} {v}"))?;
            let served: TurnResponse = serde_json::from_value(v).map_err(|e| e.to_string())?;
            direct.session_id.clone_from(&id);
            ensure(served == direct, || format!("turn {i} `{text}`: service and library disagree"))?;
        }
        Ok::<(), String>(())
    })?;
    let log = store.read_log(&state.session_id).map_err(|e| e.to_string())?;
    ensure(log == state.history, || "turn log differs from history".into())?;
    Ok("20 random turns: snapshot and log reload exactly, service output equals library output".into())
}

fn main() -> ExitCode {
    let criteria: [Check; 12] = [
        ("octant valence labels", octant_labels),
        ("fixpoint equals brute force", fixpoint_oracle),
        ("monotone and order independent", monotone_and_confluent),
        ("threshold blocks firing", threshold_law),
        ("fan-out deposits y*mu", fan_out_exact),
        ("blank axes take the dummy value", blank_axes),
        ("classification totality", classification_totality),
        ("rule routing totality", routing_totality),
        ("taboo words stay out", taboo_monotonic),
        ("closed restaurant walk", station_walk),
        ("agreement value properties", agreement_properties),
        ("persistence and service equivalence", persistence_and_api),
    ];
    let started = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({ms} ms)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.2} s",
        criteria.len() - failed,
        criteria.len(),
        started.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
