use concierge_core::fpn::{FuzzyPetriNet, Marking, Place, Proposition, ReasoningConfig, Transition};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A net in plain index form, independent of the engine's representation.
#[derive(Debug, Clone)]
struct RawNet {
    places: usize,
    transitions: Vec<(Vec<usize>, Vec<usize>, f64)>,
    initial: Vec<f64>,
}

fn random_net(seed: u64) -> RawNet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let places = rng.random_range(1..=8);
    let count = rng.random_range(0..=6);
    let transitions = (0..count)
        .map(|_| {
            let ins = (0..rng.random_range(1..=3)).map(|_| rng.random_range(0..places)).collect();
            let outs = (0..rng.random_range(1..=2)).map(|_| rng.random_range(0..places)).collect();
            (ins, outs, rng.random::<f64>())
        })
        .collect();
    let initial = (0..places)
        .map(|_| if rng.random_bool(0.4) { 0.0 } else { rng.random::<f64>() })
        .collect();
    RawNet { places, transitions, initial }
}

/// Repeats full sweeps from a frozen copy of the previous sweep until nothing moves.
fn oracle_fixpoint(raw: &RawNet, lambda: f64) -> Vec<f64> {
    let mut y = raw.initial.clone();
    loop {
        let prev = y.clone();
        for (ins, outs, mu) in &raw.transitions {
            if ins.iter().all(|&p| prev[p] >= lambda) {
                let v = ins.iter().map(|&p| prev[p]).fold(f64::INFINITY, f64::min) * mu;
                for &o in outs {
                    if v > y[o] {
                        y[o] = v;
                    }
                }
            }
        }
        if y == prev {
            return y;
        }
    }
}

fn build(raw: &RawNet) -> (FuzzyPetriNet, Marking) {
    let propositions = (0..raw.places)
        .map(|i| Proposition { id: format!("d{i}"), label: format!("d{i}") })
        .collect();
    let places = (0..raw.places)
        .map(|i| Place { id: format!("p{i}"), proposition: format!("d{i}") })
        .collect();
    let transitions = raw
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
    let net = FuzzyPetriNet::new(propositions, places, transitions).unwrap();
    let mut m = Marking::new();
    for (i, &d) in raw.initial.iter().enumerate() {
        m.set(&format!("p{i}"), d).unwrap();
    }
    (net, m)
}

fn degrees(m: &Marking, n: usize) -> Vec<f64> {
    (0..n).map(|i| m.get(&format!("p{i}"))).collect()
}

fn solve(raw: &RawNet, lambda: f64) -> Vec<f64> {
    let (net, m) = build(raw);
    let (out, _) = net.run(&m, &ReasoningConfig::with_lambda(lambda)).unwrap();
    degrees(&out, raw.places)
}

#[test]
fn engine_matches_bruteforce_oracle() {
    for seed in 0..300 {
        let raw = random_net(seed);
        for lambda in [0.0, 0.1, 0.5] {
            let got = solve(&raw, lambda);
            let want = oracle_fixpoint(&raw, lambda);
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() <= 1e-9, "seed {seed} lambda {lambda}: {got:?} vs {want:?}");
            }
        }
    }
}

proptest! {
    #[test]
    fn degrees_stay_in_unit_interval(seed in any::<u64>(), lambda in 0.0..=1.0f64) {
        let raw = random_net(seed);
        let (net, m) = build(&raw);
        let (out, trace) = net.run(&m, &ReasoningConfig::with_lambda(lambda)).unwrap();
        for d in degrees(&out, raw.places) {
            prop_assert!((0.0..=1.0).contains(&d));
        }
        for r in &trace.records {
            prop_assert!((0.0..=1.0).contains(&r.produced));
        }
    }

    #[test]
    fn raising_an_input_never_lowers_an_output(seed in any::<u64>(), which in 0usize..8, bump in 0.0..=1.0f64) {
        let raw = random_net(seed);
        let base = solve(&raw, 0.1);
        let mut raised = raw.clone();
        let i = which % raw.places;
        raised.initial[i] = (raised.initial[i] + bump).min(1.0);
        let after = solve(&raised, 0.1);
        for (a, b) in base.iter().zip(&after) {
            prop_assert!(b + 1e-15 >= *a);
        }
    }

    #[test]
    fn raising_a_certainty_factor_never_lowers_an_output(seed in any::<u64>(), which in 0usize..6, bump in 0.0..=1.0f64) {
        let raw = random_net(seed);
        prop_assume!(!raw.transitions.is_empty());
        let base = solve(&raw, 0.1);
        let mut raised = raw.clone();
        let k = which % raw.transitions.len();
        raised.transitions[k].2 = (raised.transitions[k].2 + bump).min(1.0);
        let after = solve(&raised, 0.1);
        for (a, b) in base.iter().zip(&after) {
            prop_assert!(b + 1e-15 >= *a);
        }
    }

    #[test]
    fn evaluation_order_does_not_matter(seed in any::<u64>()) {
        let raw = random_net(seed);
        let (net, m) = build(&raw);
        let cfg = ReasoningConfig::default();
        let (reference, _) = net.run(&m, &cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..10 {
            let mut order: Vec<usize> = (0..raw.transitions.len()).collect();
            order.shuffle(&mut rng);
            let (other, _) = net.run_in_order(&m, &cfg, &order).unwrap();
            for (a, b) in degrees(&reference, raw.places).iter().zip(degrees(&other, raw.places)) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn rerunning_the_fixpoint_is_a_no_op(seed in any::<u64>(), lambda in 0.0..=1.0f64) {
        let raw = random_net(seed);
        let (net, m) = build(&raw);
        let cfg = ReasoningConfig::with_lambda(lambda);
        let (once, _) = net.run(&m, &cfg).unwrap();
        let (twice, trace) = net.run(&once, &cfg).unwrap();
        prop_assert_eq!(degrees(&once, raw.places), degrees(&twice, raw.places));
        prop_assert!(trace.is_empty());
    }

    #[test]
    fn disabled_transitions_leave_no_trace(seed in any::<u64>(), lambda in 0.05..=1.0f64) {
        let raw = random_net(seed);
        let (net, m) = build(&raw);
        let (out, trace) = net.run(&m, &ReasoningConfig::with_lambda(lambda)).unwrap();
        for t in net.transitions() {
            if t.inputs.iter().any(|p| out.get(p) < lambda) {
                prop_assert!(trace.records.iter().all(|r| r.transition != t.id));
            }
        }
    }
}
