//! Acceptance suite. Each test prints one `PASS` or `FAIL` line naming its
//! criterion before asserting it. Tolerances are the constants below.

use diamond::cases::{capacity_pair, classify, partition9, CaseType, Major, Sub};
use diamond::detmodel::{DiamondParams, Direction, LevelVector, Node, Relay};
use diamond::gaussian::{baseline_compare, diamond_achievable, diamond_admissible, log_grid, twr_achievable, GainSet};
use diamond::strategies::{
    relay_strategy_matrix, select_strategies, transmit_plan, Adjustment, Positional, RelayStrategy, StrategyAssignment,
    StrategyId,
};
use diamond::verifier::{build_end_to_end, decode, sweep, VerifyOptions};
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GAP_TOL: f64 = 1e-9;
const ALPHA_TOL: f64 = 1e-9;
const SWEEP_MAX: usize = 5;
const FIXTURE_TRIALS: usize = 256;
const REPETITION_MAX: usize = 16;

/// Written straight to the stderr handle so the line shows without `--nocapture`.
fn report(name: &str, ok: bool, detail: &str) {
    let line = format!("{} {name}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn random_bits(rng: &mut ChaCha8Rng, n: usize) -> LevelVector {
    LevelVector::from_bits((0..n).map(|_| rng.random()).collect())
}

fn reversal_pair(p: &DiamondParams) -> StrategyAssignment {
    let s0 = |k: Relay| RelayStrategy {
        id: StrategyId::S(0),
        matrix: Positional::reversal().to_matrix(p.relay_out_levels(k)),
        adjustment: Adjustment::None,
    };
    StrategyAssignment {
        relays: [s0(Relay::R1), s0(Relay::R2)],
        plans: [transmit_plan(p, Direction::Forward), transmit_plan(p, Direction::Backward)],
    }
}

#[test]
fn full_sweep_reaches_both_capacities() {
    let r = sweep(SWEEP_MAX, None, &VerifyOptions::default());
    let stages: Vec<String> = r.stages.iter().map(|(s, n)| format!("{s}={n}")).collect();
    let mut detail = format!("{}/{} tuples of {{0..{SWEEP_MAX}}}^8 pass ({})", r.passed, r.total, stages.join(" "));
    for f in &r.failures {
        detail.push_str(&format!("\n    failing {}", f.record()));
    }
    report("exhaustive sweep", r.all_pass(), &detail);
    assert_eq!(r.total, 6usize.pow(8));
    assert!(r.all_pass(), "{} tuples fail", r.failures.len());
}

#[test]
fn fixtures_round_trip_bit_exact() {
    let fixtures = [
        [6, 2, 3, 7, 6, 3, 4, 8],
        [6, 4, 5, 7, 6, 5, 1, 7],
        [6, 4, 5, 7, 6, 3, 6, 4],
        [6, 4, 6, 5, 5, 7, 6, 7],
        [6, 4, 5, 7, 6, 8, 7, 5],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut bad = Vec::new();
    for g in fixtures {
        let p = DiamondParams::of(g);
        let c = capacity_pair(&p);
        let a = select_strategies(&p);
        let maps = build_end_to_end(&p, &a).expect("shapes fit");
        for _ in 0..FIXTURE_TRIALS {
            let ma = random_bits(&mut rng, c.ab);
            let mb = random_bits(&mut rng, c.ba);
            let at_b = maps.received(Node::B, &ma, &mb);
            let at_a = maps.received(Node::A, &ma, &mb);
            let fwd = decode(&maps, &at_b, &mb, Direction::Forward);
            let bwd = decode(&maps, &at_a, &ma, Direction::Backward);
            if fwd.as_ref() != Ok(&ma) || bwd.as_ref() != Ok(&mb) {
                bad.push(p);
                break;
            }
        }
    }
    let detail = format!("{} fixtures, {FIXTURE_TRIALS} random message pairs each, failing {:?}", fixtures.len(), bad);
    report("fixture round trip", bad.is_empty(), &detail);
    assert!(bad.is_empty());
}

#[test]
fn reversal_fails_where_selection_succeeds() {
    // Forward gains fixed, every backward gain combination up to 5.
    let mut checked = 0;
    let mut bad = Vec::new();
    for code in 0..6usize.pow(4) {
        let back: Vec<usize> = (0..4).map(|i| code / 6usize.pow(i) % 6).collect();
        let p = DiamondParams::of([4, 3, 3, 5, back[0], back[1], back[2], back[3]]);
        let c = capacity_pair(&p).ab;
        let s0 = build_end_to_end(&p, &reversal_pair(&p)).unwrap().ab.rank();
        let sel = build_end_to_end(&p, &select_strategies(&p)).unwrap().ab.rank();
        checked += 1;
        if !(c == 4 && s0 < c && sel == c) {
            bad.push((p, s0, sel));
        }
    }
    let detail = format!("{checked} backward choices, reversal rank < 4 and selected rank = 4 except {bad:?}");
    report("reversal negative control", bad.is_empty(), &detail);
    assert!(bad.is_empty());
}

#[test]
fn repetition_free_labels_match_reversal() {
    // No forward direction with gains up to 5 carries these labels, so the
    // one-way gains range further. Repetitions depend on forward gains only.
    let mut checked = 0;
    let mut bad = Vec::new();
    let span = REPETITION_MAX + 1;
    for code in 0..span.pow(4) {
        let g: Vec<usize> = (0..4).map(|i| code / span.pow(i) % span).collect();
        let p = DiamondParams::of([g[0], g[1], g[2], g[3], 0, 0, 0, 0]);
        let Ok(label) = classify(&p, Direction::Forward) else { continue };
        if (label.major, label.sub, label.typ) != (Major::Case3, Sub::S12, CaseType::Type1) {
            continue;
        }
        if !partition9(&p.forward()).unwrap().repetition_free() {
            continue;
        }
        checked += 1;
        for k in Relay::BOTH {
            if relay_strategy_matrix(&p, 2, k).unwrap() != relay_strategy_matrix(&p, 0, k).unwrap() {
                bad.push((p, k));
            }
        }
    }
    let detail = format!("{checked} forward tuples with gains up to {REPETITION_MAX} labeled (u1,v3) or (u1,v4,r2,s2), differing {bad:?}");
    report("strategy 2 equals reversal", checked > 0 && bad.is_empty(), &detail);
    assert!(checked > 0);
    assert!(bad.is_empty());
}

#[test]
fn relay_gaps_on_log_grid() {
    let grid = log_grid(1.0, 1000.0, 10);
    let (mut n, mut worst_weak, mut worst_strong) = (0usize, f64::MIN, f64::MIN);
    let mut bad = Vec::new();
    for &ha1 in &grid {
        for &h1b in &grid {
            for &hb1 in &grid {
                for &h1a in &grid {
                    let h = GainSet::relay(ha1, h1b, hb1, h1a).unwrap();
                    let r = twr_achievable(&h);
                    n += 1;
                    worst_weak = worst_weak.max(r.weaker_gap());
                    worst_strong = worst_strong.max(r.stronger_gap());
                    let ok = r.weaker_gap() <= 1.0 + GAP_TOL && r.stronger_gap() <= 2.0 + GAP_TOL && r.alpha2_feasible(ALPHA_TOL);
                    if !ok {
                        bad.push([ha1, h1b, hb1, h1a]);
                    }
                }
            }
        }
    }
    let detail = format!(
        "{n} gain sets, worst weaker-direction gap {worst_weak:.6}, worst stronger-direction gap {worst_strong:.6}, {} violations",
        bad.len()
    );
    report("relay channel gaps", n >= 10_000 && bad.is_empty(), &detail);
    assert!(n >= 10_000);
    assert!(bad.is_empty(), "first violations {:?}", &bad[..bad.len().min(5)]);
}

#[test]
fn diamond_gap_and_chains_on_admissible_grid() {
    let grid = log_grid(1.0, 1000.0, 24);
    let (mut n, mut worst) = (0usize, f64::MIN);
    let mut bad = Vec::new();
    for &a in &grid {
        for &b in &grid {
            for &c in &grid {
                for &d in &grid {
                    if diamond_admissible(a, b, c, d).is_err() {
                        continue;
                    }
                    let r = diamond_achievable(a, b, c, d).unwrap();
                    n += 1;
                    worst = worst.max(r.gap());
                    if r.gap() > 4.0 + GAP_TOL || !r.chains().iter().all(|ch| ch.holds(GAP_TOL)) {
                        bad.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    let detail = format!("{n} admissible points, worst gap {worst:.6}, {} violations", bad.len());
    report("diamond gap and chains", n >= 10_000 && bad.is_empty(), &detail);
    assert!(n >= 10_000);
    assert!(bad.is_empty(), "first violations {:?}", &bad[..bad.len().min(5)]);
}

#[test]
fn strongest_path_beats_baseline_growth() {
    let rows = baseline_compare(5000.0, 50.0, &log_grid(0.01, 100.0, 41)).unwrap();
    let within = rows.iter().all(|r| r.ours >= r.cutset - 5.0);
    let increasing = rows.windows(2).all(|w| w[1].gap_baseline() > w[0].gap_baseline());
    let last = rows.last().unwrap();
    let detail = format!(
        "{} scales, worst gap {:.6}, baseline gap {:.6} -> {:.6}",
        rows.len(),
        rows.iter().map(|r| r.gap_ours()).fold(f64::MIN, f64::max),
        rows[0].gap_baseline(),
        last.gap_baseline()
    );
    report("baseline comparison", within && increasing, &detail);
    assert!(within);
    assert!(increasing);
}
