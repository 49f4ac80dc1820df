use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::compliance::{check_sync_compliance, is_s_deadlock, Verdict};
use crate::lang::{parse_tst, validate, Tst};
use crate::rational::{frac, int};
use crate::semantics::{async_allowed_delays, replay_moves, Mode, Move, SystemConfig, Trace};
use crate::time::{Clock, CmpOp, DelayInterval, Guard};

fn init(p: &str, q: &str) -> SystemConfig {
    SystemConfig::initial(parse_tst(p).unwrap(), parse_tst(q).unwrap())
}

fn script(s: &str) -> Scheduler {
    Scheduler::Scripted(parse_script(s).unwrap())
}

const P: &str = "!a{t<=2}.!b{t<=3}";
const Q: &str = "?a{t>=4}.?b{t>=5}";
const Q_STRICT: &str = "?a{t>4}.?b{t>=5}";

#[test]
fn scripted_runs_of_the_examples() {
    let run = simulate(&init(P, Q), &script("τ,τ,4,τ,1,τ"), Mode::Async, 100).unwrap();
    assert_eq!(run.status, Status::Success);
    assert_eq!(run.trace.moves.len(), 6);
    let after_sends = replay_moves(&run.trace.initial, Mode::Async, &run.trace.moves[..2]).unwrap();
    assert_eq!(async_allowed_delays(&after_sends), DelayInterval::UpTo { bound: int(4), inclusive: true });

    let committed = init("!a (+) !b{t>=2}", "?b{t>=5}");
    let run = simulate(&committed, &script("7,τ,τ"), Mode::Sync, 100).unwrap();
    assert_eq!(run.status, Status::Success);
    assert_eq!(run.trace.moves[0], Move::Delay(int(7)));
}

#[test]
fn scripted_step_that_is_not_enabled_is_reported() {
    let err = simulate(&init(P, Q), &script("τ,5"), Mode::Async, 100).unwrap_err();
    assert_eq!(err, SimulateError::NotEnabled { position: 1 });
    assert!(parse_script("τ,x").is_err());
}

#[test]
fn random_runs_of_the_strict_variant_always_deadlock() {
    for seed in 0..40 {
        for policy in [DelayPolicy::Midpoint, DelayPolicy::Boundary, DelayPolicy::Uniform] {
            let run = simulate(&init(P, Q_STRICT), &Scheduler::SeededRandom { seed, policy }, Mode::Async, 50).unwrap();
            assert_eq!(run.status, Status::Deadlock, "{} {:?}", seed, policy);
            assert_eq!(replay(&run.trace, Mode::Async).unwrap(), run.end);
        }
    }
}

#[test]
fn replay_rejects_delay_outside_the_interval() {
    let t = Trace { initial: init("!a{t<=2}", "?a"), moves: vec![Move::Delay(int(5))] };
    assert_eq!(replay(&t, Mode::Sync).unwrap_err().index, 0);
    let t = Trace { initial: init("!a{t<=2}", "?a"), moves: vec![Move::Delay(int(2))] };
    assert!(replay(&t, Mode::Sync).is_ok());
}

#[test]
fn counterexamples_replay_to_s_deadlocks() {
    let v = check_sync_compliance(&parse_tst(P).unwrap(), &parse_tst(Q).unwrap()).unwrap();
    let end = replay(v.trace().unwrap(), Mode::Sync).unwrap();
    assert!(is_s_deadlock(&end));
}

#[test]
fn depth_one_terms() {
    let cfg = GenConfig { max_depth: 1, alphabet: 1, max_branches: 1, ..GenConfig::default() };
    let mut kinds = [false; 3];
    for seed in 0..200 {
        let t = generate_tst(&cfg, seed);
        match &t {
            Tst::Success => kinds[0] = true,
            Tst::Internal(bs) | Tst::External(bs) => {
                assert_eq!(bs.len(), 1);
                assert_eq!(bs[0].action().name(), "a");
                assert_eq!(bs[0].cont, Tst::Success);
                kinds[if matches!(t, Tst::Internal(_)) { 1 } else { 2 }] = true;
            }
            _ => panic!("unexpected {}", t),
        }
    }
    assert_eq!(kinds, [true; 3]);
}

#[test]
fn generated_terms_are_valid_and_deterministic() {
    let cfg = GenConfig { max_depth: 4, clocks: 2, recursion: 0.5, strict_guards: true, ..GenConfig::default() };
    for seed in 0..300 {
        let t = generate_tst(&cfg, seed);
        assert!(validate(&t).is_ok(), "{}", t);
        assert_eq!(t, generate_tst(&cfg, seed));
        assert_eq!(generate_pair(&cfg, seed), generate_pair(&cfg, seed));
    }
}

#[test]
fn no_strict_atoms_unless_allowed() {
    let cfg = GenConfig { max_depth: 4, ..GenConfig::default() };
    for seed in 0..300 {
        let (p, q) = generate_pair(&cfg, seed);
        for t in [p, q] {
            for s in crate::lang::reachable_terms(&t) {
                for b in s.branches() {
                    assert!(!b.guard.has_strict(), "{}", t);
                }
            }
        }
    }
}

#[test]
fn dual_construction() {
    assert_eq!(dual(&Tst::Success), Tst::Success);
    let q = dual(&parse_tst("!a{t<=2}").unwrap());
    assert_eq!(q, parse_tst("?a{t<=2}").unwrap());
    assert_eq!(widen(&Guard::cmp(Clock::new("t"), CmpOp::Ge, 3)), Guard::True);
    assert_eq!(widen(&Guard::cmp(Clock::new("t"), CmpOp::Eq, 3)), Guard::cmp(Clock::new("t"), CmpOp::Le, 3));
    assert_eq!(dual(&parse_tst("?a{t>=1}.!b").unwrap()), parse_tst("!a{t>=1}.?b").unwrap());
}

#[test]
fn some_generated_pairs_are_compliant() {
    let cfg = GenConfig::default();
    let compliant = (0..100)
        .filter(|&s| {
            let (p, q) = generate_pair(&cfg, s);
            check_sync_compliance(&p, &q).unwrap() == Verdict::Compliant
        })
        .count();
    assert!(compliant >= 1);
    assert!(compliant < 100);
}

#[test]
fn gen_config_validation() {
    assert!(GenConfig::default().validate().is_ok());
    assert_eq!(GenConfig { alphabet: 0, ..GenConfig::default() }.validate(), Err(GenConfigError::TooSmall("alphabet")));
    assert!(GenConfig { reset: 1.5, ..GenConfig::default() }.validate().is_err());
}

#[test]
fn theorem_on_example_pairs_and_a_small_corpus() {
    let pairs = [
        ("?a{t<=3}.!b{t<=3}", "!a{t<=2}.?b{t<=3}"),
        ("?a{t<=3}.!b{t<=3}", "!a{t<=4}.?b{t<=4}"),
        (P, Q),
        (P, Q_STRICT),
        ("!a (+) !b{t>=2}", "?b{t>=5}"),
    ];
    let records: Vec<_> = pairs
        .iter()
        .enumerate()
        .map(|(i, (p, q))| check_pair(i, 0, parse_tst(p).unwrap(), parse_tst(q).unwrap(), 4, 2000).unwrap())
        .collect();
    let report = Report::from_records(records);
    assert_eq!(report.counts.violations, 0);
    assert_eq!(report.counts.sync_compliant, 1);

    let cfg = GenConfig::default();
    let a = theorem_harness(30, &cfg, 7, 4, 2000).unwrap();
    assert_eq!(a, theorem_harness(30, &cfg, 7, 4, 2000).unwrap());
    assert_eq!(a.counts.violations, 0);
    assert_eq!(a.counts.pairs, 30);
}

#[test]
fn oracle_examples() {
    let q = frac(1, 4);
    let r = discretized_oracle(&init(P, Q), q, int(6), Mode::Async, 100_000).unwrap();
    assert!(r.success_reachable);
    assert!(!r.deadlock_reachable);
    let r = discretized_oracle(&init(P, Q_STRICT), q, int(6), Mode::Async, 100_000).unwrap();
    assert!(r.deadlock_reachable);
    let done = init("1", "1");
    let r = discretized_oracle(&done, q, int(1), Mode::Sync, 10).unwrap();
    assert!(r.success_reachable && !r.deadlock_reachable);
    assert_eq!(discretized_oracle(&init(P, Q), q, int(3), Mode::Sync, 10), Err(OracleError::Horizon(5)));
}

#[test]
fn small_lemma_and_proposition_suites() {
    let cfg = GenConfig::default();
    let r = simulation_suite(200, &cfg, 1);
    assert!(r.failures.is_empty(), "{:?}", r.failures.first());
    assert!(r.checks > 200);
    let r = propositions_suite(40, &cfg, 1, 400).unwrap();
    assert!(r.failures.is_empty(), "{:?}", r.failures.first());
    assert_eq!(r.configs, 40);
}
