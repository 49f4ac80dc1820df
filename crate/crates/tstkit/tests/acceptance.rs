//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons
//! throughout. Runs as a plain binary so the lines reach the terminal.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use tstkit::parallel::{run_corpus, thread_count};
use tstkit_core::compliance::{
    check_async_deadlock_bounded, check_async_deadlock_with, check_sync_compliance, check_sync_compliance_from,
    is_a_deadlock, is_s_deadlock, sync_reachability, Verdict,
};
use tstkit_core::harness::{
    discretized_oracle, parse_script, propositions_suite, replay, simulate, simulation_suite, GenConfig, PairRecord,
    Scheduler, Status,
};
use tstkit_core::lang::{clocks, max_constant, parse_tst, Action, Queue, Tst};
use tstkit_core::rational::{frac, int};
use tstkit_core::semantics::{
    async_allowed_delays, replay_moves, sync_allowed_delays, sync_system_steps, EndpointConfig, Mode, Move, Side,
    SystemConfig,
};
use tstkit_core::time::{guard_sat, guard_zones, Bound, Clock, ClockValuation, Dbm, DelayInterval, Owner, ZoneSet};

const SEED: u64 = 2024;
const QUEUE_BOUND: usize = 4;
const DEPTH: usize = 2000;

type Outcome = Result<String, String>;

fn tst(s: &str) -> Tst {
    parse_tst(s).unwrap()
}

fn ep(term: &str, queue: &[&str], t: i64) -> EndpointConfig {
    let q: Queue = queue.iter().map(|a| Action::new(*a)).collect();
    EndpointConfig::new(tst(term), q, ClockValuation::from_pairs([(Clock::new("t"), int(t))]))
}

fn init(p: &str, q: &str) -> SystemConfig {
    SystemConfig::initial(tst(p), tst(q))
}

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, format!("took {:.2?}, limit {:?}", took, limit))
}

/// The plain generator settings (the `theorem-corpus` default).
fn plain() -> GenConfig {
    GenConfig::default()
}

/// Two clocks, deeper terms, more recursion.
fn rich() -> GenConfig {
    GenConfig { max_depth: 4, clocks: 2, max_constant: 3, recursion: 0.3, ..GenConfig::default() }
}

fn committed_choice() -> Outcome {
    let start = Instant::now();
    let q = "?b{t>=5}";
    let s = init("!a (+) !b{t>=2}", q);

    let script = parse_script("7,τ,τ,τ").unwrap();
    let run = simulate(&s, &Scheduler::Scripted(script), Mode::Sync, 100).map_err(|e| e.to_string())?;
    ensure(run.status == Status::Success, format!("success run: ended {}", run.status.name()))?;
    let b = Action::new("b");
    let expected = [
        Move::Delay(int(7)),
        Move::Commit { actor: Side::Left, action: b.clone() },
        Move::Sync { sender: Side::Left, action: b.clone() },
    ];
    ensure(run.trace.moves == expected, "success run: unexpected moves")?;
    let mid = replay_moves(&s, Mode::Sync, &run.trace.moves[..2]).unwrap();
    ensure(mid == SystemConfig::new(ep("1", &["b"], 7), ep(q, &[], 7)), "success run: intermediate configuration")?;
    ensure(run.end == SystemConfig::new(ep("1", &[], 7), ep("1", &[], 7)), "success run: final configuration")?;

    for delta in [None, Some(int(1)), Some(frac(7, 2)), Some(int(9))] {
        let mut moves: Vec<Move> = delta.into_iter().map(Move::Delay).collect();
        moves.push(Move::Commit { actor: Side::Left, action: Action::new("a") });
        let c = replay_moves(&s, Mode::Sync, &moves).map_err(|e| format!("commit to a: {:?}", e))?;
        ensure(sync_allowed_delays(&c) == DelayInterval::Empty, "commit to a: time can pass after committing to a")?;
        ensure(sync_system_steps(&c).is_empty(), "commit to a: a step exists after committing to a")?;
        ensure(is_s_deadlock(&c), "commit to a: not an s-deadlock")?;
    }

    let c = replay_moves(&s, Mode::Sync, &[Move::Delay(int(3)), Move::Commit { actor: Side::Left, action: b }])
        .map_err(|e| format!("commit to b at 3: {:?}", e))?;
    ensure(c == SystemConfig::new(ep("1", &["b"], 3), ep(q, &[], 3)), "commit to b at 3: configuration")?;
    ensure(sync_system_steps(&c).is_empty(), "commit to b at 3: a synchronisation is possible")?;
    ensure(sync_allowed_delays(&c) == DelayInterval::Empty, "commit to b at 3: time can pass")?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("success run and both stuck commits reproduced in {:.2?}", start.elapsed()))
}

fn input_urgency() -> Outcome {
    let start = Instant::now();
    let (p, q, qs) = ("!a{t<=2}.!b{t<=3}", "?a{t>=4}.?b{t>=5}", "?a{t>4}.?b{t>=5}");
    let s = init(p, q);
    let run = simulate(&s, &Scheduler::Scripted(parse_script("τ,τ,4,τ,1,τ").unwrap()), Mode::Async, 100)
        .map_err(|e| e.to_string())?;
    ensure(run.status == Status::Success && run.trace.moves.len() == 6, "scripted run did not succeed")?;
    let sent = replay_moves(&s, Mode::Async, &run.trace.moves[..2]).unwrap();
    ensure(sent == SystemConfig::new(ep("1", &["a", "b"], 0), ep(q, &[], 0)), "configuration after the sends")?;
    let delays = async_allowed_delays(&sent);
    ensure(delays == DelayInterval::UpTo { bound: int(4), inclusive: true }, format!("delays {:?}", delays))?;

    let strict = init(p, qs);
    let stuck = replay_moves(&strict, Mode::Async, &[
        Move::Commit { actor: Side::Left, action: Action::new("a") },
        Move::Commit { actor: Side::Left, action: Action::new("b") },
        Move::Delay(int(4)),
    ])
    .map_err(|e| format!("{:?}", e))?;
    ensure(stuck == SystemConfig::new(ep("1", &["a", "b"], 4), ep(qs, &[], 4)), "stuck configuration")?;
    ensure(is_a_deadlock(&stuck), "t>4 variant at time 4 is not an a-deadlock")?;

    let v = check_async_deadlock_bounded(&tst(p), &tst(qs), QUEUE_BOUND, DEPTH).unwrap();
    let trace = v.trace().ok_or("search found no deadlock in the t>4 variant")?;
    let end = replay(trace, Mode::Async).map_err(|e| format!("{:?}", e))?;
    ensure(is_a_deadlock(&end), "search witness is not an a-deadlock")?;
    ensure(end.right.valuation.get(&Clock::new("t")) == Some(int(4)), format!("witness ends at {}", end))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("success run, delays (0, 4], stuck at time 4, in {:.2?}", start.elapsed()))
}

fn compliance_verdicts() -> Outcome {
    let start = Instant::now();
    let p = tst("?a{t<=3}.!b{t<=3}");
    ensure(check_sync_compliance(&p, &tst("!a{t<=2}.?b{t<=3}")).unwrap() == Verdict::Compliant, "example pair")?;
    let v = check_sync_compliance(&p, &tst("!a{t<=4}.?b{t<=4}")).unwrap();
    let t = v.trace().ok_or("t<=4 variant judged compliant")?;
    ensure(is_s_deadlock(&replay(t, Mode::Sync).map_err(|e| format!("{:?}", e))?), "t<=4 witness")?;

    let q = "?a{t>=4}.?b{t>=5}";
    let v = check_sync_compliance(&tst("!a{t<=2}.!b{t<=3}"), &tst(q)).unwrap();
    let t = v.trace().ok_or("early-send pair judged compliant")?;
    let end = replay(t, Mode::Sync).map_err(|e| format!("{:?}", e))?;
    ensure(is_s_deadlock(&end), "early-send witness is not an s-deadlock")?;
    ensure(end == SystemConfig::new(ep("!b{t<=3}", &["a"], 0), ep(q, &[], 0)), format!("witness ends in {}", end))?;
    within(start, Duration::from_secs(5))?;
    Ok(format!("compliant, not compliant, not compliant; witnesses replay; {:.2?}", start.elapsed()))
}

fn lemma() -> Outcome {
    let r = simulation_suite(10_000, &rich(), SEED);
    ensure(r.configs == 10_000, "wrong number of configurations")?;
    ensure(r.failures.is_empty(), format!("{} failures, first {:?}", r.failures.len(), r.failures.first()))?;
    Ok(format!("{} configurations, {} step checks, 0 failures", r.configs, r.checks))
}

fn propositions() -> Outcome {
    let r = propositions_suite(1000, &rich(), SEED, 100_000).map_err(|e| e.to_string())?;
    ensure(r.configs == 1000, format!("only {} configurations", r.configs))?;
    ensure(r.failures.is_empty(), format!("{} failures, first {:?}", r.failures.len(), r.failures.first()))?;
    Ok(format!("{} r-compliant configurations, {} checks, 0 failures", r.configs, r.checks))
}

fn corpus(cfg: &GenConfig) -> Vec<PairRecord> {
    run_corpus(500, cfg, SEED, QUEUE_BOUND, DEPTH, thread_count()).unwrap().records
}

fn theorem(corpora: &[(&str, &[PairRecord])], took: Duration) -> Outcome {
    let mut detail = Vec::new();
    for (name, records) in corpora {
        let violations = records.iter().filter(|r| r.is_violation()).count();
        let compliant = records.iter().filter(|r| r.sync == Verdict::Compliant).count();
        ensure(violations == 0, format!("{} corpus: {} violations", name, violations))?;
        detail.push(format!("{}: {} pairs, {} compliant", name, records.len(), compliant));
    }
    ensure(took < Duration::from_secs(300), format!("took {:.2?}", took))?;
    Ok(format!("{}; 0 violations; {:.2?}", detail.join(", "), took))
}

fn prop<S: Strategy>(
    name: &str,
    cases: u32,
    s: S,
    f: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new_with_rng(
        Config { cases, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    runner.run(&s, f).map_err(|e| format!("{}: {}", name, e))
}

fn zones(g: &tstkit_core::time::Guard) -> ZoneSet {
    guard_zones(g, &common::universe(), Owner::Left).unwrap()
}

fn sync_verdict_kept(p: &Tst, q: &Tst, with: &Verdict) -> Result<(), String> {
    let nu = ClockValuation::zero(&clocks(p));
    let eta = ClockValuation::zero(&clocks(q));
    let without = check_sync_compliance_from(p, &nu, q, &eta, false, Some(50_000)).map_err(|e| e.to_string())?;
    match without {
        Some(v) => ensure(v.name() == with.name(), format!("sync verdict changes for {} | {}", p, q)),
        None => ensure(*with == Verdict::Compliant, format!("unextrapolated search of {} | {} ran out", p, q)),
    }
}

fn zone_engine(corpora: &[&[PairRecord]]) -> Outcome {
    let grid = common::grid(4);
    prop("guard_sat vs guard_zones", 300, common::guard(), |g| {
        let z = zones(&g);
        for nu in &grid {
            let pt = common::universe().point_of(Owner::Left, nu).unwrap();
            prop_assert_eq!(z.contains(&pt), guard_sat(&g, nu).unwrap());
        }
        Ok(())
    })?;
    prop("future/past idempotence", 300, common::guard(), |g| {
        let z = zones(&g);
        prop_assert!(z.future(false).future(false).same_set(&z.future(false)));
        prop_assert!(z.future(true).future(true).same_set(&z.future(true)));
        prop_assert!(z.past().past().same_set(&z.past()));
        Ok(())
    })?;
    prop("boolean laws", 300, (common::guard(), common::guard()), |(a, b)| {
        let (za, zb) = (zones(&a), zones(&b));
        prop_assert!(za.complement().complement().same_set(&za));
        prop_assert!(za.meet(&zb).complement().same_set(&za.complement().join(&zb.complement())));
        prop_assert!(za.subtract(&zb).same_set(&za.meet(&zb.complement())));
        for nu in &grid {
            let pt = common::universe().point_of(Owner::Left, nu).unwrap();
            prop_assert_eq!(za.meet(&zb).contains(&pt), za.contains(&pt) && zb.contains(&pt));
            prop_assert_eq!(za.join(&zb).contains(&pt), za.contains(&pt) || zb.contains(&pt));
            prop_assert_eq!(za.complement().contains(&pt), !za.contains(&pt));
        }
        Ok(())
    })?;
    let constraint = (0usize..3, 0usize..3, -3i64..=4, any::<bool>());
    prop("closure idempotence", 500, proptest::collection::vec(constraint, 0..6), |cs| {
        let mut d = Dbm::universal(2);
        for (i, j, c, strict) in cs {
            if i != j {
                d.constrain(i, j, if strict { Bound::lt(int(c)) } else { Bound::le(int(c)) });
            }
        }
        prop_assert_eq!(d.clone().closed(), d);
        Ok(())
    })?;

    let (p, q, q4) = (tst("?a{t<=3}.!b{t<=3}"), tst("!a{t<=2}.?b{t<=3}"), tst("!a{t<=4}.?b{t<=4}"));
    let (ap, aq) = (tst("!a{t<=2}.!b{t<=3}"), tst("?a{t>=4}.?b{t>=5}"));
    let mut pairs = 0;
    for (x, y) in [(&p, &q), (&p, &q4), (&ap, &aq)] {
        sync_verdict_kept(x, y, &check_sync_compliance(x, y).unwrap())?;
        pairs += 1;
    }
    for records in corpora {
        for r in records.iter() {
            sync_verdict_kept(&r.p, &r.q, &r.sync)?;
            let v = check_async_deadlock_with(&r.p, &r.q, QUEUE_BOUND, DEPTH, false).map_err(|e| e.to_string())?;
            ensure(v.name() == r.asynchronous.name(), format!("async verdict changes for {} | {}", r.p, r.q))?;
            pairs += 1;
        }
    }
    Ok(format!("zone properties hold; extrapolation keeps the verdicts of {} pairs", pairs))
}

fn constants_at_most(r: &PairRecord, top: u32) -> bool {
    [&r.p, &r.q].iter().all(|t| max_constant(t).values().all(|c| *c <= top))
}

fn flat(t: &Tst) -> bool {
    !tstkit_core::lang::render_tst(t).contains("rec")
}

fn oracle(corpora: &[(&str, &[PairRecord])]) -> Outcome {
    let mut detail = Vec::new();
    let mut disagreements = Vec::new();
    for (name, records) in corpora {
        let sub: Vec<&PairRecord> = records.iter().filter(|r| flat(&r.p) && flat(&r.q) && constants_at_most(r, 3)).collect();
        ensure(sub.len() >= 100, format!("{} sub-corpus has only {} pairs", name, sub.len()))?;
        for r in &sub {
            let s = SystemConfig::initial(r.p.clone(), r.q.clone());
            let sync = discretized_oracle(&s, frac(1, 4), int(4), Mode::Sync, 1_000_000).map_err(|e| e.to_string())?;
            let asy = discretized_oracle(&s, frac(1, 4), int(4), Mode::Async, 1_000_000).map_err(|e| e.to_string())?;
            ensure(!sync.capped && !asy.capped, format!("oracle capped on pair {}", r.index))?;
            let reach = sync_reachability(&r.p, &r.q).map_err(|e| e.to_string())?;
            let compliant = r.sync == Verdict::Compliant;
            let deadlock = matches!(r.asynchronous, Verdict::Deadlock(_));
            if reach.success != sync.success_reachable
                || reach.deadlock != sync.deadlock_reachable
                || compliant == sync.deadlock_reachable
                || deadlock != asy.deadlock_reachable
            {
                disagreements.push(format!(
                    "{} pair {}: p = {}, q = {}; engine success {} deadlock {} async deadlock {}; oracle {} {} {}",
                    name, r.index, r.p, r.q, reach.success, reach.deadlock, deadlock,
                    sync.success_reachable, sync.deadlock_reachable, asy.deadlock_reachable
                ));
            }
        }
        detail.push(format!("{}: {} pairs", name, sub.len()));
    }
    ensure(disagreements.is_empty(), disagreements.join("\n    "))?;
    Ok(format!("{}; 0 disagreements", detail.join(", ")))
}

fn report(n: usize, name: &str, outcome: std::thread::Result<Outcome>) -> bool {
    let (ok, detail) = match outcome {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(p) => (false, format!("panicked: {:?}", p.downcast_ref::<String>().map(String::as_str).or(p.downcast_ref::<&str>().copied()))),
    };
    println!("{} {}. {}: {}", if ok { "PASS" } else { "FAIL" }, n, name, detail);
    ok
}

fn main() -> ExitCode {
    let mut ok = true;
    ok &= report(1, "committed choice", catch_unwind(committed_choice));
    ok &= report(2, "input urgency", catch_unwind(input_urgency));
    ok &= report(3, "compliance verdicts", catch_unwind(compliance_verdicts));
    ok &= report(4, "simulation lemma", catch_unwind(lemma));
    ok &= report(5, "propositions", catch_unwind(propositions));

    let start = Instant::now();
    let built = catch_unwind(|| (corpus(&plain()), corpus(&rich()), corpus(&GenConfig { strict_guards: true, ..plain() })));
    let took = start.elapsed();
    let Ok((plain_records, rich_records, strict_records)) = built else {
        for (n, name) in [(6, "theorem corpus"), (7, "zone engine"), (8, "oracle differential")] {
            report(n, name, Ok(Err("corpus run panicked".into())));
        }
        return ExitCode::FAILURE;
    };
    let corpora: [(&str, &[PairRecord]); 2] = [("plain", &plain_records), ("two-clock", &rich_records)];
    ok &= report(6, "theorem corpus", catch_unwind(AssertUnwindSafe(|| theorem(&corpora, took))));
    ok &= report(7, "zone engine", catch_unwind(AssertUnwindSafe(|| zone_engine(&[&plain_records, &rich_records]))));
    let flat_corpora: [(&str, &[PairRecord]); 2] = [("plain", &plain_records), ("strict", &strict_records)];
    ok &= report(8, "oracle differential", catch_unwind(AssertUnwindSafe(|| oracle(&flat_corpora))));
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
