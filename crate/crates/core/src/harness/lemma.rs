use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::generate::{generate_pair, generate_tst, GenConfig};
use super::sim::{sample_delays, simulate, DelayPolicy, Scheduler};
use crate::compliance::{check_sync_compliance, is_a_deadlock, r_compliant, ComplianceError, Verdict};
use crate::lang::{reachable_terms, Queue};
use crate::rational::{frac, int, Rational};
use crate::semantics::{
    apply_move, async_allowed_delays, async_system_steps, replay_moves, sync_allowed_delays, sync_system_steps,
    EndpointConfig, Mode, Move, SystemConfig,
};
use crate::time::ClockValuation;

/// A counterexample to one of the checked statements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub config: SystemConfig,
    pub step: Option<Move>,
    pub what: &'static str,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub configs: usize,
    /// Individual step checks performed.
    pub checks: usize,
    pub failures: Vec<Failure>,
}

/// A random synchronous configuration: reachable subterms of generated
/// terms, queues of at most one message, valuations on the quarter grid.
pub fn random_sync_config(cfg: &GenConfig, seed: u64) -> SystemConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2);
    let terms = [generate_tst(cfg, seed), generate_tst(cfg, seed ^ 0x9e37_79b9_7f4a_7c15)];
    let actions = cfg.actions();
    let clocks = cfg.clock_names();
    let top = 4 * (i64::from(cfg.max_constant) + 1);
    let mut side = |root| {
        let term = reachable_terms(root).into_iter().choose(&mut rng).expect("a term reaches itself");
        let mut queue = Queue::new();
        if rng.gen_ratio(1, 4) {
            queue.push_back(actions[rng.gen_range(0..actions.len())].clone());
        }
        let valuation = ClockValuation::from_pairs(clocks.iter().map(|c| (c.clone(), frac(rng.gen_range(0..=top), 4))));
        EndpointConfig::new(term, queue, valuation)
    };
    let left = side(&terms[0]);
    let right = side(&terms[1]);
    SystemConfig::new(left, right)
}

/// Delays to probe: the representative ones plus every quarter up to `top`.
fn probes(extra: Vec<Rational>, top: i64) -> BTreeSet<Rational> {
    extra.into_iter().chain((1..=4 * top).map(|k| frac(k, 4))).collect()
}

/// Every synchronous step of `s` is an asynchronous step to the same
/// configuration; with empty queues every asynchronous delay is a
/// synchronous one.
pub fn check_simulation(s: &SystemConfig, top: i64, report: &mut SuiteReport) {
    let asynchronous = async_system_steps(s);
    for (m, next) in sync_system_steps(s) {
        report.checks += 1;
        if !asynchronous.contains(&(m.clone(), next)) {
            report.failures.push(Failure { config: s.clone(), step: Some(m), what: "synchronous step not matched asynchronously" });
        }
    }
    let sync_delays = sync_allowed_delays(s);
    for d in probes(sample_delays(sync_delays, int(top)), top) {
        let m = Move::Delay(d);
        let sync = apply_move(s, Mode::Sync, &m);
        if sync.is_none() {
            continue;
        }
        report.checks += 1;
        if sync != apply_move(s, Mode::Async, &m) {
            report.failures.push(Failure { config: s.clone(), step: Some(m), what: "synchronous delay not matched asynchronously" });
        }
    }
    if s.queues_empty() {
        for d in probes(sample_delays(async_allowed_delays(s), int(top)), top) {
            let m = Move::Delay(d);
            let asy = apply_move(s, Mode::Async, &m);
            if asy.is_none() {
                continue;
            }
            report.checks += 1;
            if asy != apply_move(s, Mode::Sync, &m) {
                report.failures.push(Failure { config: s.clone(), step: Some(m), what: "asynchronous delay not matched synchronously" });
            }
        }
    }
}

/// The simulation checks over `n` random synchronous configurations.
pub fn simulation_suite(n: usize, cfg: &GenConfig, seed: u64) -> SuiteReport {
    let top = i64::from(cfg.max_constant) + 2;
    let mut report = SuiteReport::default();
    for i in 0..n {
        let s = random_sync_config(cfg, seed.wrapping_add(i as u64));
        check_simulation(&s, top, &mut report);
        report.configs += 1;
    }
    report
}

/// For an r-compliant `s`: it is not an a-deadlock, it delays only with
/// both queues empty, and its asynchronous successors (including sampled
/// delays) are r-compliant.
pub fn check_propositions(s: &SystemConfig, top: i64, report: &mut SuiteReport) -> Result<(), ComplianceError> {
    report.checks += 1;
    if is_a_deadlock(s) {
        report.failures.push(Failure { config: s.clone(), step: None, what: "r-compliant configuration is an a-deadlock" });
    }
    let delays = async_allowed_delays(s);
    report.checks += 1;
    if !delays.is_empty() && !s.queues_empty() {
        report.failures.push(Failure { config: s.clone(), step: None, what: "delay allowed with a non-empty queue" });
    }
    let mut successors = async_system_steps(s);
    for d in sample_delays(delays, int(top)) {
        let m = Move::Delay(d);
        if let Some(next) = apply_move(s, Mode::Async, &m) {
            successors.push((m, next));
        }
    }
    for (m, next) in successors {
        report.checks += 1;
        if !r_compliant(&next.left, &next.right)? {
            report.failures.push(Failure { config: s.clone(), step: Some(m), what: "successor is not r-compliant" });
        }
    }
    Ok(())
}

/// The proposition checks over `n` r-compliant configurations, collected
/// along seeded asynchronous runs of generated synchronously compliant
/// pairs. Every configuration on such a run must be r-compliant; one that
/// is not is reported as a failure. `max_pairs` bounds the pairs tried.
pub fn propositions_suite(n: usize, cfg: &GenConfig, seed: u64, max_pairs: usize) -> Result<SuiteReport, ComplianceError> {
    let top = i64::from(cfg.max_constant) + 2;
    let mut report = SuiteReport::default();
    let mut seen = BTreeSet::new();
    for i in 0..max_pairs {
        if report.configs >= n {
            break;
        }
        let s = seed.wrapping_add(i as u64);
        let (p, q) = generate_pair(cfg, s);
        if check_sync_compliance(&p, &q)? != Verdict::Compliant {
            continue;
        }
        let init = SystemConfig::initial(p, q);
        let sched = Scheduler::SeededRandom { seed: s, policy: DelayPolicy::Boundary };
        let run = simulate(&init, &sched, Mode::Async, 12).expect("random runs always succeed");
        for k in 0..=run.trace.moves.len() {
            if report.configs >= n {
                break;
            }
            let c = replay_moves(&init, Mode::Async, &run.trace.moves[..k]).expect("a run replays");
            if !seen.insert(c.clone()) {
                continue;
            }
            if !r_compliant(&c.left, &c.right)? {
                report.failures.push(Failure { config: c, step: None, what: "reachable configuration is not r-compliant" });
                continue;
            }
            check_propositions(&c, top, &mut report)?;
            report.configs += 1;
        }
    }
    Ok(report)
}
