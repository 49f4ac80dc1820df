//! Deadlock predicates, the synchronous compliance checker, bounded
//! asynchronous deadlock search, remainders and r-compliance.

mod engine;
mod remainder;

pub use engine::{Edge, Explorer, LocInfo, Location, SearchLimits, SymbolicState};
pub use remainder::{r_compliant, remainder};

use alloc::vec::Vec;
use core::fmt;

use crate::lang::{clocks, Tst, ValidationError};
use crate::semantics::{allowed_delays, is_success, tau_window, Mode, Side, SystemConfig, Trace};
use crate::time::{ClockValuation, Interval, TimeError};

/// Outcome of a compliance check or a deadlock search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Compliant,
    /// A reachable s-deadlock, with a run reaching it.
    NotCompliant(Trace),
    /// The bounded search found no a-deadlock. `bound_hit` records that
    /// some commit was cut off by the queue bound, `truncated` that the
    /// state budget ran out.
    NoDeadlockFoundUpTo { queue_bound: usize, depth: usize, bound_hit: bool, truncated: bool },
    /// A reachable a-deadlock, with a run reaching it.
    Deadlock(Trace),
}

impl Verdict {
    pub fn trace(&self) -> Option<&Trace> {
        match self {
            Verdict::NotCompliant(t) | Verdict::Deadlock(t) => Some(t),
            _ => None,
        }
    }

    /// The search was cut short, so the absence of a deadlock is not proved.
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Verdict::NoDeadlockFoundUpTo { bound_hit, truncated, .. } if *bound_hit || *truncated)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Compliant => "compliant",
            Verdict::NotCompliant(_) => "not-compliant",
            Verdict::NoDeadlockFoundUpTo { .. } => "no-deadlock-found",
            Verdict::Deadlock(_) => "deadlock",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NoDeadlockFoundUpTo { queue_bound, depth, bound_hit, truncated } => write!(
                f,
                "no deadlock found (queue bound {}, depth {}{}{})",
                queue_bound,
                depth,
                if *bound_hit { ", queue bound hit" } else { "" },
                if *truncated { ", state budget exhausted" } else { "" }
            ),
            v => f.write_str(v.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplianceError {
    #[error("{} term is not well formed: {errors:?}", side.name())]
    Invalid { side: Side, errors: Vec<ValidationError> },
    #[error(transparent)]
    Time(#[from] TimeError),
    #[error("queue bound must be at least 1")]
    ZeroQueueBound,
    #[error("internal error while rebuilding a counterexample: {0}")]
    Witness(&'static str),
}

/// Not success, no `τ` now, and no permitted delay after which a `τ` is
/// enabled.
pub fn is_deadlock(s: &SystemConfig, mode: Mode) -> bool {
    if is_success(s) {
        return false;
    }
    let taus = tau_window(s, mode);
    if taus.contains(num_traits::Zero::zero()) {
        return false;
    }
    match allowed_delays(s, mode).to_interval() {
        Some(delays) => taus.intersect_interval(&delays).is_empty(),
        None => true,
    }
}

/// s-deadlock under the synchronous relation.
pub fn is_s_deadlock(s: &SystemConfig) -> bool {
    is_deadlock(s, Mode::Sync)
}

/// a-deadlock under the asynchronous relation.
pub fn is_a_deadlock(s: &SystemConfig) -> bool {
    is_deadlock(s, Mode::Async)
}

/// Positive delays after which a `τ` is enabled, for diagnostics.
pub fn tau_delays(s: &SystemConfig, mode: Mode) -> Option<Interval> {
    let delays = allowed_delays(s, mode).to_interval()?;
    tau_window(s, mode).intersect_interval(&delays).parts().first().cloned()
}

/// Synchronous compliance `p ⋈ q` from `ν₀`, `η₀`.
pub fn check_sync_compliance(p: &Tst, q: &Tst) -> Result<Verdict, ComplianceError> {
    check_sync_compliance_with(p, q, true)
}

/// As [`check_sync_compliance`], optionally without extrapolation of the
/// endpoint clocks (the search may then fail to terminate on recursive
/// terms).
pub fn check_sync_compliance_with(p: &Tst, q: &Tst, extrapolate: bool) -> Result<Verdict, ComplianceError> {
    let nu = ClockValuation::zero(&clocks(p));
    let eta = ClockValuation::zero(&clocks(q));
    check_sync_compliance_from(p, &nu, q, &eta, extrapolate, None)
        .map(|v| v.expect("no state budget was given"))
}

/// `(p, ν) ⋈ (q, η)` from arbitrary valuations. With a state budget the
/// result is `None` when the budget runs out before a verdict.
pub fn check_sync_compliance_from(
    p: &Tst,
    nu: &ClockValuation,
    q: &Tst,
    eta: &ClockValuation,
    extrapolate: bool,
    max_states: Option<usize>,
) -> Result<Option<Verdict>, ComplianceError> {
    let explorer = Explorer::new(Mode::Sync, p, q)?;
    let init = explorer.point(nu, eta)?;
    let initial = explorer.initial_config(nu.clone(), eta.clone());
    let limits = SearchLimits { queue_bound: 1, max_states, extrapolate, exhaustive: false };
    let outcome = explorer.search(&init, &initial, &limits)?;
    Ok(match outcome.deadlock {
        Some(trace) => Some(Verdict::NotCompliant(trace)),
        None if outcome.truncated => None,
        None => Some(Verdict::Compliant),
    })
}

/// Bounded search for an a-deadlock reachable from `(p, ∅, ν₀) | (q, ∅, η₀)`
/// with queues of at most `queue_bound` messages and at most `depth`
/// symbolic states.
pub fn check_async_deadlock_bounded(p: &Tst, q: &Tst, queue_bound: usize, depth: usize) -> Result<Verdict, ComplianceError> {
    check_async_deadlock_with(p, q, queue_bound, depth, true)
}

pub fn check_async_deadlock_with(
    p: &Tst,
    q: &Tst,
    queue_bound: usize,
    depth: usize,
    extrapolate: bool,
) -> Result<Verdict, ComplianceError> {
    if queue_bound == 0 {
        return Err(ComplianceError::ZeroQueueBound);
    }
    let explorer = Explorer::new(Mode::Async, p, q)?;
    let nu = ClockValuation::zero(&clocks(p));
    let eta = ClockValuation::zero(&clocks(q));
    let init = explorer.point(&nu, &eta)?;
    let initial = explorer.initial_config(nu, eta);
    let limits = SearchLimits { queue_bound, max_states: Some(depth), extrapolate, exhaustive: false };
    let outcome = explorer.search(&init, &initial, &limits)?;
    Ok(match outcome.deadlock {
        Some(trace) => Verdict::Deadlock(trace),
        None => Verdict::NoDeadlockFoundUpTo {
            queue_bound,
            depth,
            bound_hit: outcome.bound_hit,
            truncated: outcome.truncated,
        },
    })
}

/// What the synchronous composition of `p` and `q` can reach.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reachability {
    pub success: bool,
    pub deadlock: bool,
    /// Symbolic states explored.
    pub states: usize,
}

/// Explores the whole synchronous zone graph of `p | q`, recording whether
/// success and an s-deadlock are reachable.
pub fn sync_reachability(p: &Tst, q: &Tst) -> Result<Reachability, ComplianceError> {
    let explorer = Explorer::new(Mode::Sync, p, q)?;
    let nu = ClockValuation::zero(&clocks(p));
    let eta = ClockValuation::zero(&clocks(q));
    let init = explorer.point(&nu, &eta)?;
    let initial = explorer.initial_config(nu, eta);
    let limits = SearchLimits { queue_bound: 1, max_states: None, extrapolate: true, exhaustive: true };
    let outcome = explorer.search(&init, &initial, &limits)?;
    Ok(Reachability { success: outcome.success, deadlock: outcome.deadlock.is_some(), states: outcome.states })
}

/// Symbolic successors of a synchronous symbolic state.
pub fn sync_symbolic_successors(explorer: &Explorer, state: &SymbolicState) -> Vec<SymbolicState> {
    explorer.successors(state, &SearchLimits { queue_bound: 1, max_states: None, extrapolate: true, exhaustive: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec::Vec;
    use crate::lang::{parse_tst, Action};
    use crate::rational::int;
    use crate::semantics::{replay_moves, EndpointConfig, Move};
    use crate::time::Clock;

    fn tst(s: &str) -> Tst {
        parse_tst(s).unwrap()
    }

    fn ep(term: &str, queue: &[&str], t: i64) -> EndpointConfig {
        EndpointConfig::new(
            tst(term),
            queue.iter().map(|a| Action::new(*a)).collect(),
            ClockValuation::from_pairs([(Clock::new("t"), int(t))]),
        )
    }

    fn ends_in(v: &Verdict, mode: Mode) -> SystemConfig {
        let t = v.trace().expect("a counterexample");
        let end = replay_moves(&t.initial, mode, &t.moves).expect("trace replays");
        assert!(is_deadlock(&end, mode), "trace ends in {}", end);
        end
    }

    #[test]
    fn compliance_example_pair() {
        let p = tst("?a{t<=3}.!b{t<=3}");
        assert_eq!(check_sync_compliance(&p, &tst("!a{t<=2}.?b{t<=3}")).unwrap(), Verdict::Compliant);
        let v = check_sync_compliance(&p, &tst("!a{t<=4}.?b{t<=4}")).unwrap();
        assert!(matches!(v, Verdict::NotCompliant(_)));
        ends_in(&v, Mode::Sync);
    }

    #[test]
    fn early_send_pair_is_not_sync_compliant() {
        let p = tst("!a{t<=2}.!b{t<=3}");
        let q = tst("?a{t>=4}.?b{t>=5}");
        let v = check_sync_compliance(&p, &q).unwrap();
        let end = ends_in(&v, Mode::Sync);
        assert_eq!(end.left.queue, [Action::new("a")].into_iter().collect::<crate::lang::Queue>());
        assert!(end.right.queue.is_empty());
        assert!(matches!(v.trace().unwrap().moves.last(), Some(Move::Commit { .. })));
    }

    #[test]
    fn deadlock_predicates() {
        let s = SystemConfig::new(ep("!b{t<=3}", &["a"], 0), ep("?a{t>=4}.?b{t>=5}", &[], 0));
        assert!(is_s_deadlock(&s));
        let ok = SystemConfig::new(ep("1", &[], 3), ep("1", &[], 1));
        assert!(!is_s_deadlock(&ok) && !is_a_deadlock(&ok));
        let init = SystemConfig::initial(tst("!a (+) !b{t>=2}"), tst("?b{t>=5}"));
        assert!(!is_s_deadlock(&init));
        let strict = SystemConfig::new(ep("1", &["a", "b"], 4), ep("?a{t>4}.?b{t>=5}", &[], 4));
        assert!(is_a_deadlock(&strict));
        let sent = SystemConfig::new(ep("1", &["a", "b"], 0), ep("?a{t>=4}.?b{t>=5}", &[], 0));
        assert!(!is_a_deadlock(&sent));
    }

    #[test]
    fn async_searches() {
        let p = tst("!a{t<=2}.!b{t<=3}");
        let v = check_async_deadlock_bounded(&p, &tst("?a{t>=4}.?b{t>=5}"), 2, 2000).unwrap();
        assert_eq!(v, Verdict::NoDeadlockFoundUpTo { queue_bound: 2, depth: 2000, bound_hit: false, truncated: false });
        let v = check_async_deadlock_bounded(&p, &tst("?a{t>4}.?b{t>=5}"), 2, 2000).unwrap();
        let end = ends_in(&v, Mode::Async);
        assert_eq!(end.right.valuation.get(&Clock::new("t")), Some(int(4)), "{}\n{}", v.trace().unwrap().moves.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" "), end);
        let c = check_async_deadlock_bounded(&tst("?a{t<=3}.!b{t<=3}"), &tst("!a{t<=2}.?b{t<=3}"), 4, 2000).unwrap();
        assert!(matches!(c, Verdict::NoDeadlockFoundUpTo { .. }));
    }

    #[test]
    fn remainders() {
        let c = ep("?a{t>=4}.?b{t>=5}", &[], 4);
        assert_eq!(remainder(&c, &Default::default()), Some(c.clone()));
        let a: crate::lang::Queue = [Action::new("a")].into_iter().collect();
        assert_eq!(remainder(&c, &a), Some(ep("?b{t>=5}", &[], 4)));
        assert_eq!(remainder(&ep("?a{t>4}", &[], 4), &a), None);
    }

    #[test]
    fn r_compliance_examples() {
        let p = ep("?a{t<=3}.!b{t<=3}", &[], 0);
        let q = ep("!a{t<=2}.?b{t<=3}", &[], 0);
        assert!(r_compliant(&p, &q).unwrap());
        assert!(r_compliant(&ep("1", &["a"], 0), &ep("?a{t<=5}", &[], 0)).unwrap());
        assert!(!r_compliant(&ep("1", &["a", "b"], 0), &ep("?a{t>=4}.?b{t>=5}", &[], 0)).unwrap());
    }

    #[test]
    fn recursive_pair_terminates() {
        let p = tst("rec X . !a{t<=2}[t].?b{t<=1}.X");
        let q = tst("rec Y . ?a{t<=3}[t].!b{t<=1}.Y");
        assert_eq!(check_sync_compliance(&p, &q).unwrap(), Verdict::Compliant);
        let v = check_async_deadlock_bounded(&p, &q, 4, 2000).unwrap();
        assert!(matches!(v, Verdict::NoDeadlockFoundUpTo { truncated: false, .. }), "{:?}", v);
    }
}
