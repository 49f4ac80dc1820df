use alloc::collections::{BTreeSet, VecDeque};

use num_traits::Zero;

use crate::compliance::is_deadlock;
use crate::lang::{max_constant, reachable_terms, Tst};
use crate::rational::{int, Rational};
use crate::semantics::{allowed_delays, apply_move, is_success, system_steps, EndpointConfig, Mode, Move, SystemConfig};
use crate::time::{ClockValuation, Guard};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub success_reachable: bool,
    pub deadlock_reachable: bool,
    /// A deadlocked configuration, when one was found.
    pub deadlock: Option<SystemConfig>,
    pub nodes: usize,
    /// The node cap stopped the search early.
    pub capped: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("granularity must be positive")]
    Granularity,
    #[error("horizon must exceed every guard constant ({0})")]
    Horizon(u32),
    #[error("clock differences are not supported by the sampled search")]
    Diagonal,
}

/// Exhaustive search of `s` where every delay is a multiple of
/// `granularity`. Clock values are capped at `horizon`, which is exact as
/// long as the horizon exceeds every constant and no guard compares two
/// clocks. Deadlock is decided exactly at each sampled configuration.
pub fn discretized_oracle(
    s: &SystemConfig,
    granularity: Rational,
    horizon: Rational,
    mode: Mode,
    node_cap: usize,
) -> Result<OracleResult, OracleError> {
    if granularity <= Rational::zero() {
        return Err(OracleError::Granularity);
    }
    let mut top = 0;
    for term in [&s.left.term, &s.right.term] {
        top = max_constant(term).values().copied().fold(top, u32::max);
        if has_diagonal(term) {
            return Err(OracleError::Diagonal);
        }
    }
    if horizon <= int(top.into()) {
        return Err(OracleError::Horizon(top));
    }

    let mut out = OracleResult { success_reachable: false, deadlock_reachable: false, deadlock: None, nodes: 0, capped: false };
    let start = cap(s, horizon);
    let mut seen = BTreeSet::from([start.clone()]);
    let mut todo = VecDeque::from([start]);
    while let Some(cur) = todo.pop_front() {
        if out.nodes >= node_cap {
            out.capped = true;
            break;
        }
        out.nodes += 1;
        if is_success(&cur) {
            out.success_reachable = true;
            continue;
        }
        if is_deadlock(&cur, mode) {
            out.deadlock_reachable = true;
            out.deadlock.get_or_insert(cur);
            continue;
        }
        let mut next = system_steps(&cur, mode).into_iter().map(|(_, c)| c).collect::<alloc::vec::Vec<_>>();
        let delays = allowed_delays(&cur, mode);
        let mut d = granularity;
        while d <= horizon && delays.contains(d) {
            next.extend(apply_move(&cur, mode, &Move::Delay(d)));
            d += granularity;
        }
        for c in next {
            let c = cap(&c, horizon);
            if seen.insert(c.clone()) {
                todo.push_back(c);
            }
        }
    }
    Ok(out)
}

fn has_diagonal(p: &Tst) -> bool {
    reachable_terms(p).iter().any(|t| {
        t.branches().iter().any(|b| {
            let mut found = false;
            b.guard.visit_atoms(&mut |g| found |= matches!(g, Guard::Diag(..)));
            found
        })
    })
}

fn cap(s: &SystemConfig, horizon: Rational) -> SystemConfig {
    let side = |e: &EndpointConfig| EndpointConfig {
        valuation: ClockValuation::from_pairs(e.valuation.iter().map(|(c, v)| (c.clone(), (*v).min(horizon)))),
        ..e.clone()
    };
    SystemConfig::new(side(&s.left), side(&s.right))
}
