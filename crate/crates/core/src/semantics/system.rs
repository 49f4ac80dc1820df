use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use super::config::{EndpointConfig, Side, SystemConfig};
use super::endpoint::{endpoint_moves, rdy_window, window, EndpointMove, Mode, StepLabel};
use crate::lang::{unfold, Action, Tst};
use crate::rational::Rational;
use crate::time::{DelayInterval, IntervalSet};

/// A system step. Discrete steps are all `τ`; the variant records which
/// rule produced it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    /// An endpoint commits to (in the asynchronous reading, enqueues) an
    /// output.
    Commit { actor: Side, action: Action },
    /// The sender's queue head is consumed by the receiver's input.
    Sync { sender: Side, action: Action },
    Delay(Rational),
}

impl Move {
    pub fn label(&self) -> StepLabel {
        match self {
            Move::Delay(d) => StepLabel::Delay(*d),
            _ => StepLabel::Tau,
        }
    }

    pub fn is_tau(&self) -> bool {
        !matches!(self, Move::Delay(_))
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Commit { actor, action } => write!(f, "τ[{} commits !{}]", actor.name(), action),
            Move::Sync { sender, action } => {
                write!(f, "τ[{} !{} → {} ?{}]", sender.name(), action, sender.other().name(), action)
            }
            Move::Delay(d) => write!(f, "{}", d),
        }
    }
}

fn with_side(s: &SystemConfig, side: Side, c: EndpointConfig) -> SystemConfig {
    let mut out = s.clone();
    *out.side_mut(side) = c;
    out
}

/// All `τ` steps of a configuration under `mode`.
pub fn system_steps(s: &SystemConfig, mode: Mode) -> Vec<(Move, SystemConfig)> {
    let mut out = Vec::new();
    let moves = [endpoint_moves(&s.left, mode), endpoint_moves(&s.right, mode)];
    for side in [Side::Left, Side::Right] {
        let (mine, theirs) = match side {
            Side::Left => (&moves[0], &moves[1]),
            Side::Right => (&moves[1], &moves[0]),
        };
        for (m, c) in mine {
            match m {
                EndpointMove::Commit(a) => {
                    out.push((Move::Commit { actor: side, action: a.clone() }, with_side(s, side, c.clone())));
                }
                EndpointMove::Out(a) => {
                    for (n, d) in theirs {
                        if *n == EndpointMove::In(a.clone()) {
                            let next = with_side(&with_side(s, side, c.clone()), side.other(), d.clone());
                            out.push((Move::Sync { sender: side, action: a.clone() }, next));
                        }
                    }
                }
                EndpointMove::In(_) => {}
            }
        }
    }
    out
}

/// `τ` steps of the synchronous relation.
pub fn sync_system_steps(s: &SystemConfig) -> Vec<(Move, SystemConfig)> {
    system_steps(s, Mode::Sync)
}

/// `τ` steps of the asynchronous relation.
pub fn async_system_steps(s: &SystemConfig) -> Vec<(Move, SystemConfig)> {
    system_steps(s, Mode::Async)
}

/// Window of the input branch for `action` in `c`, after delays.
fn input_window(c: &EndpointConfig, action: &Action) -> IntervalSet {
    match unfold(&c.term).input_branch(action) {
        Some(b) => window(&b.guard, &c.valuation),
        None => IntervalSet::empty(),
    }
}

/// Delays `δ ≥ 0` at which the configuration is `δ`-sync: some queue head
/// can be read by the partner.
pub fn sync_instants(s: &SystemConfig) -> IntervalSet {
    let mut out = IntervalSet::empty();
    for side in [Side::Left, Side::Right] {
        if let Some(head) = s.side(side).queue.front() {
            out = out.union(&input_window(s.side(side.other()), head));
        }
    }
    out
}

/// The `δ`-sync predicate.
pub fn delta_sync(s: &SystemConfig, delta: Rational) -> bool {
    sync_instants(s).contains(delta)
}

fn rdy_meet(s: &SystemConfig) -> DelayInterval {
    rdy_window(&s.left.term, &s.left.valuation).meet(&rdy_window(&s.right.term, &s.right.valuation))
}

/// Delays of the synchronous relation: none unless both queues are empty.
pub fn sync_allowed_delays(s: &SystemConfig) -> DelayInterval {
    if !s.queues_empty() {
        return DelayInterval::Empty;
    }
    rdy_meet(s)
}

/// Delays of the asynchronous relation: both endpoints may delay, and time
/// may not pass the first instant at which a message can be read.
pub fn async_allowed_delays(s: &SystemConfig) -> DelayInterval {
    let delays = rdy_meet(s);
    match sync_instants(s).infimum() {
        None => delays,
        Some(m) if m.is_zero() => DelayInterval::Empty,
        Some(m) => delays.truncate_inclusive(m),
    }
}

pub fn allowed_delays(s: &SystemConfig, mode: Mode) -> DelayInterval {
    match mode {
        Mode::Sync => sync_allowed_delays(s),
        Mode::Async => async_allowed_delays(s),
    }
}

/// Delays `δ ≥ 0` after which some `τ` step is enabled (queues and terms
/// unchanged by the delay).
pub fn tau_window(s: &SystemConfig, mode: Mode) -> IntervalSet {
    let mut out = IntervalSet::empty();
    for side in [Side::Left, Side::Right] {
        let me = s.side(side);
        let other = s.side(side.other());
        if mode == Mode::Async || me.queue.is_empty() {
            if let Tst::Internal(bs) = unfold(&me.term) {
                for b in &bs {
                    out = out.union(&window(&b.guard, &me.valuation));
                }
            }
        }
        if let Some(head) = me.queue.front() {
            if mode == Mode::Async || other.queue.is_empty() {
                out = out.union(&input_window(other, head));
            }
        }
    }
    out
}

/// Both endpoints are `1` with empty queues.
pub fn is_success(s: &SystemConfig) -> bool {
    s.queues_empty() && unfold(&s.left.term) == Tst::Success && unfold(&s.right.term) == Tst::Success
}

/// Performs one move, if it is enabled.
pub fn apply_move(s: &SystemConfig, mode: Mode, m: &Move) -> Option<SystemConfig> {
    match m {
        Move::Delay(d) => allowed_delays(s, mode).contains(*d).then(|| {
            let mut next = s.clone();
            next.left.valuation = next.left.valuation.delayed(*d);
            next.right.valuation = next.right.valuation.delayed(*d);
            next
        }),
        _ => system_steps(s, mode).into_iter().find(|(n, _)| n == m).map(|(_, c)| c),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("step {index} ({step}) is not enabled")]
pub struct ReplayError {
    pub index: usize,
    pub step: Move,
}

/// Replays `moves` from `s`, returning the final configuration.
pub fn replay_moves(s: &SystemConfig, mode: Mode, moves: &[Move]) -> Result<SystemConfig, ReplayError> {
    let mut cur = s.clone();
    for (index, m) in moves.iter().enumerate() {
        cur = apply_move(&cur, mode, m).ok_or_else(|| ReplayError { index, step: m.clone() })?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_tst;
    use crate::rational::int;
    use crate::time::{Clock, ClockValuation};

    fn ep(term: &str, queue: &[&str], t: i64) -> EndpointConfig {
        EndpointConfig::new(
            parse_tst(term).unwrap(),
            queue.iter().map(|a| Action::new(*a)).collect(),
            ClockValuation::from_pairs([(Clock::new("t"), int(t))]),
        )
    }

    fn commit(actor: Side, a: &str) -> Move {
        Move::Commit { actor, action: Action::new(a) }
    }

    #[test]
    fn committed_choice_reductions() {
        let s = SystemConfig::new(ep("1", &["b"], 7), ep("?b{t>=5}", &[], 7));
        let steps = sync_system_steps(&s);
        assert_eq!(steps.len(), 1);
        assert!(is_success(&steps[0].1));
        let stuck = SystemConfig::new(ep("1", &["a"], 2), ep("?b{t>=5}", &[], 2));
        assert!(sync_system_steps(&stuck).is_empty());
        assert_eq!(sync_allowed_delays(&stuck), DelayInterval::Empty);
        let init = SystemConfig::initial(parse_tst("!a (+) !b{t>=2}").unwrap(), parse_tst("?b{t>=5}").unwrap());
        let moves: Vec<Move> = sync_system_steps(&init).into_iter().map(|(m, _)| m).collect();
        assert_eq!(moves, alloc::vec![commit(Side::Left, "a")]);
        assert_eq!(sync_allowed_delays(&init), DelayInterval::Unbounded);
    }

    #[test]
    fn early_send_delays() {
        let p = parse_tst("!a{t<=2}.!b{t<=3}").unwrap();
        let q = parse_tst("?a{t>=4}.?b{t>=5}").unwrap();
        let init = SystemConfig::initial(p, q);
        assert_eq!(sync_allowed_delays(&init), DelayInterval::up_to(int(2), true));
        assert_eq!(async_allowed_delays(&init), DelayInterval::up_to(int(2), true));
        let sent = SystemConfig::new(ep("1", &["a", "b"], 0), ep("?a{t>=4}.?b{t>=5}", &[], 0));
        assert_eq!(async_allowed_delays(&sent), DelayInterval::up_to(int(4), true));
        assert!(delta_sync(&sent, int(4)) && !delta_sync(&sent, int(3)));
        let strict = SystemConfig::new(ep("1", &["a", "b"], 0), ep("?a{t>4}.?b{t>=5}", &[], 0));
        assert_eq!(async_allowed_delays(&strict), DelayInterval::up_to(int(4), true));
        let at4 = apply_move(&strict, Mode::Async, &Move::Delay(int(4))).unwrap();
        assert!(async_system_steps(&at4).is_empty());
        assert_eq!(async_allowed_delays(&at4), DelayInterval::Empty);
        let idle = SystemConfig::new(ep("?x", &[], 0), ep("?y", &[], 0));
        assert!(sync_instants(&idle).is_empty());
    }

    #[test]
    fn async_commits_interleave() {
        let s = SystemConfig::initial(parse_tst("!a").unwrap(), parse_tst("!b").unwrap());
        let moves: Vec<Move> = async_system_steps(&s).into_iter().map(|(m, _)| m).collect();
        assert_eq!(moves, alloc::vec![commit(Side::Left, "a"), commit(Side::Right, "b")]);
    }

    #[test]
    fn replay_reports_failing_index() {
        let s = SystemConfig::initial(parse_tst("!a{t<=2}").unwrap(), parse_tst("?a").unwrap());
        let err = replay_moves(&s, Mode::Sync, &[Move::Delay(int(5))]).unwrap_err();
        assert_eq!(err.index, 0);
        let ok = replay_moves(
            &s,
            Mode::Sync,
            &[Move::Delay(int(1)), commit(Side::Left, "a"), Move::Sync { sender: Side::Left, action: Action::new("a") }],
        )
        .unwrap();
        assert!(is_success(&ok));
    }
}
