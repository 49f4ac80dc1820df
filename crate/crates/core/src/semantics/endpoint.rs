use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use super::config::EndpointConfig;
use crate::lang::{unfold, Action, Tst};
use crate::rational::Rational;
use crate::time::{guard_sat, guard_window, guard_zones, ClockValuation, DelayInterval, Guard, IntervalSet, Owner, TimeError, Universe, ZoneSet};

/// Which of the two transition relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Sync,
    Async,
}

/// `τ`, a delay `δ > 0`, `!a` or `?a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StepLabel {
    Tau,
    Delay(Rational),
    Out(Action),
    In(Action),
}

impl fmt::Display for StepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepLabel::Tau => f.write_str("τ"),
            StepLabel::Delay(d) => write!(f, "{}", d),
            StepLabel::Out(a) => write!(f, "!{}", a),
            StepLabel::In(a) => write!(f, "?{}", a),
        }
    }
}

/// A discrete endpoint step, with the action it concerns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EndpointMove {
    /// `τ` committing to an output branch (its message joins the queue).
    Commit(Action),
    Out(Action),
    In(Action),
}

impl EndpointMove {
    pub fn label(&self) -> StepLabel {
        match self {
            EndpointMove::Commit(_) => StepLabel::Tau,
            EndpointMove::Out(a) => StepLabel::Out(a.clone()),
            EndpointMove::In(a) => StepLabel::In(a.clone()),
        }
    }
}

pub(crate) fn sat(g: &Guard, nu: &ClockValuation) -> bool {
    guard_sat(g, nu).unwrap_or(false)
}

pub(crate) fn window(g: &Guard, nu: &ClockValuation) -> IntervalSet {
    guard_window(g, nu).unwrap_or_else(|_| IntervalSet::empty())
}

/// Discrete steps of one endpoint under `mode`.
pub(crate) fn endpoint_moves(c: &EndpointConfig, mode: Mode) -> Vec<(EndpointMove, EndpointConfig)> {
    let term = unfold(&c.term);
    let mut out = Vec::new();
    if let Some(head) = c.queue.front() {
        let mut queue = c.queue.clone();
        queue.pop_front();
        out.push((EndpointMove::Out(head.clone()), EndpointConfig::new(c.term.clone(), queue, c.valuation.clone())));
    }
    if mode == Mode::Sync && !c.queue.is_empty() {
        return out;
    }
    match &term {
        Tst::Internal(bs) => {
            for b in bs.iter().filter(|b| sat(&b.guard, &c.valuation)) {
                let mut queue = c.queue.clone();
                queue.push_back(b.action().clone());
                out.push((
                    EndpointMove::Commit(b.action().clone()),
                    EndpointConfig::new(b.cont.clone(), queue, c.valuation.reset(&b.resets)),
                ));
            }
        }
        Tst::External(bs) => {
            for b in bs.iter().filter(|b| sat(&b.guard, &c.valuation)) {
                out.push((
                    EndpointMove::In(b.action().clone()),
                    EndpointConfig::new(b.cont.clone(), c.queue.clone(), c.valuation.reset(&b.resets)),
                ));
            }
        }
        _ => {}
    }
    out
}

/// Discrete steps of the synchronous relation (queue of length at most one).
pub fn sync_endpoint_steps(c: &EndpointConfig) -> Vec<(StepLabel, EndpointConfig)> {
    endpoint_moves(c, Mode::Sync).into_iter().map(|(m, c)| (m.label(), c)).collect()
}

/// Discrete steps of the asynchronous relation.
pub fn async_endpoint_steps(c: &EndpointConfig) -> Vec<(StepLabel, EndpointConfig)> {
    endpoint_moves(c, Mode::Async).into_iter().map(|(m, c)| (m.label(), c)).collect()
}

/// `rdy(p)` over `universe`, with `p`'s clocks read as `owner`'s: the past
/// of the union of the guards of an internal choice; everything otherwise.
pub fn rdy(p: &Tst, universe: &Universe, owner: Owner) -> Result<ZoneSet, TimeError> {
    match unfold(p) {
        Tst::Internal(bs) => {
            let mut union = ZoneSet::empty(universe.dim());
            for b in &bs {
                union = union.join(&guard_zones(&b.guard, universe, owner)?);
            }
            Ok(union.past())
        }
        _ => Ok(ZoneSet::universal(universe.dim())),
    }
}

/// Positive delays `δ` with `ν + δ ∈ rdy(p)`.
pub fn rdy_window(p: &Tst, nu: &ClockValuation) -> DelayInterval {
    match unfold(p) {
        Tst::Internal(bs) => {
            let union = bs.iter().fold(IntervalSet::empty(), |acc, b| acc.union(&window(&b.guard, nu)));
            DelayInterval::down_closure(&union)
        }
        _ => DelayInterval::Unbounded,
    }
}

fn endpoint_delay(c: &EndpointConfig, delta: Rational) -> Option<EndpointConfig> {
    if delta <= Rational::zero() || !rdy_window(&c.term, &c.valuation).contains(delta) {
        return None;
    }
    Some(EndpointConfig::new(c.term.clone(), c.queue.clone(), c.valuation.delayed(delta)))
}

/// Endpoint delay of the synchronous relation; `None` when not permitted
/// (including `δ ≤ 0`).
pub fn sync_endpoint_delay(c: &EndpointConfig, delta: Rational) -> Option<EndpointConfig> {
    if !c.queue.is_empty() {
        return None;
    }
    endpoint_delay(c, delta)
}

/// Endpoint delay of the asynchronous relation (no queue premise).
pub fn async_endpoint_delay(c: &EndpointConfig, delta: Rational) -> Option<EndpointConfig> {
    endpoint_delay(c, delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_tst;
    use crate::rational::int;
    use crate::time::Clock;

    fn at(term: &str, queue: &[&str], t: i64) -> EndpointConfig {
        EndpointConfig::new(
            parse_tst(term).unwrap(),
            queue.iter().map(|a| Action::new(*a)).collect(),
            ClockValuation::from_pairs([(Clock::new("t"), int(t))]),
        )
    }

    #[test]
    fn committed_choice_commits_at_seven() {
        let steps = sync_endpoint_steps(&at("!a (+) !b{t>=2}", &[], 7));
        assert_eq!(steps, alloc::vec![(StepLabel::Tau, at("1", &["a"], 7)), (StepLabel::Tau, at("1", &["b"], 7))]);
    }

    #[test]
    fn committed_endpoint_only_outputs() {
        assert_eq!(sync_endpoint_steps(&at("1", &["b"], 7)), alloc::vec![(StepLabel::Out(Action::new("b")), at("1", &[], 7))]);
        assert!(sync_endpoint_steps(&at("?b{t>=5}", &[], 3)).is_empty());
    }

    #[test]
    fn sync_delay_examples() {
        assert!(sync_endpoint_delay(&at("?b{t>=5}", &[], 0), int(7)).is_some());
        assert!(sync_endpoint_delay(&at("1", &["a"], 0), int(1)).is_none());
        assert!(sync_endpoint_delay(&at("!b{t>=2} (+) !c{t<=1}", &[], 0), int(100)).is_some());
    }

    #[test]
    fn async_commits_append() {
        let c0 = at("!a{t<=2}.!b{t<=3}", &[], 0);
        let (_, c1) = async_endpoint_steps(&c0).remove(0);
        assert_eq!(c1, at("!b{t<=3}", &["a"], 0));
        let steps = async_endpoint_steps(&c1);
        assert!(steps.contains(&(StepLabel::Tau, at("1", &["a", "b"], 0))));
        let tail = async_endpoint_steps(&at("1", &["a", "b"], 0));
        assert_eq!(tail, alloc::vec![(StepLabel::Out(Action::new("a")), at("1", &["b"], 0))]);
        assert!(!async_endpoint_steps(&at("?a{t>=4}.?b{t>=5}", &[], 4)).is_empty());
    }

    #[test]
    fn async_delay_examples() {
        assert!(async_endpoint_delay(&at("1", &["a", "b"], 0), int(4)).is_some());
        assert!(async_endpoint_delay(&at("!b{t<=3}", &["a"], 0), int(5)).is_none());
        assert!(async_endpoint_delay(&at("1", &[], 0), int(0)).is_none());
    }

    #[test]
    fn rdy_windows() {
        let nu = ClockValuation::from_pairs([(Clock::new("t"), int(0))]);
        let p = parse_tst("!a{t<=2} (+) !b{t>=2 && t<=3}").unwrap();
        assert_eq!(rdy_window(&p, &nu), DelayInterval::up_to(int(3), true));
        let r = parse_tst("rec X . !a{t<=2}.X").unwrap();
        assert_eq!(rdy_window(&r, &nu), DelayInterval::up_to(int(2), true));
        assert_eq!(rdy_window(&parse_tst("?x").unwrap(), &nu), DelayInterval::Unbounded);
    }
}
