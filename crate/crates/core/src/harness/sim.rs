use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::compliance::is_deadlock;
use crate::rational::{frac, int, parse_rational, Rational};
use crate::semantics::{
    allowed_delays, apply_move, is_success, replay_moves, system_steps, tau_window, Mode, Move, ReplayError,
    SystemConfig, Trace,
};
use crate::time::DelayInterval;

/// How a random scheduler picks a delay inside the allowed interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DelayPolicy {
    Midpoint,
    /// Interval endpoints, or a quarter unit inside an open one.
    Boundary,
    /// A uniformly drawn sixteenth of the interval.
    Uniform,
}

impl DelayPolicy {
    pub fn name(self) -> &'static str {
        match self {
            DelayPolicy::Midpoint => "midpoint",
            DelayPolicy::Boundary => "boundary",
            DelayPolicy::Uniform => "uniform",
        }
    }
}

impl FromStr for DelayPolicy {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "midpoint" => Ok(DelayPolicy::Midpoint),
            "boundary" => Ok(DelayPolicy::Boundary),
            "uniform" => Ok(DelayPolicy::Uniform),
            _ => Err(()),
        }
    }
}

/// One entry of a script: either any `τ`, or an exact move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScriptStep {
    Tau,
    Exact(Move),
}

impl fmt::Display for ScriptStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScriptStep::Tau => f.write_str("τ"),
            ScriptStep::Exact(m) => write!(f, "{}", m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad script entry `{0}`")]
pub struct ScriptParseError(pub alloc::string::String);

/// Parses a comma separated script such as `7,τ,tau,1/2`.
pub fn parse_script(text: &str) -> Result<Vec<ScriptStep>, ScriptParseError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| match s {
            "τ" | "tau" | "t" => Ok(ScriptStep::Tau),
            _ => parse_rational(s)
                .filter(|d| *d > Rational::zero())
                .map(|d| ScriptStep::Exact(Move::Delay(d)))
                .ok_or_else(|| ScriptParseError(s.into())),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scheduler {
    SeededRandom { seed: u64, policy: DelayPolicy },
    Scripted(Vec<ScriptStep>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Success,
    Deadlock,
    /// The step budget ran out, or the script ended first.
    Budget,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Success => "success",
            Status::Deadlock => "deadlock",
            Status::Budget => "budget",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub trace: Trace,
    pub end: SystemConfig,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimulateError {
    #[error("the synchronous relation needs queues of at most one message")]
    NotSynchronous,
    #[error("script step {position} is not enabled")]
    NotEnabled { position: usize },
}

fn status(s: &SystemConfig, mode: Mode) -> Option<Status> {
    if is_success(s) {
        Some(Status::Success)
    } else if is_deadlock(s, mode) {
        Some(Status::Deadlock)
    } else {
        None
    }
}

/// Runs `s` under `sched` until success, deadlock, or `max_steps` moves.
/// A scripted `τ` may match any `τ` step; the choices are searched so that
/// the rest of the script stays enabled.
pub fn simulate(s: &SystemConfig, sched: &Scheduler, mode: Mode, max_steps: usize) -> Result<Run, SimulateError> {
    if mode == Mode::Sync && !s.is_synchronous() {
        return Err(SimulateError::NotSynchronous);
    }
    match sched {
        Scheduler::SeededRandom { seed, policy } => Ok(random_run(s, *seed, *policy, mode, max_steps)),
        Scheduler::Scripted(script) => {
            let mut moves = Vec::new();
            let mut deepest = 0;
            let (end, status) = scripted(s, script, mode, max_steps, &mut moves, &mut deepest)
                .ok_or(SimulateError::NotEnabled { position: deepest })?;
            Ok(Run { trace: Trace { initial: s.clone(), moves }, end, status })
        }
    }
}

fn scripted(
    cur: &SystemConfig,
    script: &[ScriptStep],
    mode: Mode,
    budget: usize,
    moves: &mut Vec<Move>,
    deepest: &mut usize,
) -> Option<(SystemConfig, Status)> {
    let i = moves.len();
    if is_success(cur) {
        return Some((cur.clone(), Status::Success));
    }
    if i == script.len() || i >= budget {
        return Some((cur.clone(), status(cur, mode).unwrap_or(Status::Budget)));
    }
    *deepest = (*deepest).max(i);
    let options: Vec<(Move, SystemConfig)> = match &script[i] {
        ScriptStep::Exact(m) => apply_move(cur, mode, m).map(|c| (m.clone(), c)).into_iter().collect(),
        ScriptStep::Tau => system_steps(cur, mode),
    };
    for (m, next) in options {
        moves.push(m);
        if let Some(done) = scripted(&next, script, mode, budget, moves, deepest) {
            return Some(done);
        }
        moves.pop();
    }
    None
}

fn random_run(s: &SystemConfig, seed: u64, policy: DelayPolicy, mode: Mode, max_steps: usize) -> Run {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = s.clone();
    let mut moves = Vec::new();
    let status = loop {
        if let Some(st) = status(&cur, mode) {
            break st;
        }
        if moves.len() >= max_steps {
            break Status::Budget;
        }
        let mut taus = system_steps(&cur, mode);
        let delays = allowed_delays(&cur, mode);
        let pick = rng.gen_range(0..taus.len() + usize::from(!delays.is_empty()));
        let (m, next) = if pick < taus.len() {
            taus.swap_remove(pick)
        } else {
            let d = pick_delay(delays, horizon(&cur, mode), policy, &mut rng);
            let m = Move::Delay(d);
            let next = apply_move(&cur, mode, &m).expect("delay drawn from the allowed interval");
            (m, next)
        };
        moves.push(m);
        cur = next;
    };
    Run { trace: Trace { initial: s.clone(), moves }, end: cur, status }
}

/// Stand-in upper end for an unbounded delay interval: one unit past the
/// last finite edge of the `τ` window.
fn horizon(s: &SystemConfig, mode: Mode) -> Rational {
    let w = tau_window(s, mode);
    let last = w
        .parts()
        .iter()
        .flat_map(|iv| [Some(iv.lo), iv.hi])
        .flatten()
        .max()
        .unwrap_or_else(Rational::zero);
    last + int(1)
}

fn pick_delay(delays: DelayInterval, horizon: Rational, policy: DelayPolicy, rng: &mut ChaCha8Rng) -> Rational {
    let (b, inclusive) = match delays {
        DelayInterval::UpTo { bound, inclusive } => (bound, inclusive),
        _ => (horizon, true),
    };
    let snap = |x: Rational| snap_to_grid(x, b, inclusive);
    match policy {
        DelayPolicy::Midpoint => snap(b / int(2)),
        DelayPolicy::Boundary => {
            let step = snap(frac(1, 4).min(b / int(2)));
            if rng.gen_bool(0.5) {
                step
            } else if inclusive {
                b
            } else {
                snap(b - step)
            }
        }
        DelayPolicy::Uniform => {
            let k = if inclusive { rng.gen_range(1..=16) } else { rng.gen_range(1..16) };
            snap(b * frac(k, 16))
        }
    }
}

/// Nearest multiple of 1/16 to `x` inside `(0, b]` (or `(0, b)`), or `x`
/// itself when there is none. Keeps long runs from piling up denominators.
fn snap_to_grid(x: Rational, b: Rational, inclusive: bool) -> Rational {
    let scaled = b * int(16);
    let mut top = scaled.floor().to_integer();
    if !inclusive && scaled.is_integer() {
        top -= 1;
    }
    if top < 1 {
        return x;
    }
    let k = (x * int(16)).round().to_integer().clamp(1, top);
    frac(k, 16)
}

/// A few representative delays of `delays`: both ends (nudged inside when
/// open), the midpoint, and `horizon` when unbounded.
pub fn sample_delays(delays: DelayInterval, horizon: Rational) -> Vec<Rational> {
    let (b, inclusive) = match delays {
        DelayInterval::Empty => return Vec::new(),
        DelayInterval::UpTo { bound, inclusive } => (bound, inclusive),
        DelayInterval::Unbounded => (horizon.max(int(1)), true),
    };
    let step = frac(1, 4).min(b / int(2));
    let mut out = alloc::vec![step, b / int(2), if inclusive { b } else { b - step }];
    out.sort();
    out.dedup();
    out
}

/// Accepts `t` iff every move is enabled in order from its initial
/// configuration; returns the final configuration.
pub fn replay(t: &Trace, mode: Mode) -> Result<SystemConfig, ReplayError> {
    replay_moves(&t.initial, mode, &t.moves)
}
