use alloc::vec::Vec;
use core::fmt;

use crate::lang::{clocks, Queue, Tst};
use crate::time::{ClockValuation, Owner};

use super::system::Move;

/// One of the two endpoints of a binary system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    /// Clock namespace of this endpoint.
    pub fn owner(self) -> Owner {
        match self {
            Side::Left => Owner::Left,
            Side::Right => Owner::Right,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// `(p, ρ, ν)`: a term, its output queue and its clocks.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EndpointConfig {
    pub term: Tst,
    pub queue: Queue,
    pub valuation: ClockValuation,
}

impl EndpointConfig {
    /// `(p, ∅, ν₀)` with every clock of `p` at zero.
    pub fn initial(term: Tst) -> Self {
        let valuation = ClockValuation::zero(&clocks(&term));
        EndpointConfig { term, queue: Queue::new(), valuation }
    }

    pub fn new(term: Tst, queue: Queue, valuation: ClockValuation) -> Self {
        EndpointConfig { term, queue, valuation }
    }

    /// Does the valuation cover every clock the term mentions?
    pub fn is_total(&self) -> bool {
        clocks(&self.term).iter().all(|c| self.valuation.get(c).is_some())
    }
}

impl fmt::Display for EndpointConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, ", self.term)?;
        if self.queue.is_empty() {
            f.write_str("∅")?;
        } else {
            for (i, a) in self.queue.iter().enumerate() {
                if i > 0 {
                    f.write_str(";")?;
                }
                write!(f, "{}", a)?;
            }
        }
        write!(f, ", {})", self.valuation)
    }
}

/// `(p, ρ, ν) | (q, σ, η)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SystemConfig {
    pub left: EndpointConfig,
    pub right: EndpointConfig,
}

impl SystemConfig {
    pub fn new(left: EndpointConfig, right: EndpointConfig) -> Self {
        SystemConfig { left, right }
    }

    /// Both endpoints at `(·, ∅, ν₀)`.
    pub fn initial(p: Tst, q: Tst) -> Self {
        SystemConfig::new(EndpointConfig::initial(p), EndpointConfig::initial(q))
    }

    pub fn side(&self, side: Side) -> &EndpointConfig {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn side_mut(&mut self, side: Side) -> &mut EndpointConfig {
        match side {
            Side::Left => &mut self.left,
            Side::Right => &mut self.right,
        }
    }

    /// Queues hold at most one message.
    pub fn is_synchronous(&self) -> bool {
        self.left.queue.len() <= 1 && self.right.queue.len() <= 1
    }

    pub fn queues_empty(&self) -> bool {
        self.left.queue.is_empty() && self.right.queue.is_empty()
    }
}

impl fmt::Display for SystemConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.left, self.right)
    }
}

/// A run: the initial configuration and the moves taken from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub initial: SystemConfig,
    pub moves: Vec<Move>,
}

impl Trace {
    pub fn new(initial: SystemConfig) -> Self {
        Trace { initial, moves: Vec::new() }
    }
}
