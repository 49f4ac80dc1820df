//! Clock valuations, guards and zones.
//!
//! Valuation sets are represented as [`ZoneSet`]s: finite unions of
//! canonical difference-bound matrices over a [`Universe`] of clocks. All
//! bounds are exact rationals; guard constants are naturals.

mod clock;
mod dbm;
mod guard;
mod interval;
mod zone;

pub use clock::{Clock, ClockId, ClockValuation, Owner, ResetSet, Universe};
pub use dbm::{Bound, Dbm};
pub use guard::{guard_sat, guard_window, guard_zones, CmpOp, Guard};
pub use interval::{DelayInterval, Interval, IntervalSet};
pub use zone::{urgent_elapse, urgent_elapse_within, urgent_pred, zs_boolean, BoolMode, MaxConstMap, ZoneSet};

use alloc::string::String;

/// Errors raised by the time algebra.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TimeError {
    #[error("unbound clock `{0}`")]
    UnboundClock(String),
    #[error("clock universes do not match ({left} vs {right} clocks)")]
    UniverseMismatch { left: usize, right: usize },
    #[error("negative delay {0}")]
    NegativeDelay(String),
    #[error("missing operand for binary zone operation")]
    MissingOperand,
}
