//! Concrete synchronous and input-urgent asynchronous semantics.
//!
//! Both relations share configurations `(p, ρ, ν) | (q, σ, η)`. Discrete
//! system steps are reported as [`Move`]s (which record who did what);
//! delays are reported as a [`DelayInterval`] of permitted amounts.

mod config;
mod endpoint;
mod system;

pub use config::{EndpointConfig, Side, SystemConfig, Trace};
pub use endpoint::{
    async_endpoint_delay, async_endpoint_steps, rdy, rdy_window, sync_endpoint_delay, sync_endpoint_steps,
    EndpointMove, Mode, StepLabel,
};
pub use system::{
    allowed_delays, apply_move, async_allowed_delays, async_system_steps, delta_sync, is_success, replay_moves,
    sync_allowed_delays, sync_instants, sync_system_steps, system_steps, tau_window, Move, ReplayError,
};
