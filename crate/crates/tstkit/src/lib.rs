//! File formats, corpus persistence, parallel corpus runs and the command
//! line for `tstkit-core`.

pub mod cli;
pub mod corpus;
pub mod format;
pub mod parallel;
pub mod report;

pub use tstkit_core as core;
