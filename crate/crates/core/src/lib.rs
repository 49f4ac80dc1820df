//! Timed session types: exact zone algebra, the synchronous and the
//! input-urgent asynchronous semantics, a symbolic synchronous compliance
//! checker, bounded asynchronous deadlock search, and the remainder /
//! r-compliance machinery used to relate the two.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the CLI and
//! parallel corpus runs live in the companion `tstkit` crate.
//!
//! ```
//! use tstkit_core::lang::parse_tst;
//! use tstkit_core::compliance::{check_sync_compliance, Verdict};
//!
//! let p = parse_tst("?a{t<=3}.!b{t<=3}").unwrap();
//! let q = parse_tst("!a{t<=2}.?b{t<=3}").unwrap();
//! assert!(matches!(check_sync_compliance(&p, &q).unwrap(), Verdict::Compliant));
//! ```
#![no_std]

extern crate alloc;

pub mod compliance;
pub mod harness;
pub mod lang;
pub mod rational;
pub mod semantics;
pub mod time;

pub use rational::Rational;
