//! Timed session types: syntax, well-formedness, unfolding.

mod ast;
mod file;
mod graph;
mod ops;
mod parse;

pub use ast::{Action, Branch, BranchLabel, Polarity, Queue, Tst, Var};
pub use file::{parse_tst_file, Definition};
pub use graph::{TermGraph, TermId};
pub use ops::{clocks, max_constant, reachable_terms, strict_input_guards, unfold, validate, ValidationError};
pub use parse::{parse_guard, parse_tst, ParseError, ParseErrorKind};

/// Renders a term in the concrete syntax accepted by [`parse_tst`].
pub fn render_tst(p: &Tst) -> alloc::string::String {
    alloc::format!("{}", p)
}
