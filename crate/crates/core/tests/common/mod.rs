#![allow(dead_code)]

use proptest::prelude::*;
use tstkit_core::rational::{frac, Rational};
use tstkit_core::time::{Clock, ClockValuation, CmpOp, Guard, Owner, Universe};

pub const CLOCKS: [&str; 2] = ["t", "u"];

pub fn universe() -> Universe {
    let clocks: Vec<Clock> = CLOCKS.iter().map(|c| Clock::new(*c)).collect();
    Universe::of_owner(Owner::Left, clocks.iter())
}

pub fn op() -> impl Strategy<Value = CmpOp> {
    prop_oneof![Just(CmpOp::Lt), Just(CmpOp::Le), Just(CmpOp::Eq), Just(CmpOp::Ge), Just(CmpOp::Gt)]
}

fn clock() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just(CLOCKS[0]), Just(CLOCKS[1])]
}

fn atom() -> impl Strategy<Value = Guard> {
    prop_oneof![
        4 => (clock(), op(), 0u32..=3).prop_map(|(x, o, c)| Guard::cmp(x, o, c)),
        1 => (op(), 0u32..=2).prop_map(|(o, c)| Guard::diag(CLOCKS[0], CLOCKS[1], o, c)),
        1 => (op(), 0u32..=2).prop_map(|(o, c)| Guard::diag(CLOCKS[1], CLOCKS[0], o, c)),
        1 => Just(Guard::True),
    ]
}

/// Guards over `t` and `u` with negation and conjunction.
pub fn guard() -> impl Strategy<Value = Guard> {
    atom().prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Guard::negate),
            (inner.clone(), inner).prop_map(|(a, b)| Guard::and(a, b)),
        ]
    })
}

/// Quarter-grid value in `[0, 5]`.
pub fn grid_value() -> impl Strategy<Value = Rational> {
    (0i64..=20).prop_map(|k| frac(k, 4))
}

pub fn valuation() -> impl Strategy<Value = ClockValuation> {
    (grid_value(), grid_value()).prop_map(|(a, b)| {
        ClockValuation::from_pairs([(Clock::new(CLOCKS[0]), a), (Clock::new(CLOCKS[1]), b)])
    })
}

/// Every quarter-grid valuation in `[0, top]^2`.
pub fn grid(top: i64) -> Vec<ClockValuation> {
    let mut out = Vec::new();
    for a in 0..=4 * top {
        for b in 0..=4 * top {
            out.push(ClockValuation::from_pairs([
                (Clock::new(CLOCKS[0]), frac(a, 4)),
                (Clock::new(CLOCKS[1]), frac(b, 4)),
            ]));
        }
    }
    out
}
