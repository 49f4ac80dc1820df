//! Sets of delays on the half-line `[0, ∞)`.

use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::rational::Rational;

/// A non-empty interval of delays with exact endpoints; `hi = None` is `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub lo_closed: bool,
    pub hi: Option<Rational>,
    pub hi_closed: bool,
}

impl Interval {
    /// Returns `None` when the described interval is empty.
    pub fn new(lo: Rational, lo_closed: bool, hi: Option<Rational>, hi_closed: bool) -> Option<Interval> {
        let (lo, lo_closed) = if lo < Rational::zero() { (Rational::zero(), true) } else { (lo, lo_closed) };
        match hi {
            Some(h) if h < lo => None,
            Some(h) if h == lo && !(lo_closed && hi_closed) => None,
            _ => Some(Interval { lo, lo_closed, hi, hi_closed: hi.is_some() && hi_closed }),
        }
    }

    pub fn full() -> Interval {
        Interval { lo: Rational::zero(), lo_closed: true, hi: None, hi_closed: false }
    }

    pub fn point(at: Rational) -> Option<Interval> {
        Interval::new(at, true, Some(at), true)
    }

    pub fn contains(&self, x: Rational) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = match self.hi {
            None => true,
            Some(h) if self.hi_closed => x <= h,
            Some(h) => x < h,
        };
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = if self.lo > other.lo || (self.lo == other.lo && !self.lo_closed) {
            (self.lo, self.lo_closed)
        } else {
            (other.lo, other.lo_closed)
        };
        let (hi, hi_closed) = match (self.hi, other.hi) {
            (None, _) => (other.hi, other.hi_closed),
            (_, None) => (self.hi, self.hi_closed),
            (Some(a), Some(b)) if a < b || (a == b && !self.hi_closed) => (self.hi, self.hi_closed),
            _ => (other.hi, other.hi_closed),
        };
        Interval::new(lo, lo_closed, hi, hi_closed)
    }

    /// Do `self` and a later-starting `next` overlap or touch without a gap?
    fn joins(&self, next: &Interval) -> bool {
        match self.hi {
            None => true,
            Some(h) => next.lo < h || (next.lo == h && (self.hi_closed || next.lo_closed)),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo_closed { '[' } else { '(' };
        match self.hi {
            None => write!(f, "{}{}, ∞)", open, self.lo),
            Some(h) => write!(f, "{}{}, {}{}", open, self.lo, h, if self.hi_closed { ']' } else { ')' }),
        }
    }
}

/// A finite union of delay intervals, kept sorted, disjoint and merged.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> IntervalSet {
        IntervalSet { parts: Vec::new() }
    }

    pub fn full() -> IntervalSet {
        IntervalSet { parts: alloc::vec![Interval::full()] }
    }

    pub fn from_parts(parts: impl IntoIterator<Item = Interval>) -> IntervalSet {
        let mut parts: Vec<Interval> = parts.into_iter().collect();
        parts.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut merged: Vec<Interval> = Vec::with_capacity(parts.len());
        for next in parts {
            match merged.last_mut() {
                Some(cur) if cur.joins(&next) => {
                    match (cur.hi, next.hi) {
                        (None, _) => {}
                        (_, None) => {
                            cur.hi = None;
                            cur.hi_closed = false;
                        }
                        (Some(a), Some(b)) => {
                            if b > a {
                                cur.hi = Some(b);
                                cur.hi_closed = next.hi_closed;
                            } else if a == b {
                                cur.hi_closed |= next.hi_closed;
                            }
                        }
                    }
                }
                _ => merged.push(next),
            }
        }
        IntervalSet { parts: merged }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: Rational) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::from_parts(self.parts.iter().chain(&other.parts).copied())
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::from_parts(
            self.parts.iter().flat_map(|a| other.parts.iter().filter_map(move |b| a.intersect(b))),
        )
    }

    pub fn intersect_interval(&self, other: &Interval) -> IntervalSet {
        IntervalSet::from_parts(self.parts.iter().filter_map(|a| a.intersect(other)))
    }

    /// Complement within `[0, ∞)`.
    pub fn complement(&self) -> IntervalSet {
        let mut out = Vec::new();
        let mut cursor = Some((Rational::zero(), true));
        for p in &self.parts {
            let (start, start_closed) = match cursor {
                Some(c) => c,
                None => break,
            };
            if let Some(gap) = Interval::new(start, start_closed, Some(p.lo), !p.lo_closed) {
                out.push(gap);
            }
            cursor = p.hi.map(|h| (h, !p.hi_closed));
        }
        if let Some((start, closed)) = cursor {
            if let Some(tail) = Interval::new(start, closed, None, false) {
                out.push(tail);
            }
        }
        IntervalSet::from_parts(out)
    }

    /// Greatest lower bound.
    pub fn infimum(&self) -> Option<Rational> {
        self.parts.first().map(|p| p.lo)
    }

    /// Least upper bound: `None` when empty, `Some(None)` when unbounded.
    pub fn supremum(&self) -> Option<(Option<Rational>, bool)> {
        self.parts.last().map(|p| (p.hi, p.hi_closed))
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("∅");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "{}", p)?;
        }
        Ok(())
    }
}

/// The positive delays a configuration may take: `∅`, `(0, b)`, `(0, b]`
/// or `(0, ∞)`. Permitted delays are always down-closed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DelayInterval {
    Empty,
    UpTo { bound: Rational, inclusive: bool },
    Unbounded,
}

impl DelayInterval {
    pub fn up_to(bound: Rational, inclusive: bool) -> DelayInterval {
        if bound > Rational::zero() {
            DelayInterval::UpTo { bound, inclusive }
        } else {
            DelayInterval::Empty
        }
    }

    /// Positive delays lying below some point of `window`.
    pub fn down_closure(window: &IntervalSet) -> DelayInterval {
        match window.supremum() {
            None => DelayInterval::Empty,
            Some((None, _)) => DelayInterval::Unbounded,
            Some((Some(b), closed)) => DelayInterval::up_to(b, closed),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, DelayInterval::Empty)
    }

    pub fn contains(&self, delta: Rational) -> bool {
        if delta <= Rational::zero() {
            return false;
        }
        match self {
            DelayInterval::Empty => false,
            DelayInterval::Unbounded => true,
            DelayInterval::UpTo { bound, inclusive: true } => delta <= *bound,
            DelayInterval::UpTo { bound, inclusive: false } => delta < *bound,
        }
    }

    pub fn meet(&self, other: &DelayInterval) -> DelayInterval {
        use DelayInterval::*;
        match (*self, *other) {
            (Empty, _) | (_, Empty) => Empty,
            (Unbounded, x) | (x, Unbounded) => x,
            (UpTo { bound: a, inclusive: i }, UpTo { bound: b, inclusive: j }) => {
                if a < b || (a == b && !i) {
                    UpTo { bound: a, inclusive: i }
                } else {
                    UpTo { bound: b, inclusive: j }
                }
            }
        }
    }

    /// Cut the interval at `limit`, keeping `limit` itself.
    pub fn truncate_inclusive(&self, limit: Rational) -> DelayInterval {
        self.meet(&DelayInterval::up_to(limit, true))
    }

    /// As a set of delays (without the origin).
    pub fn to_interval(&self) -> Option<Interval> {
        match *self {
            DelayInterval::Empty => None,
            DelayInterval::Unbounded => Interval::new(Rational::zero(), false, None, false),
            DelayInterval::UpTo { bound, inclusive } => Interval::new(Rational::zero(), false, Some(bound), inclusive),
        }
    }

    pub fn upper(&self) -> Option<Rational> {
        match self {
            DelayInterval::UpTo { bound, .. } => Some(*bound),
            _ => None,
        }
    }
}

impl fmt::Display for DelayInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DelayInterval::Empty => f.write_str("∅"),
            DelayInterval::Unbounded => f.write_str("(0, ∞)"),
            DelayInterval::UpTo { bound, inclusive } => {
                write!(f, "(0, {}{}", bound, if *inclusive { ']' } else { ')' })
            }
        }
    }
}
