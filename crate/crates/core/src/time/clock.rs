use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use super::TimeError;
use crate::rational::{format_rational, Rational};

/// A clock name as written in a session type.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clock(pub String);

impl Clock {
    pub fn new(name: impl Into<String>) -> Self {
        Clock(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Clock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Clock {
    fn from(s: &str) -> Self {
        Clock::new(s)
    }
}

/// Which party owns a clock. The two endpoints have disjoint clock sets;
/// `Observer` is a never-reset clock measuring global time, used by the
/// symbolic engine to recover delays from zone points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Owner {
    Left,
    Right,
    Observer,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClockId {
    pub owner: Owner,
    pub clock: Clock,
}

impl ClockId {
    pub fn new(owner: Owner, clock: impl Into<String>) -> Self {
        ClockId { owner, clock: Clock::new(clock) }
    }
}

impl fmt::Display for ClockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.owner {
            Owner::Left => write!(f, "L.{}", self.clock),
            Owner::Right => write!(f, "R.{}", self.clock),
            Owner::Observer => write!(f, "@{}", self.clock),
        }
    }
}

/// Clocks reset by a branch.
pub type ResetSet = BTreeSet<Clock>;

/// Values of one endpoint's clocks.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClockValuation {
    values: BTreeMap<Clock, Rational>,
}

impl ClockValuation {
    /// All the given clocks at zero (the initial valuation).
    pub fn zero<'a>(clocks: impl IntoIterator<Item = &'a Clock>) -> Self {
        ClockValuation {
            values: clocks.into_iter().map(|c| (c.clone(), Rational::zero())).collect(),
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Clock, Rational)>) -> Self {
        ClockValuation { values: pairs.into_iter().collect() }
    }

    pub fn get(&self, clock: &Clock) -> Option<Rational> {
        self.values.get(clock).copied()
    }

    pub fn value(&self, clock: &Clock) -> Result<Rational, TimeError> {
        self.get(clock).ok_or_else(|| TimeError::UnboundClock(clock.0.clone()))
    }

    pub fn set(&mut self, clock: Clock, value: Rational) {
        self.values.insert(clock, value);
    }

    pub fn clocks(&self) -> impl Iterator<Item = &Clock> {
        self.values.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Clock, &Rational)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `ν + δ`.
    pub fn delayed(&self, delta: Rational) -> Self {
        ClockValuation {
            values: self.values.iter().map(|(c, v)| (c.clone(), *v + delta)).collect(),
        }
    }

    /// `ν[R]`: clocks in `resets` go to zero, the others are unchanged.
    pub fn reset(&self, resets: &ResetSet) -> Self {
        let mut out = self.clone();
        for clock in resets {
            if let Some(v) = out.values.get_mut(clock) {
                *v = Rational::zero();
            }
        }
        out
    }

    /// Delay by `delta` (if given) and then reset `resets` (if given).
    pub fn update(&self, delta: Option<Rational>, resets: Option<&ResetSet>) -> Result<Self, TimeError> {
        let mut out = match delta {
            Some(d) if d < Rational::zero() => return Err(TimeError::NegativeDelay(format_rational(&d))),
            Some(d) => self.delayed(d),
            None => self.clone(),
        };
        if let Some(r) = resets {
            for clock in r {
                if !out.values.contains_key(clock) {
                    return Err(TimeError::UnboundClock(clock.0.clone()));
                }
            }
            out = out.reset(r);
        }
        Ok(out)
    }
}

impl fmt::Display for ClockValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (c, v)) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}={}", c, v)?;
        }
        f.write_str("}")
    }
}

/// The ordered set of clocks a zone ranges over. Clock `i` of the universe
/// sits at matrix index `i + 1`; index 0 is the constant-zero reference.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Universe {
    clocks: Vec<ClockId>,
}

impl Universe {
    pub fn new(clocks: impl IntoIterator<Item = ClockId>) -> Self {
        let mut clocks: Vec<ClockId> = clocks.into_iter().collect();
        clocks.sort();
        clocks.dedup();
        Universe { clocks }
    }

    /// Universe of a single owner's clocks.
    pub fn of_owner<'a>(owner: Owner, clocks: impl IntoIterator<Item = &'a Clock>) -> Self {
        Universe::new(clocks.into_iter().map(|c| ClockId { owner, clock: c.clone() }))
    }

    pub fn clocks(&self) -> &[ClockId] {
        &self.clocks
    }

    pub fn len(&self) -> usize {
        self.clocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clocks.is_empty()
    }

    /// Matrix dimension (clocks plus the reference clock).
    pub fn dim(&self) -> usize {
        self.clocks.len() + 1
    }

    /// Matrix index of a clock.
    pub fn index(&self, owner: Owner, clock: &Clock) -> Option<usize> {
        self.clocks
            .binary_search_by(|id| (id.owner, &id.clock).cmp(&(owner, clock)))
            .ok()
            .map(|i| i + 1)
    }

    pub fn index_of(&self, owner: Owner, clock: &Clock) -> Result<usize, TimeError> {
        self.index(owner, clock).ok_or_else(|| TimeError::UnboundClock(clock.0.clone()))
    }

    /// Builds a point (indexed by clock position) from per-owner valuations.
    pub fn point(&self, lookup: impl Fn(&ClockId) -> Option<Rational>) -> Result<Vec<Rational>, TimeError> {
        self.clocks
            .iter()
            .map(|id| lookup(id).ok_or_else(|| TimeError::UnboundClock(id.clock.0.clone())))
            .collect()
    }

    /// Point of a single owner's valuation.
    pub fn point_of(&self, owner: Owner, valuation: &ClockValuation) -> Result<Vec<Rational>, TimeError> {
        self.point(|id| if id.owner == owner { valuation.get(&id.clock) } else { None })
    }

    /// Projects a point back to one owner's valuation.
    pub fn valuation_of(&self, owner: Owner, point: &[Rational]) -> ClockValuation {
        ClockValuation::from_pairs(
            self.clocks
                .iter()
                .zip(point)
                .filter(|(id, _)| id.owner == owner)
                .map(|(id, v)| (id.clock.clone(), *v)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn t() -> Clock {
        Clock::new("t")
    }

    #[test]
    fn delay_from_zero() {
        let nu = ClockValuation::zero([&t(), &Clock::new("u")]);
        let moved = nu.update(Some(int(7)), None).unwrap();
        assert!(moved.iter().all(|(_, v)| *v == int(7)));
    }

    #[test]
    fn empty_reset_is_identity() {
        let nu = ClockValuation::from_pairs([(t(), int(2))]);
        assert_eq!(nu.update(None, Some(&ResetSet::new())).unwrap(), nu);
    }

    #[test]
    fn reset_zeroes_listed_clocks_only() {
        let u = Clock::new("u");
        let nu = ClockValuation::from_pairs([(t(), int(5)), (u.clone(), int(3))]);
        let r: ResetSet = [t()].into_iter().collect();
        let out = nu.update(None, Some(&r)).unwrap();
        assert_eq!(out.get(&t()), Some(int(0)));
        assert_eq!(out.get(&u), Some(int(3)));
    }

    #[test]
    fn negative_delay_rejected() {
        let nu = ClockValuation::zero([&t()]);
        assert!(matches!(nu.update(Some(int(-1)), None), Err(TimeError::NegativeDelay(_))));
    }

    #[test]
    fn universe_indexing_is_sorted_by_owner() {
        let u = Universe::new([
            ClockId::new(Owner::Right, "t"),
            ClockId::new(Owner::Left, "t"),
            ClockId::new(Owner::Observer, "now"),
        ]);
        assert_eq!(u.index(Owner::Left, &t()), Some(1));
        assert_eq!(u.index(Owner::Right, &t()), Some(2));
        assert_eq!(u.index(Owner::Observer, &Clock::new("now")), Some(3));
        assert_eq!(u.dim(), 4);
    }
}
