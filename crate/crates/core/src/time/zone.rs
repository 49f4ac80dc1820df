//! Finite unions of zones.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::clock::Clock;
use super::dbm::{Bound, Dbm};
use super::interval::IntervalSet;
use super::TimeError;
use crate::rational::Rational;

/// Largest constant each clock is compared against.
pub type MaxConstMap = BTreeMap<Clock, u32>;

/// A set of valuations: the union of its member zones. Members are
/// non-empty and none is included in another.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZoneSet {
    dim: usize,
    members: Vec<Dbm>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolMode {
    Meet,
    Join,
    Negate,
}

impl ZoneSet {
    /// The empty set over matrix dimension `dim`.
    pub fn empty(dim: usize) -> ZoneSet {
        ZoneSet { dim, members: Vec::new() }
    }

    /// All non-negative valuations.
    pub fn universal(dim: usize) -> ZoneSet {
        ZoneSet::from_dbm(Dbm::universal(dim - 1))
    }

    /// The valuation with every clock at zero.
    pub fn zero(dim: usize) -> ZoneSet {
        ZoneSet::from_dbm(Dbm::zero(dim - 1))
    }

    pub fn from_point(point: &[Rational]) -> ZoneSet {
        ZoneSet::from_dbm(Dbm::from_point(point))
    }

    pub fn from_dbm(d: Dbm) -> ZoneSet {
        let mut z = ZoneSet::empty(d.dim());
        z.push(d);
        z
    }

    pub fn from_members(dim: usize, members: impl IntoIterator<Item = Dbm>) -> ZoneSet {
        let mut z = ZoneSet::empty(dim);
        for d in members {
            z.push(d);
        }
        z
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn members(&self) -> &[Dbm] {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Adds a zone, dropping whichever side is subsumed.
    pub fn push(&mut self, d: Dbm) {
        debug_assert_eq!(d.dim(), self.dim);
        if d.is_empty() || self.members.iter().any(|m| m.includes(&d)) {
            return;
        }
        self.members.retain(|m| !d.includes(m));
        self.members.push(d);
    }

    fn map(&self, f: impl Fn(&Dbm) -> Dbm) -> ZoneSet {
        ZoneSet::from_members(self.dim, self.members.iter().map(f))
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        self.members.iter().any(|m| m.contains(point))
    }

    pub fn meet(&self, other: &ZoneSet) -> ZoneSet {
        let mut out = ZoneSet::empty(self.dim);
        for a in &self.members {
            for b in &other.members {
                out.push(a.intersect(b));
            }
        }
        out
    }

    pub fn meet_dbm(&self, d: &Dbm) -> ZoneSet {
        self.map(|m| m.intersect(d))
    }

    pub fn join(&self, other: &ZoneSet) -> ZoneSet {
        let mut out = self.clone();
        for b in &other.members {
            out.push(b.clone());
        }
        out
    }

    pub fn complement(&self) -> ZoneSet {
        ZoneSet::universal(self.dim).subtract(self)
    }

    /// `self ∖ other`.
    pub fn subtract(&self, other: &ZoneSet) -> ZoneSet {
        let mut pieces = self.members.clone();
        for b in &other.members {
            let mut complement = None;
            let mut next = Vec::with_capacity(pieces.len());
            for p in pieces {
                if p.intersect(b).is_empty() {
                    next.push(p);
                    continue;
                }
                let c = complement.get_or_insert_with(|| b.complement());
                next.extend(c.iter().map(|c| p.intersect(c)).filter(|d| !d.is_empty()));
            }
            pieces = next;
        }
        ZoneSet::from_members(self.dim, pieces)
    }

    /// `other ⊆ self`.
    pub fn includes(&self, other: &ZoneSet) -> bool {
        other.members.iter().all(|b| self.members.iter().any(|a| a.includes(b)))
            || other.subtract(self).is_empty()
    }

    /// Same denotation.
    pub fn same_set(&self, other: &ZoneSet) -> bool {
        self.includes(other) && other.includes(self)
    }

    /// `{ν + δ : ν ∈ Z, δ ≥ 0}`, or `δ > 0` when `strict`.
    pub fn future(&self, strict: bool) -> ZoneSet {
        if strict {
            self.map(Dbm::up_strict)
        } else {
            self.map(Dbm::up)
        }
    }

    /// `{ν : ∃δ ≥ 0. ν + δ ∈ Z}`.
    pub fn past(&self) -> ZoneSet {
        self.map(Dbm::down)
    }

    /// `{ν : ∃δ > 0. ν + δ ∈ Z}`.
    pub fn past_strict(&self) -> ZoneSet {
        self.map(Dbm::down_strict)
    }

    /// Resets the clocks at the given matrix indices.
    pub fn reset(&self, clocks: &[usize]) -> ZoneSet {
        self.map(|m| clocks.iter().fold(m.clone(), |d, x| d.reset(*x)))
    }

    /// Frees the clocks at the given matrix indices.
    pub fn free(&self, clocks: &[usize]) -> ZoneSet {
        self.map(|m| clocks.iter().fold(m.clone(), |d, x| d.free(*x)))
    }

    /// Maximal-constant extrapolation, `max` indexed by matrix index.
    pub fn extrapolate(&self, max: &[u32]) -> ZoneSet {
        self.map(|m| m.extrapolate(max))
    }

    /// Extrapolation that stays exact for the given diagonal constraints:
    /// each zone is split by every constraint, extrapolated, and cut back to
    /// its side of the split.
    pub fn extrapolate_split(&self, max: &[u32], diagonals: &[(usize, usize, Bound)]) -> ZoneSet {
        if diagonals.is_empty() {
            return self.extrapolate(max);
        }
        let mut out = ZoneSet::empty(self.dim);
        for m in &self.members {
            let mut parts: Vec<(Dbm, Dbm)> = vec![(m.clone(), Dbm::universal(self.dim - 1))];
            for &(i, j, b) in diagonals {
                let mut next = Vec::with_capacity(parts.len() * 2);
                for (zone, sig) in parts {
                    let mut inside = zone.clone();
                    inside.constrain(i, j, b);
                    let mut outside = zone;
                    outside.constrain(j, i, b.negate());
                    let mut sig_in = sig.clone();
                    sig_in.constrain(i, j, b);
                    let mut sig_out = sig;
                    sig_out.constrain(j, i, b.negate());
                    if !inside.is_empty() {
                        next.push((inside, sig_in));
                    }
                    if !outside.is_empty() {
                        next.push((outside, sig_out));
                    }
                }
                parts = next;
            }
            for (zone, sig) in parts {
                out.push(zone.extrapolate(max).intersect(&sig));
            }
        }
        out
    }

    /// Delays `δ ≥ 0` that move `point` into the set.
    pub fn delay_window(&self, point: &[Rational]) -> IntervalSet {
        IntervalSet::from_parts(self.members.iter().filter_map(|m| m.delay_window(point)))
    }

    /// A deterministic member point.
    pub fn pick_point(&self) -> Option<Vec<Rational>> {
        self.members.first().and_then(Dbm::pick_point)
    }

    fn check_dim(&self, other: &ZoneSet) -> Result<(), TimeError> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(TimeError::UniverseMismatch { left: self.dim - 1, right: other.dim - 1 })
        }
    }
}

/// Boolean operations with universe checking.
pub fn zs_boolean(mode: BoolMode, a: &ZoneSet, b: Option<&ZoneSet>) -> Result<ZoneSet, TimeError> {
    match (mode, b) {
        (BoolMode::Negate, _) => Ok(a.complement()),
        (_, None) => Err(TimeError::MissingOperand),
        (BoolMode::Meet, Some(b)) => a.check_dim(b).map(|_| a.meet(b)),
        (BoolMode::Join, Some(b)) => a.check_dim(b).map(|_| a.join(b)),
    }
}

/// Input-urgent time elapse: `Z` together with every `ν + δ` (`ν ∈ Z`,
/// `δ > 0`) such that no `ν + δ'` with `δ' < δ` lies in `S`. The first
/// instant of `S` on a time line is itself reachable.
pub fn urgent_elapse(z: &ZoneSet, s: &ZoneSet) -> Result<ZoneSet, TimeError> {
    z.check_dim(s)?;
    Ok(urgent_elapse_within(z, s, &ZoneSet::universal(z.dim)))
}

/// [`urgent_elapse`] where every delay must also end inside the
/// past-closed set `r`.
pub fn urgent_elapse_within(z: &ZoneSet, s: &ZoneSet, r: &ZoneSet) -> ZoneSet {
    let mut out = z.clone();
    if r.is_empty() {
        return out;
    }
    for p in z.subtract(s).members() {
        let p = ZoneSet::from_dbm(p.clone());
        let after = p.future(false);
        let beyond = after.subtract(&p.past_strict());
        let blocked = s.meet(&beyond).future(true);
        for d in after.subtract(&blocked).meet(r).members() {
            out.push(d.clone());
        }
    }
    out
}

/// Valuations that reach `q` by a positive delay whose half-open path
/// `[ν, ν + δ)` avoids `s`. Exact when the members of `q` and `s` are
/// convex zones (they always are).
pub fn urgent_pred(q: &ZoneSet, s: &ZoneSet) -> ZoneSet {
    let mut out = ZoneSet::empty(q.dim);
    for qk in q.members() {
        let qk = ZoneSet::from_dbm(qk.clone());
        let mut acc = qk.past_strict();
        for sj in s.members() {
            let sj = ZoneSet::from_dbm(sj.clone());
            let clear = qk.past_strict().subtract(&sj.past());
            let before = qk.subtract(&sj.future(true)).past_strict();
            acc = acc.meet(&clear.join(&before));
            if acc.is_empty() {
                break;
            }
        }
        out = out.join(&acc);
    }
    out
}
