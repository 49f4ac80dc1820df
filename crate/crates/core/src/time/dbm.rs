//! Difference-bound matrices with exact rational bounds.
//!
//! Entry `(i, j)` bounds `x_i - x_j`; index 0 is the reference clock fixed
//! at zero. A `Dbm` is kept canonical (shortest-path closed) at all times,
//! and an empty zone is flagged rather than represented by a negative
//! cycle.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::Zero;

use super::interval::Interval;
use crate::rational::{half, int, Rational};

/// Upper bound on a clock difference: `(≤, c)`, `(<, c)` or `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bound {
    Finite { value: Rational, strict: bool },
    Infinity,
}

impl Bound {
    pub fn le(value: Rational) -> Bound {
        Bound::Finite { value, strict: false }
    }

    pub fn lt(value: Rational) -> Bound {
        Bound::Finite { value, strict: true }
    }

    pub fn le_zero() -> Bound {
        Bound::le(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Bound::Finite { .. })
    }

    pub fn value(&self) -> Option<Rational> {
        match self {
            Bound::Finite { value, .. } => Some(*value),
            Bound::Infinity => None,
        }
    }

    pub fn is_strict(&self) -> bool {
        matches!(self, Bound::Finite { strict: true, .. })
    }

    /// Bound of a path through two edges.
    pub fn plus(self, other: Bound) -> Bound {
        match (self, other) {
            (Bound::Finite { value: a, strict: s }, Bound::Finite { value: b, strict: t }) => {
                Bound::Finite { value: a + b, strict: s || t }
            }
            _ => Bound::Infinity,
        }
    }

    /// The bound on the transposed difference that describes the complement:
    /// `¬(x - y ≤ c)` is `y - x < -c`.
    pub fn negate(self) -> Bound {
        match self {
            Bound::Finite { value, strict } => Bound::Finite { value: -value, strict: !strict },
            Bound::Infinity => panic!("the complement of an unbounded constraint is empty"),
        }
    }

    /// Same bound, made strict.
    pub fn strict(self) -> Bound {
        match self {
            Bound::Finite { value, .. } => Bound::lt(value),
            Bound::Infinity => Bound::Infinity,
        }
    }

    /// Does a difference of `diff` satisfy this bound?
    pub fn admits(&self, diff: Rational) -> bool {
        match self {
            Bound::Finite { value, strict: true } => diff < *value,
            Bound::Finite { value, strict: false } => diff <= *value,
            Bound::Infinity => true,
        }
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Bound::Infinity, Bound::Infinity) => Ordering::Equal,
            (Bound::Infinity, _) => Ordering::Greater,
            (_, Bound::Infinity) => Ordering::Less,
            (Bound::Finite { value: a, strict: s }, Bound::Finite { value: b, strict: t }) => {
                // (<, c) is tighter than (≤, c)
                a.cmp(b).then_with(|| t.cmp(s))
            }
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A convex set of clock valuations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dbm {
    dim: usize,
    m: Vec<Bound>,
    empty: bool,
}

impl Dbm {
    /// All non-negative valuations over `clocks` clocks.
    pub fn universal(clocks: usize) -> Dbm {
        let dim = clocks + 1;
        let mut m = vec![Bound::Infinity; dim * dim];
        for i in 0..dim {
            m[i * dim + i] = Bound::le_zero();
            m[i] = Bound::le_zero();
        }
        Dbm { dim, m, empty: false }
    }

    /// The single valuation with every clock at zero.
    pub fn zero(clocks: usize) -> Dbm {
        let dim = clocks + 1;
        Dbm { dim, m: vec![Bound::le_zero(); dim * dim], empty: false }
    }

    /// The empty zone.
    pub fn empty(clocks: usize) -> Dbm {
        let mut d = Dbm::zero(clocks);
        d.mark_empty();
        d
    }

    /// The single valuation `point` (indexed by clock position).
    pub fn from_point(point: &[Rational]) -> Dbm {
        let dim = point.len() + 1;
        let value = |i: usize| if i == 0 { Rational::zero() } else { point[i - 1] };
        let mut m = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                m.push(Bound::le(value(i) - value(j)));
            }
        }
        let mut d = Dbm { dim, m, empty: false };
        if point.iter().any(|v| *v < Rational::zero()) {
            d.mark_empty();
        }
        d
    }

    /// Builds a zone from raw bounds and closes it.
    pub fn from_bounds(dim: usize, bounds: Vec<Bound>) -> Dbm {
        assert_eq!(bounds.len(), dim * dim, "bound matrix must be dim x dim");
        let mut d = Dbm { dim, m: bounds, empty: false };
        d.close();
        d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn clocks(&self) -> usize {
        self.dim - 1
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn get(&self, i: usize, j: usize) -> Bound {
        self.m[i * self.dim + j]
    }

    fn set(&mut self, i: usize, j: usize, b: Bound) {
        self.m[i * self.dim + j] = b;
    }

    fn mark_empty(&mut self) {
        self.empty = true;
        for b in self.m.iter_mut() {
            *b = Bound::lt(Rational::zero());
        }
    }

    /// Floyd-Warshall closure; flags emptiness on a negative cycle.
    pub fn close(&mut self) {
        if self.empty {
            return;
        }
        let n = self.dim;
        for k in 0..n {
            for i in 0..n {
                let ik = self.get(i, k);
                if !ik.is_finite() {
                    continue;
                }
                for j in 0..n {
                    let via = ik.plus(self.get(k, j));
                    if via < self.get(i, j) {
                        self.set(i, j, via);
                    }
                }
            }
            for i in 0..n {
                if self.get(i, i) < Bound::le_zero() {
                    self.mark_empty();
                    return;
                }
            }
        }
    }

    /// Closed copy.
    pub fn closed(mut self) -> Dbm {
        self.close();
        self
    }

    /// Adds `x_i - x_j ⊲ b`, keeping the matrix canonical.
    pub fn constrain(&mut self, i: usize, j: usize, b: Bound) {
        if self.empty || b >= self.get(i, j) {
            return;
        }
        if self.get(j, i).plus(b) < Bound::le_zero() {
            self.mark_empty();
            return;
        }
        self.set(i, j, b);
        let n = self.dim;
        for k in 0..n {
            let ki = self.get(k, i);
            if !ki.is_finite() {
                continue;
            }
            for l in 0..n {
                let via = ki.plus(b).plus(self.get(j, l));
                if via < self.get(k, l) {
                    self.set(k, l, via);
                }
            }
        }
    }

    pub fn intersect(&self, other: &Dbm) -> Dbm {
        debug_assert_eq!(self.dim, other.dim);
        if self.empty || other.empty {
            return Dbm::empty(self.clocks());
        }
        let m = self.m.iter().zip(&other.m).map(|(a, b)| *a.min(b)).collect();
        Dbm::from_bounds(self.dim, m)
    }

    /// `self ⊇ other`.
    pub fn includes(&self, other: &Dbm) -> bool {
        if other.empty {
            return true;
        }
        if self.empty {
            return false;
        }
        self.m.iter().zip(&other.m).all(|(a, b)| a >= b)
    }

    /// Time successors `{ν + δ : δ ≥ 0}`.
    pub fn up(&self) -> Dbm {
        let mut d = self.clone();
        if d.empty {
            return d;
        }
        for i in 1..d.dim {
            d.set(i, 0, Bound::Infinity);
        }
        d
    }

    /// Strict time successors `{ν + δ : δ > 0}`.
    pub fn up_strict(&self) -> Dbm {
        let mut d = self.up();
        if d.empty {
            return d;
        }
        for j in 1..d.dim {
            let b = d.get(0, j);
            d.set(0, j, b.strict());
        }
        d.close();
        d
    }

    /// Time predecessors `{ν : ∃δ ≥ 0. ν + δ ∈ Z}`.
    pub fn down(&self) -> Dbm {
        let mut d = self.clone();
        if d.empty {
            return d;
        }
        for j in 1..d.dim {
            d.set(0, j, Bound::le_zero());
        }
        d.close();
        d
    }

    /// Strict time predecessors `{ν : ∃δ > 0. ν + δ ∈ Z}`.
    pub fn down_strict(&self) -> Dbm {
        let mut d = self.clone();
        if d.empty {
            return d;
        }
        for j in 1..d.dim {
            d.set(0, j, Bound::le_zero());
            let b = d.get(j, 0);
            d.set(j, 0, b.strict());
        }
        d.close();
        d
    }

    /// Sets clock `x` to zero.
    pub fn reset(&self, x: usize) -> Dbm {
        let mut d = self.clone();
        if d.empty {
            return d;
        }
        for j in 0..d.dim {
            if j != x {
                let zj = d.get(0, j);
                let jz = d.get(j, 0);
                d.set(x, j, zj);
                d.set(j, x, jz);
            }
        }
        d.set(x, x, Bound::le_zero());
        d
    }

    /// Removes every constraint on clock `x` (other than `x ≥ 0`).
    pub fn free(&self, x: usize) -> Dbm {
        let mut d = self.clone();
        if d.empty {
            return d;
        }
        for j in 0..d.dim {
            if j != x {
                let jz = d.get(j, 0);
                d.set(x, j, Bound::Infinity);
                d.set(j, x, jz);
            }
        }
        d
    }

    /// Maximal-constant extrapolation; `max[i]` is the constant of matrix
    /// index `i` (`max[0]` is ignored and treated as 0).
    pub fn extrapolate(&self, max: &[u32]) -> Dbm {
        let mut d = self.clone();
        if d.empty {
            return d;
        }
        let bound_of = |i: usize| if i == 0 { 0 } else { max[i] as i64 };
        for i in 0..d.dim {
            for j in 0..d.dim {
                if i == j {
                    continue;
                }
                let b = d.get(i, j);
                if b > Bound::le(int(bound_of(i))) {
                    d.set(i, j, Bound::Infinity);
                } else if b < Bound::lt(int(-bound_of(j))) {
                    d.set(i, j, Bound::lt(int(-bound_of(j))));
                }
            }
        }
        d.close();
        d
    }

    /// Membership of a point (indexed by clock position).
    pub fn contains(&self, point: &[Rational]) -> bool {
        if self.empty {
            return false;
        }
        debug_assert_eq!(point.len() + 1, self.dim);
        let value = |i: usize| if i == 0 { Rational::zero() } else { point[i - 1] };
        if point.iter().any(|v| *v < Rational::zero()) {
            return false;
        }
        (0..self.dim).all(|i| (0..self.dim).all(|j| i == j || self.get(i, j).admits(value(i) - value(j))))
    }

    /// Delays `δ ≥ 0` such that `point + δ` lies in the zone.
    pub fn delay_window(&self, point: &[Rational]) -> Option<Interval> {
        if self.empty {
            return None;
        }
        let mut lo = (Rational::zero(), true);
        let mut hi: Option<(Rational, bool)> = None;
        for i in 1..self.dim {
            for j in 1..self.dim {
                if i != j && !self.get(i, j).admits(point[i - 1] - point[j - 1]) {
                    return None;
                }
            }
            if let Bound::Finite { value, strict } = self.get(i, 0) {
                let cand = (value - point[i - 1], !strict);
                hi = Some(match hi {
                    None => cand,
                    Some(cur) if cand.0 < cur.0 || (cand.0 == cur.0 && !cand.1) => cand,
                    Some(cur) => cur,
                });
            }
            if let Bound::Finite { value, strict } = self.get(0, i) {
                let cand = (-value - point[i - 1], !strict);
                if cand.0 > lo.0 || (cand.0 == lo.0 && !cand.1) {
                    lo = cand;
                }
            }
        }
        Interval::new(lo.0, lo.1, hi.map(|h| h.0), hi.map(|h| h.1).unwrap_or(false))
    }

    /// A deterministic point of the zone: clocks are fixed in index order,
    /// each to its least admissible value, or half a unit above a strict
    /// lower bound (the midpoint when the gap is narrower).
    pub fn pick_point(&self) -> Option<Vec<Rational>> {
        if self.empty {
            return None;
        }
        let mut d = self.clone();
        let mut point = Vec::with_capacity(self.clocks());
        for i in 1..self.dim {
            let lower = d.get(0, i);
            let upper = d.get(i, 0);
            let lo = -lower.value().unwrap_or_else(Rational::zero);
            let value = if !lower.is_strict() {
                lo
            } else {
                let nudged = lo + half(int(1));
                if upper.admits(nudged) {
                    nudged
                } else {
                    half(lo + upper.value().expect("a strict gap below a finite bound"))
                }
            };
            d.constrain(i, 0, Bound::le(value));
            d.constrain(0, i, Bound::le(-value));
            debug_assert!(!d.is_empty());
            point.push(value);
        }
        Some(point)
    }

    /// Entries tighter than the universal zone, as `(i, j, bound)`.
    pub fn constraints(&self) -> Vec<(usize, usize, Bound)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i == j {
                    continue;
                }
                let b = self.get(i, j);
                let trivial = if i == 0 { Bound::le_zero() } else { Bound::Infinity };
                if b < trivial {
                    out.push((i, j, b));
                }
            }
        }
        out
    }

    /// A subset of [`Dbm::constraints`] that still defines the zone.
    pub fn reduced_constraints(&self) -> Vec<(usize, usize, Bound)> {
        let mut all = self.constraints();
        // clock bounds first; differences are often implied by them
        all.sort_by_key(|(i, j, _)| (*i != 0 && *j != 0, *i, *j));
        let mut rebuilt = Dbm::universal(self.clocks());
        let mut kept = Vec::new();
        for (i, j, b) in all {
            if rebuilt.get(i, j) > b {
                rebuilt.constrain(i, j, b);
                kept.push((i, j, b));
            }
        }
        kept
    }

    /// Complement within the non-negative valuations, as pairwise disjoint
    /// zones.
    pub fn complement(&self) -> Vec<Dbm> {
        let clocks = self.clocks();
        if self.empty {
            return vec![Dbm::universal(clocks)];
        }
        let mut pieces = Vec::new();
        let mut prefix = Dbm::universal(clocks);
        for (i, j, b) in self.reduced_constraints() {
            let mut piece = prefix.clone();
            piece.constrain(j, i, b.negate());
            if !piece.is_empty() {
                pieces.push(piece);
            }
            prefix.constrain(i, j, b);
        }
        pieces
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn two_clocks() -> Dbm {
        Dbm::universal(2)
    }

    #[test]
    fn canonical_input_is_unchanged_by_close() {
        let mut d = two_clocks();
        d.constrain(1, 0, Bound::le(int(3)));
        let before = d.clone();
        d.close();
        assert_eq!(d, before);
    }

    #[test]
    fn close_tightens_difference() {
        // t ≤ 2 with u ≥ 0 forces t - u ≤ 2
        let mut raw = vec![Bound::Infinity; 9];
        for i in 0..3 {
            raw[i * 3 + i] = Bound::le_zero();
            raw[i] = Bound::le_zero();
        }
        raw[3] = Bound::le(int(2)); // (t, 0)
        let d = Dbm::from_bounds(3, raw);
        assert_eq!(d.get(1, 2), Bound::le(int(2)));
        assert_eq!(d.get(2, 1), Bound::Infinity);
    }

    #[test]
    fn contradictory_bounds_are_empty() {
        let mut d = Dbm::universal(1);
        d.constrain(0, 1, Bound::le(int(-3)));
        d.constrain(1, 0, Bound::le(int(2)));
        assert!(d.is_empty());
    }

    #[test]
    fn future_of_origin_is_the_diagonal() {
        let up = Dbm::zero(2).up();
        assert!(up.contains(&[int(5), int(5)]));
        assert!(!up.contains(&[int(5), int(4)]));
        let strict = Dbm::zero(2).up_strict();
        assert!(!strict.contains(&[int(0), int(0)]));
        assert!(strict.contains(&[frac(1, 4), frac(1, 4)]));
    }

    #[test]
    fn extrapolation_coarsens_large_lower_bound() {
        let mut d = Dbm::universal(1);
        d.constrain(0, 1, Bound::le(int(-7)));
        let e = d.extrapolate(&[0, 5]);
        assert_eq!(e.get(0, 1), Bound::lt(int(-5)));
        assert!(e.contains(&[frac(11, 2)]));
        assert!(!e.contains(&[int(5)]));
    }

    #[test]
    fn complement_pieces_are_disjoint_and_cover() {
        let mut d = Dbm::universal(2);
        d.constrain(1, 0, Bound::le(int(2)));
        d.constrain(0, 2, Bound::lt(int(-1)));
        let pieces = d.complement();
        for a in 0..8 {
            for b in 0..8 {
                let p = [frac(a, 2), frac(b, 2)];
                let hits = pieces.iter().filter(|z| z.contains(&p)).count();
                assert_eq!(hits, usize::from(!d.contains(&p)), "point {:?}", p);
            }
        }
    }

    #[test]
    fn window_of_a_point() {
        let mut d = Dbm::universal(1);
        d.constrain(0, 1, Bound::le(int(-4)));
        d.constrain(1, 0, Bound::lt(int(6)));
        let w = d.delay_window(&[int(1)]).unwrap();
        assert_eq!((w.lo, w.lo_closed, w.hi, w.hi_closed), (int(3), true, Some(int(5)), false));
    }

    #[test]
    fn picked_point_is_member() {
        let mut d = Dbm::universal(2);
        d.constrain(0, 1, Bound::lt(int(-1)));
        d.constrain(1, 0, Bound::lt(int(2)));
        d.constrain(2, 1, Bound::le(int(0)));
        let p = d.pick_point().unwrap();
        assert!(d.contains(&p));
        assert_eq!(p[0], frac(3, 2));
    }
}
