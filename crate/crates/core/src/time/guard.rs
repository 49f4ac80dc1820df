use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use core::fmt;

use super::clock::{Clock, ClockValuation, Owner, Universe};
use super::dbm::{Bound, Dbm};
use super::interval::{Interval, IntervalSet};
use super::zone::ZoneSet;
use super::TimeError;
use crate::rational::{int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl CmpOp {
    pub fn holds(self, lhs: Rational, rhs: Rational) -> bool {
        match self {
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ge => lhs >= rhs,
            CmpOp::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }

    pub fn is_strict(self) -> bool {
        matches!(self, CmpOp::Lt | CmpOp::Gt)
    }
}

/// Clock constraint: `true | ¬g | g ∧ g | x ∘ d | x − y ∘ d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Guard {
    True,
    Not(Box<Guard>),
    And(Box<Guard>, Box<Guard>),
    Cmp(Clock, CmpOp, u32),
    Diag(Clock, Clock, CmpOp, u32),
}

impl Guard {
    pub fn cmp(clock: impl Into<Clock>, op: CmpOp, constant: u32) -> Guard {
        Guard::Cmp(clock.into(), op, constant)
    }

    pub fn diag(x: impl Into<Clock>, y: impl Into<Clock>, op: CmpOp, constant: u32) -> Guard {
        Guard::Diag(x.into(), y.into(), op, constant)
    }

    pub fn negate(g: Guard) -> Guard {
        Guard::Not(Box::new(g))
    }

    pub fn and(a: Guard, b: Guard) -> Guard {
        match (a, b) {
            (Guard::True, g) | (g, Guard::True) => g,
            (a, b) => Guard::And(Box::new(a), Box::new(b)),
        }
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Guard::True)
    }

    pub fn clocks(&self) -> BTreeSet<Clock> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |g| match g {
            Guard::Cmp(x, _, _) => {
                out.insert(x.clone());
            }
            Guard::Diag(x, y, _, _) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            _ => {}
        });
        out
    }

    /// Calls `f` on every atom (`Cmp`, `Diag`, `True`).
    pub fn visit_atoms(&self, f: &mut impl FnMut(&Guard)) {
        match self {
            Guard::Not(g) => g.visit_atoms(f),
            Guard::And(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
            atom => f(atom),
        }
    }

    /// Does the guard use `<`, `>` or negation (which yields strict bounds)?
    pub fn has_strict(&self) -> bool {
        match self {
            Guard::True => false,
            Guard::Not(_) => true,
            Guard::And(a, b) => a.has_strict() || b.has_strict(),
            Guard::Cmp(_, op, _) | Guard::Diag(_, _, op, _) => op.is_strict(),
        }
    }

    fn is_atomic(&self) -> bool {
        !matches!(self, Guard::And(..))
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guard::True => f.write_str("true"),
            Guard::Cmp(x, op, d) => write!(f, "{}{}{}", x, op.symbol(), d),
            Guard::Diag(x, y, op, d) => write!(f, "{}-{}{}{}", x, y, op.symbol(), d),
            Guard::Not(g) if g.is_atomic() => write!(f, "!{}", g),
            Guard::Not(g) => write!(f, "!({})", g),
            Guard::And(a, b) if b.is_atomic() => write!(f, "{} && {}", a, b),
            Guard::And(a, b) => write!(f, "{} && ({})", a, b),
        }
    }
}

/// `ν ∈ ⟦g⟧`.
pub fn guard_sat(g: &Guard, nu: &ClockValuation) -> Result<bool, TimeError> {
    Ok(match g {
        Guard::True => true,
        Guard::Not(inner) => !guard_sat(inner, nu)?,
        Guard::And(a, b) => guard_sat(a, nu)? && guard_sat(b, nu)?,
        Guard::Cmp(x, op, d) => op.holds(nu.value(x)?, int(*d as i64)),
        Guard::Diag(x, y, op, d) => op.holds(nu.value(x)? - nu.value(y)?, int(*d as i64)),
    })
}

/// Constrains `dbm` by `x_i - x_j ∘ d` (with `j = 0` for a plain clock bound).
fn constrain_atom(dbm: &mut Dbm, i: usize, j: usize, op: CmpOp, d: u32) {
    let d = int(d as i64);
    match op {
        CmpOp::Lt => dbm.constrain(i, j, Bound::lt(d)),
        CmpOp::Le => dbm.constrain(i, j, Bound::le(d)),
        CmpOp::Eq => {
            dbm.constrain(i, j, Bound::le(d));
            dbm.constrain(j, i, Bound::le(-d));
        }
        CmpOp::Ge => dbm.constrain(j, i, Bound::le(-d)),
        CmpOp::Gt => dbm.constrain(j, i, Bound::lt(-d)),
    }
}

/// `⟦g⟧` as a union of zones over `universe`, reading the guard's clocks as
/// belonging to `owner`.
pub fn guard_zones(g: &Guard, universe: &Universe, owner: Owner) -> Result<ZoneSet, TimeError> {
    let dim = universe.dim();
    let clocks = dim - 1;
    Ok(match g {
        Guard::True => ZoneSet::universal(dim),
        Guard::Not(inner) => guard_zones(inner, universe, owner)?.complement(),
        Guard::And(a, b) => guard_zones(a, universe, owner)?.meet(&guard_zones(b, universe, owner)?),
        Guard::Cmp(x, op, d) => {
            let i = universe.index_of(owner, x)?;
            let mut z = Dbm::universal(clocks);
            constrain_atom(&mut z, i, 0, *op, *d);
            ZoneSet::from_dbm(z)
        }
        Guard::Diag(x, y, op, d) => {
            let i = universe.index_of(owner, x)?;
            let j = universe.index_of(owner, y)?;
            let mut z = Dbm::universal(clocks);
            constrain_atom(&mut z, i, j, *op, *d);
            ZoneSet::from_dbm(z)
        }
    })
}

/// Delays `δ ≥ 0` with `ν + δ ∈ ⟦g⟧`, computed by interval arithmetic on the
/// guard's syntax (independently of the zone representation).
pub fn guard_window(g: &Guard, nu: &ClockValuation) -> Result<IntervalSet, TimeError> {
    Ok(match g {
        Guard::True => IntervalSet::full(),
        Guard::Not(inner) => guard_window(inner, nu)?.complement(),
        Guard::And(a, b) => guard_window(a, nu)?.intersect(&guard_window(b, nu)?),
        Guard::Diag(x, y, op, d) => {
            if op.holds(nu.value(x)? - nu.value(y)?, int(*d as i64)) {
                IntervalSet::full()
            } else {
                IntervalSet::empty()
            }
        }
        Guard::Cmp(x, op, d) => {
            // ν(x) + δ ∘ d  ⇔  δ ∘ (d − ν(x))
            let gap = int(*d as i64) - nu.value(x)?;
            let zero = int(0);
            let part = match op {
                CmpOp::Lt => Interval::new(zero, true, Some(gap), false),
                CmpOp::Le => Interval::new(zero, true, Some(gap), true),
                CmpOp::Eq => Interval::new(gap, true, Some(gap), true).filter(|_| gap >= zero),
                CmpOp::Ge => Interval::new(gap.max(zero), true, None, false),
                CmpOp::Gt if gap < zero => Interval::new(zero, true, None, false),
                CmpOp::Gt => Interval::new(gap, false, None, false),
            };
            IntervalSet::from_parts(part)
        }
    })
}
