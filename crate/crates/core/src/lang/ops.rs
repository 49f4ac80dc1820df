use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::ast::{Action, Polarity, Tst, Var};
use crate::time::{Clock, CmpOp, Guard, MaxConstMap};

/// A violated side condition of the term grammar.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("empty choice")]
    EmptyChoice,
    #[error("mixed polarities in one choice")]
    MixedPolarity,
    #[error("duplicate action `{0}` in a choice")]
    DuplicateAction(String),
    #[error("unguarded recursion variable `{0}`")]
    UnguardedRecursion(String),
    #[error("unbound recursion variable `{0}`")]
    UnboundVariable(String),
}

/// Checks non-empty choices, uniform polarity, distinct actions, guarded
/// recursion and closedness.
pub fn validate(p: &Tst) -> Result<(), Vec<ValidationError>> {
    let mut errors = Vec::new();
    check(p, &mut Vec::new(), &mut errors);
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

fn check(p: &Tst, env: &mut Vec<(Var, bool)>, errors: &mut Vec<ValidationError>) {
    match p {
        Tst::Success => {}
        Tst::Var(x) => match env.iter().rev().find(|(v, _)| v == x) {
            None => errors.push(ValidationError::UnboundVariable(x.0.clone())),
            Some((_, false)) => errors.push(ValidationError::UnguardedRecursion(x.0.clone())),
            Some(_) => {}
        },
        Tst::Rec(x, body) => {
            env.push((x.clone(), false));
            check(body, env, errors);
            env.pop();
        }
        Tst::Internal(bs) | Tst::External(bs) => {
            if bs.is_empty() {
                errors.push(ValidationError::EmptyChoice);
            }
            let expected = if matches!(p, Tst::Internal(_)) { Polarity::Output } else { Polarity::Input };
            if bs.iter().any(|b| b.polarity() != expected) {
                errors.push(ValidationError::MixedPolarity);
            }
            for (i, b) in bs.iter().enumerate() {
                if bs[..i].iter().any(|o| o.action() == b.action()) {
                    errors.push(ValidationError::DuplicateAction(b.action().0.clone()));
                }
            }
            let saved: Vec<bool> = env.iter().map(|(_, g)| *g).collect();
            env.iter_mut().for_each(|(_, g)| *g = true);
            for b in bs {
                check(&b.cont, env, errors);
            }
            env.iter_mut().zip(saved).for_each(|((_, g), s)| *g = s);
        }
    }
}

/// `p{X := q}`; `q` is closed, so no capture can occur.
fn substitute(p: &Tst, x: &Var, q: &Tst) -> Tst {
    match p {
        Tst::Success => Tst::Success,
        Tst::Var(y) if y == x => q.clone(),
        Tst::Var(_) => p.clone(),
        Tst::Rec(y, _) if y == x => p.clone(),
        Tst::Rec(y, body) => Tst::Rec(y.clone(), Box::new(substitute(body, x, q))),
        Tst::Internal(bs) | Tst::External(bs) => {
            let bs = bs
                .iter()
                .map(|b| {
                    let mut b = b.clone();
                    b.cont = substitute(&b.cont, x, q);
                    b
                })
                .collect();
            if matches!(p, Tst::Internal(_)) {
                Tst::Internal(bs)
            } else {
                Tst::External(bs)
            }
        }
    }
}

/// Unfolds `rec X . p` to `p{X := rec X . p}` until the head is not a
/// recursion.
pub fn unfold(p: &Tst) -> Tst {
    let mut cur = p.clone();
    while let Tst::Rec(x, body) = &cur {
        cur = substitute(body, x, &cur);
    }
    cur
}

/// Unfolded terms reachable through branch continuations.
pub fn reachable_terms(p: &Tst) -> BTreeSet<Tst> {
    let mut seen = BTreeSet::new();
    let mut todo = alloc::vec![unfold(p)];
    while let Some(t) = todo.pop() {
        if seen.contains(&t) {
            continue;
        }
        todo.extend(t.branches().iter().map(|b| unfold(&b.cont)));
        seen.insert(t);
    }
    seen
}

/// Clocks mentioned in guards or resets.
pub fn clocks(p: &Tst) -> BTreeSet<Clock> {
    let mut out = BTreeSet::new();
    collect_clocks(p, &mut out);
    out
}

fn collect_clocks(p: &Tst, out: &mut BTreeSet<Clock>) {
    match p {
        Tst::Rec(_, body) => collect_clocks(body, out),
        Tst::Internal(bs) | Tst::External(bs) => {
            for b in bs {
                out.extend(b.guard.clocks());
                out.extend(b.resets.iter().cloned());
                collect_clocks(&b.cont, out);
            }
        }
        Tst::Success | Tst::Var(_) => {}
    }
}

/// Per clock, the largest constant it is compared against (a diagonal
/// constraint counts for both of its clocks); 0 for clocks never compared.
pub fn max_constant(p: &Tst) -> MaxConstMap {
    let mut out: MaxConstMap = clocks(p).into_iter().map(|c| (c, 0)).collect();
    for t in reachable_terms(p) {
        for b in t.branches() {
            b.guard.visit_atoms(&mut |g| {
                let mut bump = |c: &Clock, d: u32| {
                    let e = out.entry(c.clone()).or_insert(0);
                    *e = (*e).max(d);
                };
                match g {
                    Guard::Cmp(x, _, d) => bump(x, *d),
                    Guard::Diag(x, y, _, d) => {
                        bump(x, *d);
                        bump(y, *d);
                    }
                    _ => {}
                }
            });
        }
    }
    out
}

/// Input branches whose guard has a strict lower bound (`x > n`). Under
/// input urgency such a guard can leave no first instant at which the
/// message may be read, so the sender may get stuck.
pub fn strict_input_guards(p: &Tst) -> Vec<(Action, Guard)> {
    let mut out = Vec::new();
    for t in reachable_terms(p) {
        if let Tst::External(bs) = &t {
            for b in bs {
                if strict_lower(&b.guard, false) && !out.iter().any(|(a, g)| a == b.action() && *g == b.guard) {
                    out.push((b.action().clone(), b.guard.clone()));
                }
            }
        }
    }
    out
}

fn strict_lower(g: &Guard, negated: bool) -> bool {
    match g {
        Guard::True => false,
        Guard::Not(h) => strict_lower(h, !negated),
        Guard::And(a, b) => strict_lower(a, negated) || strict_lower(b, negated),
        Guard::Cmp(_, op, _) | Guard::Diag(_, _, op, _) => {
            matches!((op, negated), (CmpOp::Gt, false) | (CmpOp::Le, true))
        }
    }
}
