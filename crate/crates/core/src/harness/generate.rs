use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lang::{Action, Branch, Polarity, Tst, Var};
use crate::time::{Clock, CmpOp, Guard, ResetSet};

/// Shape of randomly generated terms.
#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    /// Longest chain of prefixes.
    pub max_depth: u32,
    pub max_branches: u32,
    /// Actions are drawn from the first `alphabet` letters.
    pub alphabet: u32,
    pub max_constant: u32,
    /// Chance that a choice is wrapped in a recursion.
    pub recursion: f64,
    /// Allow `<` and `>` atoms.
    pub strict_guards: bool,
    /// Clocks are drawn from the first `clocks` of `t, u, v, w, ...`.
    pub clocks: u32,
    /// Chance that a branch resets a given clock.
    pub reset: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_depth: 3,
            max_branches: 2,
            alphabet: 2,
            max_constant: 3,
            recursion: 0.2,
            strict_guards: false,
            clocks: 1,
            reset: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenConfigError {
    #[error("`{0}` must be at least 1")]
    TooSmall(&'static str),
    #[error("`{0}` must be a probability")]
    NotAProbability(&'static str),
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), GenConfigError> {
        for (name, v) in [
            ("max_depth", self.max_depth),
            ("max_branches", self.max_branches),
            ("alphabet", self.alphabet),
            ("max_constant", self.max_constant),
            ("clocks", self.clocks),
        ] {
            if v == 0 {
                return Err(GenConfigError::TooSmall(name));
            }
        }
        for (name, p) in [("recursion", self.recursion), ("reset", self.reset)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(GenConfigError::NotAProbability(name));
            }
        }
        Ok(())
    }

    pub fn actions(&self) -> Vec<Action> {
        (0..self.alphabet).map(|i| Action::new(letter_name(i, b'a'))).collect()
    }

    pub fn clock_names(&self) -> Vec<Clock> {
        const NAMES: [&str; 4] = ["t", "u", "v", "w"];
        (0..self.clocks as usize)
            .map(|i| Clock::new(NAMES.get(i).map_or_else(|| format!("c{}", i), |n| String::from(*n))))
            .collect()
    }
}

fn letter_name(i: u32, base: u8) -> String {
    if i < 26 {
        String::from(char::from(base + i as u8))
    } else {
        format!("{}{}", char::from(base), i)
    }
}

struct Gen<'a> {
    cfg: &'a GenConfig,
    rng: ChaCha8Rng,
    actions: Vec<Action>,
    clocks: Vec<Clock>,
    vars: u32,
}

impl Gen<'_> {
    fn term(&mut self, depth: u32, bound: &[Var]) -> Tst {
        if depth == 0 {
            return self.leaf(bound);
        }
        if !bound.is_empty() && self.rng.gen_ratio(1, 4) {
            return Tst::Var(bound.choose(&mut self.rng).cloned().expect("non-empty"));
        }
        if self.rng.gen_ratio(1, depth + 3) {
            return Tst::Success;
        }
        if depth >= 2 && self.rng.gen_bool(self.cfg.recursion) {
            let x = Var(var_name(self.vars));
            self.vars += 1;
            let mut inner = bound.to_vec();
            inner.push(x.clone());
            let body = self.choice(depth, &inner);
            return Tst::Rec(x, Box::new(body));
        }
        self.choice(depth, bound)
    }

    fn leaf(&mut self, bound: &[Var]) -> Tst {
        match bound.choose(&mut self.rng) {
            Some(x) if self.rng.gen_bool(0.5) => Tst::Var(x.clone()),
            _ => Tst::Success,
        }
    }

    fn choice(&mut self, depth: u32, bound: &[Var]) -> Tst {
        let polarity = if self.rng.gen_bool(0.5) { Polarity::Output } else { Polarity::Input };
        let width = self.rng.gen_range(1..=self.cfg.max_branches.min(self.cfg.alphabet)) as usize;
        let mut actions = self.actions.clone();
        actions.shuffle(&mut self.rng);
        actions.truncate(width);
        actions.sort();
        let branches = actions
            .into_iter()
            .map(|a| {
                let guard = self.guard();
                let resets = self.resets();
                let cont = self.term(depth - 1, bound);
                Branch::new(polarity, a, guard, resets, cont)
            })
            .collect();
        match polarity {
            Polarity::Output => Tst::Internal(branches),
            Polarity::Input => Tst::External(branches),
        }
    }

    fn guard(&mut self) -> Guard {
        if self.rng.gen_ratio(1, 3) {
            return Guard::True;
        }
        let first = self.atom();
        if self.rng.gen_ratio(1, 3) {
            Guard::and(first, self.atom())
        } else {
            first
        }
    }

    fn atom(&mut self) -> Guard {
        let ops: &[CmpOp] = if self.cfg.strict_guards {
            &[CmpOp::Lt, CmpOp::Le, CmpOp::Eq, CmpOp::Ge, CmpOp::Gt]
        } else {
            &[CmpOp::Le, CmpOp::Eq, CmpOp::Ge]
        };
        let op = *ops.choose(&mut self.rng).expect("non-empty");
        let c = self.rng.gen_range(0..=self.cfg.max_constant);
        if self.clocks.len() >= 2 && self.rng.gen_ratio(1, 8) {
            let mut two: Vec<&Clock> = self.clocks.choose_multiple(&mut self.rng, 2).collect();
            two.sort();
            Guard::diag(two[0].clone(), two[1].clone(), op, c)
        } else {
            Guard::cmp(self.clocks.choose(&mut self.rng).cloned().expect("non-empty"), op, c)
        }
    }

    fn resets(&mut self) -> ResetSet {
        let p = self.cfg.reset;
        self.clocks.iter().filter(|_| self.rng.gen_bool(p)).cloned().collect()
    }
}

fn var_name(i: u32) -> String {
    match i {
        0..=2 => String::from(["X", "Y", "Z"][i as usize]),
        _ => format!("X{}", i),
    }
}

/// A random well-formed term; the same `cfg` and `seed` always give the
/// same term.
pub fn generate_tst(cfg: &GenConfig, seed: u64) -> Tst {
    let mut g = Gen {
        cfg,
        rng: ChaCha8Rng::seed_from_u64(seed),
        actions: cfg.actions(),
        clocks: cfg.clock_names(),
        vars: 0,
    };
    g.term(cfg.max_depth, &[])
}

/// A term together with a likely partner: polarities are swapped, input
/// guards of the partner are widened to the past of the matching output
/// guard, and with even odds one constant is then nudged by one.
pub fn generate_pair(cfg: &GenConfig, seed: u64) -> (Tst, Tst) {
    let p = generate_tst(cfg, seed);
    let mut q = dual(&p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let atoms = count_atoms(&q);
    if atoms > 0 && rng.gen_bool(0.5) {
        let target = rng.gen_range(0..atoms);
        let up = rng.gen_bool(0.5);
        let mut seen = 0;
        q = map_guards(&q, &mut |g| nudge(g, target, up, &mut seen));
    }
    (p, q)
}

/// Swaps polarities, widening the new input guards.
pub fn dual(p: &Tst) -> Tst {
    match p {
        Tst::Success | Tst::Var(_) => p.clone(),
        Tst::Rec(x, body) => Tst::Rec(x.clone(), Box::new(dual(body))),
        Tst::Internal(bs) => Tst::External(
            bs.iter()
                .map(|b| Branch::new(Polarity::Input, b.action().clone(), widen(&b.guard), b.resets.clone(), dual(&b.cont)))
                .collect(),
        ),
        Tst::External(bs) => Tst::Internal(
            bs.iter()
                .map(|b| Branch::new(Polarity::Output, b.action().clone(), b.guard.clone(), b.resets.clone(), dual(&b.cont)))
                .collect(),
        ),
    }
}

/// Drops lower bounds, so that every valuation that can delay into `g`
/// satisfies the result.
pub fn widen(g: &Guard) -> Guard {
    match g {
        Guard::True => Guard::True,
        Guard::And(a, b) => Guard::and(widen(a), widen(b)),
        Guard::Cmp(x, op, c) => match op {
            CmpOp::Lt | CmpOp::Le => g.clone(),
            CmpOp::Eq => Guard::cmp(x.clone(), CmpOp::Le, *c),
            CmpOp::Ge | CmpOp::Gt => Guard::True,
        },
        // Clock differences do not change with time.
        Guard::Diag(..) => g.clone(),
        Guard::Not(inner) => match inner.as_ref() {
            Guard::Cmp(x, CmpOp::Ge, c) => Guard::cmp(x.clone(), CmpOp::Lt, *c),
            Guard::Cmp(x, CmpOp::Gt, c) => Guard::cmp(x.clone(), CmpOp::Le, *c),
            Guard::Diag(..) => g.clone(),
            _ => Guard::True,
        },
    }
}

fn count_atoms(p: &Tst) -> usize {
    let mut n = 0;
    map_guards(p, &mut |g| {
        g.visit_atoms(&mut |_| n += 1);
        g.clone()
    });
    n
}

fn map_guards(p: &Tst, f: &mut dyn FnMut(&Guard) -> Guard) -> Tst {
    fn branches(bs: &[Branch], f: &mut dyn FnMut(&Guard) -> Guard) -> Vec<Branch> {
        bs.iter().map(|b| Branch { guard: f(&b.guard), cont: map_guards(&b.cont, &mut *f), ..b.clone() }).collect()
    }
    match p {
        Tst::Success | Tst::Var(_) => p.clone(),
        Tst::Rec(x, body) => Tst::Rec(x.clone(), Box::new(map_guards(body, f))),
        Tst::Internal(bs) => Tst::Internal(branches(bs, f)),
        Tst::External(bs) => Tst::External(branches(bs, f)),
    }
}

fn nudge(g: &Guard, target: usize, up: bool, seen: &mut usize) -> Guard {
    match g {
        Guard::True => Guard::True,
        Guard::Not(h) => Guard::Not(Box::new(nudge(h, target, up, seen))),
        Guard::And(a, b) => {
            let a = nudge(a, target, up, seen);
            Guard::And(Box::new(a), Box::new(nudge(b, target, up, seen)))
        }
        Guard::Cmp(x, op, c) => {
            let hit = *seen == target;
            *seen += 1;
            Guard::Cmp(x.clone(), *op, if hit { shift(*c, up) } else { *c })
        }
        Guard::Diag(x, y, op, c) => {
            let hit = *seen == target;
            *seen += 1;
            Guard::Diag(x.clone(), y.clone(), *op, if hit { shift(*c, up) } else { *c })
        }
    }
}

fn shift(c: u32, up: bool) -> u32 {
    if up || c == 0 {
        c + 1
    } else {
        c - 1
    }
}
