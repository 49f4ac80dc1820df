use alloc::boxed::Box;
use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::time::{Guard, ResetSet};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action(pub String);

impl Action {
    pub fn new(name: impl Into<String>) -> Self {
        Action(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Action {
    fn from(name: &str) -> Self {
        Action::new(name)
    }
}

/// Recursion variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub String);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Messages in transit, oldest first.
pub type Queue = VecDeque<Action>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Output,
    Input,
}

impl Polarity {
    pub fn dual(self) -> Polarity {
        match self {
            Polarity::Output => Polarity::Input,
            Polarity::Input => Polarity::Output,
        }
    }

    pub fn sigil(self) -> char {
        match self {
            Polarity::Output => '!',
            Polarity::Input => '?',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BranchLabel {
    pub polarity: Polarity,
    pub action: Action,
}

impl fmt::Display for BranchLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.polarity.sigil(), self.action)
    }
}

/// `ℓ{g}[R].p`
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Branch {
    pub label: BranchLabel,
    pub guard: Guard,
    pub resets: ResetSet,
    pub cont: Tst,
}

impl Branch {
    pub fn new(polarity: Polarity, action: impl Into<Action>, guard: Guard, resets: ResetSet, cont: Tst) -> Self {
        Branch { label: BranchLabel { polarity, action: action.into() }, guard, resets, cont }
    }

    pub fn action(&self) -> &Action {
        &self.label.action
    }

    pub fn polarity(&self) -> Polarity {
        self.label.polarity
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tst {
    Success,
    /// `⊕` over output branches.
    Internal(Vec<Branch>),
    /// `+` over input branches.
    External(Vec<Branch>),
    Rec(Var, Box<Tst>),
    Var(Var),
}

impl Tst {
    pub fn rec(var: impl Into<String>, body: Tst) -> Tst {
        Tst::Rec(Var(var.into()), Box::new(body))
    }

    pub fn var(name: impl Into<String>) -> Tst {
        Tst::Var(Var(name.into()))
    }

    /// Single-branch choice.
    pub fn prefix(branch: Branch) -> Tst {
        match branch.polarity() {
            Polarity::Output => Tst::Internal(alloc::vec![branch]),
            Polarity::Input => Tst::External(alloc::vec![branch]),
        }
    }

    pub fn is_success(&self) -> bool {
        matches!(self, Tst::Success)
    }

    pub fn branches(&self) -> &[Branch] {
        match self {
            Tst::Internal(bs) | Tst::External(bs) => bs,
            _ => &[],
        }
    }

    /// Branch for `action` in an external choice.
    pub fn input_branch(&self, action: &Action) -> Option<&Branch> {
        match self {
            Tst::External(bs) => bs.iter().find(|b| b.action() == action),
            _ => None,
        }
    }
}

fn needs_parens(cont: &Tst) -> bool {
    match cont {
        Tst::Rec(..) => true,
        Tst::Internal(bs) | Tst::External(bs) => bs.len() > 1,
        _ => false,
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)?;
        if !self.guard.is_true() {
            write!(f, "{{{}}}", self.guard)?;
        }
        if !self.resets.is_empty() {
            f.write_str("[")?;
            for (i, c) in self.resets.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", c)?;
            }
            f.write_str("]")?;
        }
        match &self.cont {
            Tst::Success => Ok(()),
            c if needs_parens(c) => write!(f, ".({})", c),
            c => write!(f, ".{}", c),
        }
    }
}

impl fmt::Display for Tst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tst::Success => f.write_str("1"),
            Tst::Var(x) => write!(f, "{}", x),
            Tst::Rec(x, body) => write!(f, "rec {} . {}", x, body),
            Tst::Internal(bs) | Tst::External(bs) => {
                let sep = if matches!(self, Tst::Internal(_)) { " (+) " } else { " + " };
                for (i, b) in bs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    write!(f, "{}", b)?;
                }
                Ok(())
            }
        }
    }
}
