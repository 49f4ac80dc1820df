//! Recursive-descent parser for terms and guards.
//!
//! ```text
//! term    ::= operand ( "(+)" operand )* | operand ( "+" operand )*
//! operand ::= "1" | branch | "rec" VAR "." term | VAR | "(" term ")"
//! branch  ::= ("!" | "?") ident ( "{" guard "}" )? ( "[" ident,* "]" )? ( "." operand )?
//! guard   ::= unary ( "&&" unary )*
//! unary   ::= "!" unary | "true" | "(" guard ")" | ident ( "-" ident )? cmp nat
//! ```

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::ast::{Action, Branch, Polarity, Tst, Var};
use crate::time::{Clock, CmpOp, Guard, ResetSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unexpected {found}, expected {expected}")]
    Unexpected { found: String, expected: &'static str },
    #[error("unexpected character `{0}`")]
    BadChar(char),
    #[error("constant out of range")]
    ConstantTooLarge,
    #[error("mixed polarities in one choice")]
    MixedPolarity,
    #[error("choice operand must be a branch")]
    NotABranch,
    #[error("duplicate action `{0}` in a choice")]
    DuplicateAction(String),
    #[error("unguarded recursion variable `{0}`")]
    UnguardedRecursion(String),
    #[error("unbound recursion variable `{0}`")]
    UnboundVariable(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(u32),
    Ident(String),
    Upper(String),
    Rec,
    True,
    Bang,
    Query,
    Dot,
    Comma,
    Plus,
    OPlus,
    AndAnd,
    Minus,
    Cmp(CmpOp),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBrack,
    RBrack,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "`{}`", n),
            Tok::Ident(s) | Tok::Upper(s) => write!(f, "`{}`", s),
            Tok::Rec => f.write_str("`rec`"),
            Tok::True => f.write_str("`true`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::Query => f.write_str("`?`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::OPlus => f.write_str("`(+)`"),
            Tok::AndAnd => f.write_str("`&&`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Cmp(op) => write!(f, "`{}`", op.symbol()),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    let err = |line, column, kind| ParseError { line, column, kind };
    while i < chars.len() {
        let c = chars[i];
        let (l, col) = (line, column);
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            column += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i);
            continue;
        }
        let at = |k: usize| chars.get(i + k).copied();
        let (tok, len) = match c {
            '(' if at(1) == Some('+') && at(2) == Some(')') => (Tok::OPlus, 3),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '{' => (Tok::LBrace, 1),
            '}' => (Tok::RBrace, 1),
            '[' => (Tok::LBrack, 1),
            ']' => (Tok::RBrack, 1),
            '.' => (Tok::Dot, 1),
            ',' => (Tok::Comma, 1),
            '+' => (Tok::Plus, 1),
            '-' => (Tok::Minus, 1),
            '?' => (Tok::Query, 1),
            '!' => (Tok::Bang, 1),
            '&' if at(1) == Some('&') => (Tok::AndAnd, 2),
            '<' if at(1) == Some('=') => (Tok::Cmp(CmpOp::Le), 2),
            '<' => (Tok::Cmp(CmpOp::Lt), 1),
            '>' if at(1) == Some('=') => (Tok::Cmp(CmpOp::Ge), 2),
            '>' => (Tok::Cmp(CmpOp::Gt), 1),
            '=' => (Tok::Cmp(CmpOp::Eq), 1),
            c if c.is_ascii_digit() => {
                let len = chars[i..].iter().take_while(|c| c.is_ascii_digit()).count();
                let digits: String = chars[i..i + len].iter().collect();
                let n = digits.parse::<u32>().map_err(|_| err(l, col, ParseErrorKind::ConstantTooLarge))?;
                (Tok::Num(n), len)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let len = chars[i..].iter().take_while(|c| c.is_ascii_alphanumeric() || **c == '_').count();
                let word: String = chars[i..i + len].iter().collect();
                let tok = match word.as_str() {
                    "rec" => Tok::Rec,
                    "true" => Tok::True,
                    _ if c.is_ascii_uppercase() => Tok::Upper(word),
                    _ => Tok::Ident(word),
                };
                (tok, len)
            }
            other => return Err(err(l, col, ParseErrorKind::BadChar(other))),
        };
        out.push(Lexed { tok, line: l, column: col });
        advance(len, &mut i);
    }
    out.push(Lexed { tok: Tok::End, line, column });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    /// Enclosing binders, innermost last, with whether a prefix separates
    /// the current position from the binder.
    env: Vec<(String, bool)>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        self.error_at(self.pos, kind)
    }

    fn error_at(&self, pos: usize, kind: ParseErrorKind) -> ParseError {
        let t = &self.toks[pos];
        ParseError { line: t.line, column: t.column, kind }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        self.error(ParseErrorKind::Unexpected { found: self.peek().to_string(), expected })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn ident(&mut self, expected: &'static str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn term(&mut self) -> Result<Tst, ParseError> {
        let start = self.pos;
        let first = self.operand()?;
        let sep = match self.peek() {
            Tok::OPlus => Tok::OPlus,
            Tok::Plus => Tok::Plus,
            _ => return Ok(first),
        };
        let polarity = if sep == Tok::OPlus { Polarity::Output } else { Polarity::Input };
        let mut branches = Vec::new();
        self.absorb(&mut branches, first, polarity, start)?;
        while self.peek() == &Tok::OPlus || self.peek() == &Tok::Plus {
            if self.peek() != &sep {
                return Err(self.error(ParseErrorKind::MixedPolarity));
            }
            self.bump();
            let at = self.pos;
            let next = self.operand()?;
            self.absorb(&mut branches, next, polarity, at)?;
        }
        Ok(match polarity {
            Polarity::Output => Tst::Internal(branches),
            Polarity::Input => Tst::External(branches),
        })
    }

    fn absorb(&self, into: &mut Vec<Branch>, operand: Tst, polarity: Polarity, at: usize) -> Result<(), ParseError> {
        let branches = match (operand, polarity) {
            (Tst::Internal(bs), Polarity::Output) | (Tst::External(bs), Polarity::Input) => bs,
            (Tst::Internal(_), _) | (Tst::External(_), _) => {
                return Err(self.error_at(at, ParseErrorKind::MixedPolarity))
            }
            _ => return Err(self.error_at(at, ParseErrorKind::NotABranch)),
        };
        for b in branches {
            if into.iter().any(|o| o.action() == b.action()) {
                return Err(self.error_at(at, ParseErrorKind::DuplicateAction(b.action().0.clone())));
            }
            into.push(b);
        }
        Ok(())
    }

    fn operand(&mut self) -> Result<Tst, ParseError> {
        match self.peek().clone() {
            Tok::Num(1) => {
                self.bump();
                Ok(Tst::Success)
            }
            Tok::Bang | Tok::Query => self.branch().map(Tst::prefix),
            Tok::Rec => {
                self.bump();
                let name = match self.bump() {
                    Tok::Upper(s) => s,
                    _ => {
                        self.pos -= 1;
                        return Err(self.unexpected("a recursion variable"));
                    }
                };
                self.expect(&Tok::Dot, "`.`")?;
                self.env.push((name.clone(), false));
                let body = self.term();
                self.env.pop();
                Ok(Tst::Rec(Var(name), Box::new(body?)))
            }
            Tok::Upper(name) => {
                match self.env.iter().rev().find(|(v, _)| *v == name) {
                    None => return Err(self.error(ParseErrorKind::UnboundVariable(name))),
                    Some((_, false)) => return Err(self.error(ParseErrorKind::UnguardedRecursion(name))),
                    Some(_) => {}
                }
                self.bump();
                Ok(Tst::Var(Var(name)))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn branch(&mut self) -> Result<Branch, ParseError> {
        let polarity = if self.bump() == Tok::Bang { Polarity::Output } else { Polarity::Input };
        let action = self.ident("an action name")?;
        let guard = if self.eat(&Tok::LBrace) {
            let g = self.guard()?;
            self.expect(&Tok::RBrace, "`}`")?;
            g
        } else {
            Guard::True
        };
        let mut resets = ResetSet::new();
        if self.eat(&Tok::LBrack) && !self.eat(&Tok::RBrack) {
            loop {
                resets.insert(Clock::new(self.ident("a clock name")?));
                if self.eat(&Tok::RBrack) {
                    break;
                }
                self.expect(&Tok::Comma, "`,` or `]`")?;
            }
        }
        let cont = if self.eat(&Tok::Dot) {
            let saved: Vec<bool> = self.env.iter().map(|(_, g)| *g).collect();
            self.env.iter_mut().for_each(|(_, g)| *g = true);
            let cont = self.operand();
            self.env.iter_mut().zip(saved).for_each(|((_, g), s)| *g = s);
            cont?
        } else {
            Tst::Success
        };
        Ok(Branch::new(polarity, Action(action), guard, resets, cont))
    }

    fn guard(&mut self) -> Result<Guard, ParseError> {
        let mut g = self.guard_unary()?;
        while self.eat(&Tok::AndAnd) {
            let rhs = self.guard_unary()?;
            g = Guard::And(Box::new(g), Box::new(rhs));
        }
        Ok(g)
    }

    fn guard_unary(&mut self) -> Result<Guard, ParseError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Guard::Not(Box::new(self.guard_unary()?)))
            }
            Tok::True => {
                self.bump();
                Ok(Guard::True)
            }
            Tok::LParen => {
                self.bump();
                let g = self.guard()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(g)
            }
            Tok::Ident(x) => {
                self.bump();
                let y = if self.eat(&Tok::Minus) { Some(self.ident("a clock name")?) } else { None };
                let op = match self.bump() {
                    Tok::Cmp(op) => op,
                    _ => {
                        self.pos -= 1;
                        return Err(self.unexpected("a comparison"));
                    }
                };
                let d = match self.bump() {
                    Tok::Num(d) => d,
                    _ => {
                        self.pos -= 1;
                        return Err(self.unexpected("a natural constant"));
                    }
                };
                Ok(match y {
                    Some(y) => Guard::Diag(Clock::new(x), Clock::new(y), op, d),
                    None => Guard::Cmp(Clock::new(x), op, d),
                })
            }
            _ => Err(self.unexpected("a guard")),
        }
    }
}

fn run<T>(text: &str, f: impl FnOnce(&mut Parser) -> Result<T, ParseError>) -> Result<T, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, env: Vec::new() };
    let out = f(&mut p)?;
    if p.peek() != &Tok::End {
        return Err(p.unexpected("end of input"));
    }
    Ok(out)
}

/// Parses a closed, well-formed term.
pub fn parse_tst(text: &str) -> Result<Tst, ParseError> {
    run(text, Parser::term)
}

/// Parses a guard on its own.
pub fn parse_guard(text: &str) -> Result<Guard, ParseError> {
    run(text, Parser::guard)
}
