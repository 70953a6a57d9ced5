//! Loop identities over named variables and their brute-force evaluation.
//!
//! Grammar accepted by [`Identity::parse`]:
//!
//! ```text
//! identity := expr '=' expr
//! expr     := factor ('*' factor)*      -- '*' associates to the left
//! factor   := letter | '(' expr ')'
//! ```
//!
//! Variables are single ASCII letters. Whitespace is ignored.

use std::fmt;

use thiserror::Error;

use crate::table::{Element, LoopTable};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// Index into the owning identity's variable list.
    Var(usize),
    Mul(Box<Term>, Box<Term>),
}

impl Term {
    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn evaluate(&self, table: &LoopTable, values: &[Element]) -> Element {
        match self {
            Term::Var(i) => values[*i],
            Term::Mul(a, b) => table.product(a.evaluate(table, values), b.evaluate(table, values)),
        }
    }

    fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            Term::Var(i) => {
                if !out.contains(i) {
                    out.push(*i)
                }
            }
            Term::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    fn compile(&self, ops: &mut Vec<Op>) {
        match self {
            Term::Var(i) => ops.push(Op::Var(*i as u8)),
            Term::Mul(a, b) => {
                a.compile(ops);
                b.compile(ops);
                ops.push(Op::Mul);
            }
        }
    }

    fn write(&self, vars: &[char], top: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "{}", vars[*i]),
            Term::Mul(a, b) => {
                if !top {
                    f.write_str("(")?;
                }
                a.write(vars, false, f)?;
                f.write_str("*")?;
                b.write(vars, false, f)?;
                if !top {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Var(u8),
    Mul,
}

/// Postfix program for fast repeated evaluation.
#[derive(Debug, Clone)]
struct Program(Vec<Op>);

impl Program {
    #[inline]
    fn run(&self, table: &LoopTable, values: &[Element], stack: &mut Vec<Element>) -> Element {
        stack.clear();
        for op in &self.0 {
            match *op {
                Op::Var(i) => stack.push(values[i as usize]),
                Op::Mul => {
                    let b = stack.pop().unwrap();
                    let a = stack.pop().unwrap();
                    stack.push(table.product(a, b));
                }
            }
        }
        stack[0]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    vars: Vec<char>,
    pub lhs: Term,
    pub rhs: Term,
    pub name: Option<String>,
}

impl Identity {
    /// Builds an identity from explicit terms over `vars`.
    pub fn new(vars: Vec<char>, lhs: Term, rhs: Term) -> Self {
        Identity {
            vars,
            lhs,
            rhs,
            name: None,
        }
    }

    pub fn parse(src: &str) -> Result<Self, ParseError> {
        let mut p = Parser {
            chars: src.chars().collect(),
            pos: 0,
            vars: Vec::new(),
        };
        let lhs = p.expr()?;
        p.skip_ws();
        if !p.eat('=') {
            return Err(p.error("expected `=`"));
        }
        let rhs = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(Identity::new(p.vars, lhs, rhs))
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Variables in order of first appearance; assignments enumerate with the
    /// first variable most significant.
    pub fn vars(&self) -> &[char] {
        &self.vars
    }

    /// Whether both sides mention the same variables.
    pub fn is_balanced(&self) -> bool {
        let mut a = Vec::new();
        let mut b = Vec::new();
        self.lhs.collect_vars(&mut a);
        self.rhs.collect_vars(&mut b);
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }

    pub fn evaluate(&self, table: &LoopTable, values: &[Element]) -> (Element, Element) {
        (
            self.lhs.evaluate(table, values),
            self.rhs.evaluate(table, values),
        )
    }

    /// Checks the identity under every assignment of elements to variables.
    /// On failure the lexicographically first counterexample is reported.
    pub fn satisfies(&self, table: &LoopTable) -> Verdict {
        let k = self.vars.len();
        let n = table.order();
        let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
        self.lhs.compile(&mut lhs);
        self.rhs.compile(&mut rhs);
        let (lhs, rhs) = (Program(lhs), Program(rhs));
        let mut values = vec![0 as Element; k];
        let mut stack = Vec::with_capacity(16);
        loop {
            if lhs.run(table, &values, &mut stack) != rhs.run(table, &values, &mut stack) {
                return Verdict::fails(Assignment::new(
                    self.vars
                        .iter()
                        .copied()
                        .zip(values.iter().copied())
                        .collect(),
                ));
            }
            // odometer increment, last variable fastest
            let mut i = k;
            loop {
                if i == 0 {
                    return Verdict::holds();
                }
                i -= 1;
                values[i] += 1;
                if (values[i] as usize) < n {
                    break;
                }
                values[i] = 0;
            }
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.lhs.write(&self.vars, true, f)?;
        f.write_str(" = ")?;
        self.rhs.write(&self.vars, true, f)
    }
}

impl std::str::FromStr for Identity {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Identity::parse(s)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    vars: Vec<char>,
}

impl Parser {
    fn error(&self, message: &str) -> ParseError {
        ParseError {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if !self.eat('*') {
                return Ok(acc);
            }
            let rhs = self.factor()?;
            acc = Term::mul(acc, rhs);
        }
    }

    fn factor(&mut self) -> Result<Term, ParseError> {
        self.skip_ws();
        match self.chars.get(self.pos).copied() {
            Some('(') => {
                self.pos += 1;
                let t = self.expr()?;
                self.skip_ws();
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(t)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                self.pos += 1;
                let idx = match self.vars.iter().position(|&v| v == c) {
                    Some(i) => i,
                    None => {
                        self.vars.push(c);
                        self.vars.len() - 1
                    }
                };
                Ok(Term::Var(idx))
            }
            Some(_) => Err(self.error("expected a variable or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// A variable assignment, in the identity's variable order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment(Vec<(char, Element)>);

impl Assignment {
    pub fn new(pairs: Vec<(char, Element)>) -> Self {
        Assignment(pairs)
    }

    pub fn pairs(&self) -> &[(char, Element)] {
        &self.0
    }

    pub fn get(&self, var: char) -> Option<Element> {
        self.0.iter().find(|(v, _)| *v == var).map(|&(_, e)| e)
    }

    pub fn values(&self) -> Vec<Element> {
        self.0.iter().map(|&(_, e)| e).collect()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}={e}")?;
        }
        Ok(())
    }
}

/// Outcome of checking a universally quantified property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub counterexample: Option<Assignment>,
}

impl Verdict {
    pub fn holds() -> Self {
        Verdict {
            holds: true,
            counterexample: None,
        }
    }

    pub fn fails(counterexample: Assignment) -> Self {
        Verdict {
            holds: false,
            counterexample: Some(counterexample),
        }
    }

    /// A failing verdict with nothing more specific to report.
    pub fn fails_bare() -> Self {
        Verdict {
            holds: false,
            counterexample: None,
        }
    }

    pub fn from_bool(holds: bool) -> Self {
        if holds {
            Self::holds()
        } else {
            Self::fails_bare()
        }
    }
}
