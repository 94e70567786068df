//! Recursive-descent parser for the textual formula grammar.
//!
//! ```text
//! hypersequent := sequent ("||" sequent)*
//! sequent      := list "|-" list
//! list         := (formula ("," formula)*)?
//! formula      := ("forall" | "exists") var "." formula | imp
//! imp          := or ("->" imp)?
//! or           := and ("\/" and)*
//! and          := unit ("&" unit)*
//! unit         := "bot" | atom | "(" formula ")" | quantified formula
//! var          := ident "!"?
//! ```
//!
//! In term position a bare identifier is a variable and `c()` is a constant.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::{Formula, Hypersequent, Sequent, Term, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Arity,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} error at {line}:{column}: {message}", match .kind { ParseErrorKind::Syntax => "syntax", ParseErrorKind::Arity => "arity" })]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the input.
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Arities seen so far. Sharing one signature across several parses keeps
/// symbol usage consistent, e.g. across every node of a proof file.
#[derive(Debug, Clone, Default)]
pub struct Signature {
    predicates: HashMap<String, usize>,
    functions: HashMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.predicates.get(name).copied()
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Bot,
    Forall,
    Exists,
    And,
    Or,
    Imp,
    Turnstile,
    Bar,
    Comma,
    Dot,
    Bang,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "identifier `{s}`"),
            Tok::Bot => "`bot`",
            Tok::Forall => "`forall`",
            Tok::Exists => "`exists`",
            Tok::And => "`&`",
            Tok::Or => "`\\/`",
            Tok::Imp => "`->`",
            Tok::Turnstile => "`|-`",
            Tok::Bar => "`||`",
            Tok::Comma => "`,`",
            Tok::Dot => "`.`",
            Tok::Bang => "`!`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

struct Parser<'a, 's> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: &'s mut Signature,
}

fn error_at(src: &str, offset: usize, kind: ParseErrorKind, message: String) -> ParseError {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |i| before.len() - i - 1) + 1;
    ParseError { kind, offset, line, column, message }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        // `#` starts a comment running to the end of the line
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let two = bytes.get(i..i + 2);
        let tok = match c {
            b'&' => Tok::And,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'!' => Tok::Bang,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'\\' if two == Some(b"\\/") => {
                i += 1;
                Tok::Or
            }
            b'-' if two == Some(b"->") => {
                i += 1;
                Tok::Imp
            }
            b'|' if two == Some(b"|-") => {
                i += 1;
                Tok::Turnstile
            }
            b'|' if two == Some(b"||") => {
                i += 1;
                Tok::Bar
            }
            c if c.is_ascii_alphabetic() => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                match &src[start..=i] {
                    "bot" => Tok::Bot,
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    s => Tok::Ident(s.to_string()),
                }
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(error_at(src, start, ParseErrorKind::Syntax, format!("unexpected character `{ch}`")));
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

impl<'a, 's> Parser<'a, 's> {
    fn new(src: &'a str, sig: &'s mut Signature) -> Result<Self, ParseError> {
        Ok(Parser { src, toks: lex(src)?, pos: 0, sig })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, message: String) -> Result<T, ParseError> {
        Err(error_at(self.src, self.offset(), ParseErrorKind::Syntax, message))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected {tok}, found {}", self.peek()))
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.fail(format!("unexpected {} after end of input", self.peek()))
        }
    }

    fn check_arity(&mut self, offset: usize, predicate: bool, name: &str, arity: usize) -> Result<(), ParseError> {
        let (table, what) =
            if predicate { (&mut self.sig.predicates, "predicate") } else { (&mut self.sig.functions, "function") };
        match table.get(name) {
            Some(&a) if a != arity => Err(error_at(
                self.src,
                offset,
                ParseErrorKind::Arity,
                format!("{what} `{name}` used with arity {arity}, previously {a}"),
            )),
            Some(_) => Ok(()),
            None => {
                table.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    fn var(&mut self) -> Result<Var, ParseError> {
        match self.bump() {
            Tok::Ident(name) => {
                if *self.peek() == Tok::Bang {
                    self.bump();
                    Ok(Var::global(name))
                } else {
                    Ok(Var::local(name))
                }
            }
            t => {
                self.pos -= usize::from(t != Tok::Eof);
                self.fail(format!("expected a variable, found {t}"))
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let at = self.offset();
        let Tok::Ident(name) = self.peek().clone() else {
            return self.fail(format!("expected a term, found {}", self.peek()));
        };
        self.bump();
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Term::Var(Var::global(name)))
            }
            Tok::LParen => {
                let args = self.args()?;
                self.check_arity(at, false, &name, args.len())?;
                Ok(Term::App(name, args))
            }
            _ => Ok(Term::Var(Var::local(name))),
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            args.push(self.term()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.term()?);
            }
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Forall | Tok::Exists => {
                let forall = self.bump() == Tok::Forall;
                let x = self.var()?;
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(if forall { Formula::forall(x, body) } else { Formula::exists(x, body) })
            }
            _ => self.imp(),
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.formula()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unit()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unit()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unit(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Bot => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::Forall | Tok::Exists => self.formula(),
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) => {
                self.bump();
                let args = if *self.peek() == Tok::LParen { self.args()? } else { Vec::new() };
                self.check_arity(at, true, &name, args.len())?;
                Ok(Formula::Atom(name, args))
            }
            t => self.fail(format!("expected a formula, found {t}")),
        }
    }

    fn list(&mut self) -> Result<Vec<Formula>, ParseError> {
        let mut out = Vec::new();
        if matches!(self.peek(), Tok::Turnstile | Tok::Bar | Tok::Eof) {
            return Ok(out);
        }
        out.push(self.formula()?);
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.formula()?);
        }
        Ok(out)
    }

    fn sequent(&mut self) -> Result<Sequent, ParseError> {
        let antecedent = self.list()?;
        self.expect(Tok::Turnstile)?;
        let succedent = self.list()?;
        Ok(Sequent { antecedent, succedent })
    }

    fn hypersequent(&mut self) -> Result<Hypersequent, ParseError> {
        let mut components = vec![self.sequent()?];
        while *self.peek() == Tok::Bar {
            self.bump();
            components.push(self.sequent()?);
        }
        Ok(Hypersequent { components })
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    parse_formula_with(text, &mut Signature::new())
}

pub fn parse_formula_with(text: &str, sig: &mut Signature) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    parse_term_with(text, &mut Signature::new())
}

pub fn parse_term_with(text: &str, sig: &mut Signature) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut sig = Signature::new();
    let mut p = Parser::new(text, &mut sig)?;
    let s = p.sequent()?;
    p.finish()?;
    Ok(s)
}

pub fn parse_hypersequent(text: &str) -> Result<Hypersequent, ParseError> {
    parse_hypersequent_with(text, &mut Signature::new())
}

pub fn parse_hypersequent_with(text: &str, sig: &mut Signature) -> Result<Hypersequent, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let h = p.hypersequent()?;
    p.finish()?;
    Ok(h)
}
