//! The line-oriented problem language:
//!
//! ```text
//! ring char=32003 vars=x,y
//! mod x^3-x^2*y
//! ideal x*y^2
//! ```
//!
//! `#` starts a comment. `mod` is optional and may repeat; `ring` and
//! `ideal` appear exactly once, `ring` first.

use std::fmt;
use std::sync::Arc;

use northcott_core::context::{RingContext, MAX_VARS};
use northcott_core::field::PrimeField;
use northcott_core::ideal::Ideal;
use northcott_core::monomial::Monomial;
use northcott_core::poly::Polynomial;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Semantic,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorKind::Syntax => "syntax",
            ErrorKind::Semantic => "semantic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind} error: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ErrorKind,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub characteristic: u64,
    pub vars: Vec<String>,
    pub relations: Vec<Polynomial>,
    pub gens: Vec<Polynomial>,
}

impl Problem {
    pub fn context(&self) -> Arc<RingContext> {
        RingContext::new(self.vars.clone(), self.characteristic, self.relations.clone())
            .expect("validated while parsing")
    }

    pub fn ideal(&self) -> Ideal {
        Ideal::new(&self.context(), self.gens.clone()).expect("validated while parsing")
    }

    /// No relations and every generator a single term.
    pub fn is_monomial(&self) -> bool {
        self.relations.is_empty() && self.gens.iter().all(|g| g.is_monomial())
    }

    /// Canonical text; parsing it gives back an equal problem.
    pub fn print(&self) -> String {
        let names: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        let base = RingContext::polynomial_ring(&names, self.characteristic)
            .expect("validated while parsing");
        let list = |ps: &[Polynomial]| {
            ps.iter()
                .map(|p| base.format_poly(p))
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut out = format!("ring char={} vars={}\n", self.characteristic, self.vars.join(","));
        if !self.relations.is_empty() {
            out.push_str(&format!("mod {}\n", list(&self.relations)));
        }
        out.push_str(&format!("ideal {}\n", list(&self.gens)));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Eq,
    Comma,
    Caret,
    Star,
    Plus,
    Minus,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Int(s) => write!(f, "'{s}'"),
            Tok::Eq => f.write_str("'='"),
            Tok::Comma => f.write_str("','"),
            Tok::Caret => f.write_str("'^'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
        }
    }
}

fn err(kind: ErrorKind, line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        kind,
        message: message.into(),
    }
}

fn lex(text: &str, line: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Int(chars[start..i].iter().collect()), col));
            continue;
        }
        let tok = match c {
            '=' => Tok::Eq,
            ',' => Tok::Comma,
            '^' => Tok::Caret,
            '*' => Tok::Star,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            _ => return Err(err(ErrorKind::Syntax, line, col, format!("unexpected character '{c}'"))),
        };
        out.push((tok, col));
        i += 1;
    }
    Ok(out)
}

struct Line {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Line {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        err(ErrorKind::Syntax, self.line, self.col(), message)
    }

    fn semantic_at(&self, col: usize, message: impl Into<String>) -> ParseError {
        err(ErrorKind::Semantic, self.line, col, message)
    }

    fn found(&self) -> String {
        self.peek().map_or("end of line".to_string(), |t| t.to_string())
    }

    fn next(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(format!("expected {want}, found {}", self.found())))
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        self.expect(Tok::Ident(word.into()))
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => match self.next() {
                Some((Tok::Ident(s), c)) => Ok((s, c)),
                _ => unreachable!(),
            },
            _ => Err(self.syntax(format!("expected {what}, found {}", self.found()))),
        }
    }

    fn int(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        match self.peek() {
            Some(Tok::Int(_)) => match self.next() {
                Some((Tok::Int(s), c)) => Ok((s, c)),
                _ => unreachable!(),
            },
            _ => Err(self.syntax(format!("expected {what}, found {}", self.found()))),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.syntax(format!("unexpected {t}"))),
        }
    }
}

struct Ring {
    characteristic: u64,
    field: PrimeField,
    vars: Vec<String>,
}

impl Ring {
    fn coefficient(&self, digits: &str) -> u32 {
        let p = self.characteristic;
        let v = digits
            .bytes()
            .fold(0u64, |acc, b| (acc * 10 + (b - b'0') as u64) % p);
        v as u32
    }

    fn term(&self, l: &mut Line) -> Result<(u32, Vec<u32>), ParseError> {
        let f = self.field;
        let mut coeff = 1u32;
        let mut exps = vec![0u32; self.vars.len()];
        loop {
            match l.peek() {
                Some(Tok::Int(_)) => {
                    let (digits, _) = l.int("a factor")?;
                    coeff = f.mul(coeff, self.coefficient(&digits));
                    if l.peek() == Some(&Tok::Caret) {
                        return Err(l.syntax("exponents apply to variables only"));
                    }
                }
                Some(Tok::Ident(_)) => {
                    let (name, col) = l.ident("a factor")?;
                    let v = self
                        .vars
                        .iter()
                        .position(|x| *x == name)
                        .ok_or_else(|| l.semantic_at(col, format!("unknown variable '{name}'")))?;
                    let mut e = 1u32;
                    if l.peek() == Some(&Tok::Caret) {
                        l.pos += 1;
                        let (digits, c) = l.int("an exponent")?;
                        e = digits
                            .parse()
                            .map_err(|_| l.semantic_at(c, format!("exponent {digits} is too large")))?;
                    }
                    exps[v] = exps[v]
                        .checked_add(e)
                        .ok_or_else(|| l.semantic_at(col, "exponent overflow"))?;
                }
                _ => return Err(l.syntax(format!("expected a factor, found {}", l.found()))),
            }
            if l.peek() == Some(&Tok::Star) {
                l.pos += 1;
            } else {
                return Ok((coeff, exps));
            }
        }
    }

    fn poly(&self, l: &mut Line) -> Result<Polynomial, ParseError> {
        let f = self.field;
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let negative = match l.peek() {
                Some(Tok::Plus) => {
                    l.pos += 1;
                    false
                }
                Some(Tok::Minus) => {
                    l.pos += 1;
                    true
                }
                _ if first => false,
                _ => break,
            };
            let (c, e) = self.term(l)?;
            let c = if negative { f.neg(c) } else { c };
            terms.push((Monomial::from_exponents(&e), c));
            first = false;
        }
        let ring = RingContext::polynomial_ring(
            &self.vars.iter().map(String::as_str).collect::<Vec<_>>(),
            self.characteristic,
        )
        .expect("validated ring")
        .ring();
        Ok(ring.from_terms(terms))
    }

    fn poly_list(&self, l: &mut Line) -> Result<Vec<(Polynomial, usize)>, ParseError> {
        let mut out = Vec::new();
        if l.peek().is_none() {
            return Err(l.syntax("expected at least one polynomial"));
        }
        loop {
            let col = l.col();
            out.push((self.poly(l)?, col));
            if l.peek() == Some(&Tok::Comma) {
                l.pos += 1;
            } else {
                l.finish()?;
                return Ok(out);
            }
        }
    }
}

fn ring_line(l: &mut Line, char_override: Option<u64>) -> Result<Ring, ParseError> {
    l.keyword("char")?;
    l.expect(Tok::Eq)?;
    let (digits, col) = l.int("a characteristic")?;
    let characteristic = match char_override {
        Some(p) => p,
        None => digits
            .parse::<u64>()
            .map_err(|_| l.semantic_at(col, format!("characteristic {digits} is too large")))?,
    };
    let field = PrimeField::new(characteristic).map_err(|e| l.semantic_at(col, e.to_string()))?;
    l.keyword("vars")?;
    l.expect(Tok::Eq)?;
    let mut vars: Vec<String> = Vec::new();
    loop {
        let (name, c) = l.ident("a variable name")?;
        if ["ring", "char", "vars", "mod", "ideal"].contains(&name.as_str()) {
            return Err(l.semantic_at(c, format!("'{name}' is reserved")));
        }
        if vars.contains(&name) {
            return Err(l.semantic_at(c, format!("duplicate variable '{name}'")));
        }
        vars.push(name);
        if vars.len() > MAX_VARS {
            return Err(l.semantic_at(c, format!("at most {MAX_VARS} variables")));
        }
        if l.peek() == Some(&Tok::Comma) {
            l.pos += 1;
        } else {
            break;
        }
    }
    l.finish()?;
    Ok(Ring {
        characteristic,
        field,
        vars,
    })
}

pub fn parse_problem(text: &str) -> Result<Problem, ParseError> {
    parse_problem_with_char(text, None)
}

/// Like [`parse_problem`], reading coefficients modulo `char_override`
/// when given instead of the declared characteristic.
pub fn parse_problem_with_char(
    text: &str,
    char_override: Option<u64>,
) -> Result<Problem, ParseError> {
    let mut ring: Option<Ring> = None;
    let mut relations = Vec::new();
    let mut gens: Option<Vec<Polynomial>> = None;
    let mut last_line = 1;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last_line = line;
        let body = raw.split('#').next().unwrap_or("");
        let toks = lex(body, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut l = Line {
            toks,
            pos: 0,
            line,
            end_col: body.chars().count() + 1,
        };
        let (head, col) = l.ident("'ring', 'mod' or 'ideal'")?;
        match (head.as_str(), &ring) {
            ("ring", None) => ring = Some(ring_line(&mut l, char_override)?),
            ("ring", Some(_)) => return Err(err(ErrorKind::Syntax, line, col, "duplicate ring line")),
            ("mod" | "ideal", None) => {
                return Err(err(ErrorKind::Syntax, line, col, "the ring line must come first"))
            }
            ("mod", Some(r)) => {
                for (p, c) in r.poly_list(&mut l)? {
                    if p.constant_term() != 0 {
                        return Err(l.semantic_at(c, "relations must vanish at the origin"));
                    }
                    relations.push(p);
                }
            }
            ("ideal", Some(r)) => {
                if gens.is_some() {
                    return Err(err(ErrorKind::Syntax, line, col, "duplicate ideal line"));
                }
                gens = Some(r.poly_list(&mut l)?.into_iter().map(|(p, _)| p).collect());
            }
            _ => {
                return Err(err(
                    ErrorKind::Syntax,
                    line,
                    col,
                    format!("expected 'ring', 'mod' or 'ideal', found '{head}'"),
                ))
            }
        }
    }
    let ring = ring.ok_or_else(|| err(ErrorKind::Syntax, last_line, 1, "missing ring line"))?;
    let gens = gens.ok_or_else(|| err(ErrorKind::Syntax, last_line, 1, "missing ideal line"))?;
    Ok(Problem {
        characteristic: ring.characteristic,
        vars: ring.vars,
        relations,
        gens,
    })
}
