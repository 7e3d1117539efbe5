//! Recursive-descent parser for rational-function expressions.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := ('+' | '-') unary | power
//! power    := atom ('^' exponent)?
//! atom     := integer | variable | '(' expr ')'
//! exponent := integer | '(' integer ')'
//! ```
//!
//! Rationals are written as quotients (`3/4`). Exponents are nonnegative
//! integer literals; a second `^` needs parentheses around the first power.

use std::fmt;

use rug::{Integer, Rational};
use thiserror::Error;

use crate::arith::{Polynomial, RationalFunction};

const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: String, found: String },
    DivisionByZero,
    NegativeExponent,
    ExponentOnNonAtom,
    ExponentTooLarge,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at position {}: ", self.position)?;
        match &self.kind {
            ParseErrorKind::Syntax { expected, found } => {
                write!(f, "expected {expected}, found {found}")
            }
            ParseErrorKind::DivisionByZero => f.write_str("division by the zero polynomial"),
            ParseErrorKind::NegativeExponent => f.write_str("negative exponents are not allowed"),
            ParseErrorKind::ExponentOnNonAtom => {
                f.write_str("exponent on non-atom without parentheses")
            }
            ParseErrorKind::ExponentTooLarge => {
                write!(f, "exponent larger than {MAX_EXPONENT}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(Integer),
    Var(char),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "integer {n}"),
            Tok::Var(c) => write!(f, "'{c}'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn syntax(position: usize, expected: &str, found: impl fmt::Display) -> ParseError {
    ParseError {
        position,
        kind: ParseErrorKind::Syntax {
            expected: expected.to_string(),
            found: found.to_string(),
        },
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        i += 1;
        let tok = match c {
            c if c.is_whitespace() => continue,
            '0'..='9' => {
                let mut end = i;
                while end < chars.len() && chars[end].1.is_ascii_digit() {
                    end += 1;
                }
                let stop = chars.get(end).map_or(src.len(), |(p, _)| *p);
                i = end;
                Tok::Int(src[pos..stop].parse().expect("ascii digits"))
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_alphabetic() => Tok::Var(c),
            other => return Err(syntax(pos, "a number, variable, operator or parenthesis", format!("'{other}'"))),
        };
        out.push((pos, tok));
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    var: char,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<RationalFunction, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    self.bump();
                    let pos = self.pos();
                    let rhs = self.unary()?;
                    if rhs.is_zero() {
                        return Err(ParseError {
                            position: pos,
                            kind: ParseErrorKind::DivisionByZero,
                        });
                    }
                    acc = acc.checked_div(&rhs).expect("nonzero divisor");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let e = self.exponent()?;
        if *self.peek() == Tok::Caret {
            return Err(ParseError {
                position: self.pos(),
                kind: ParseErrorKind::ExponentOnNonAtom,
            });
        }
        Ok(base.pow(e as i64).expect("nonnegative exponent"))
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let pos = self.pos();
        let parenthesized = *self.peek() == Tok::LParen;
        if parenthesized {
            self.bump();
        }
        let value = match self.bump() {
            Tok::Int(n) => n,
            Tok::Minus => {
                return Err(ParseError {
                    position: pos,
                    kind: ParseErrorKind::NegativeExponent,
                })
            }
            other => return Err(syntax(self.toks[self.at.saturating_sub(1)].0, "a nonnegative integer exponent", other)),
        };
        if parenthesized {
            let p = self.pos();
            match self.bump() {
                Tok::RParen => {}
                other => return Err(syntax(p, "')'", other)),
            }
        }
        match value.to_u32() {
            Some(e) if e <= MAX_EXPONENT => Ok(e),
            _ => Err(ParseError {
                position: pos,
                kind: ParseErrorKind::ExponentTooLarge,
            }),
        }
    }

    fn atom(&mut self) -> Result<RationalFunction, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => Ok(RationalFunction::constant(Rational::from(n))),
            Tok::Var(c) if c == self.var => Ok(RationalFunction::x()),
            Tok::Var(c) => Err(syntax(pos, &format!("variable '{}'", self.var), format!("'{c}'"))),
            Tok::LParen => {
                let inner = self.expr()?;
                let p = self.pos();
                match self.bump() {
                    Tok::RParen => Ok(inner),
                    other => Err(syntax(p, "')'", other)),
                }
            }
            other => Err(syntax(pos, "a number, variable or '('", other)),
        }
    }
}

/// Parses `src` as a rational function in the single variable `var`.
pub fn parse_expression(src: &str, var: char) -> Result<RationalFunction, ParseError> {
    let mut p = Parser {
        toks: tokenize(src)?,
        at: 0,
        var,
    };
    let value = p.expr()?;
    match p.peek() {
        Tok::End => Ok(value),
        other => Err(syntax(p.pos(), "an operator or end of input", other)),
    }
}

/// Parses a polynomial; rejects expressions with a nonconstant denominator.
pub fn parse_polynomial(src: &str, var: char) -> Result<Polynomial, ParseError> {
    let f = parse_expression(src, var)?;
    if !f.is_polynomial() {
        return Err(syntax(0, "a polynomial", "a rational function"));
    }
    Ok(f.num().clone())
}
