//! Expression language for polynomials.
//!
//! ```text
//! expr   := ["+"|"-"] term (("+"|"-") term)*
//! term   := factor ("*" factor)*
//! factor := atom ["^" ["-"] int]
//! atom   := number | "i" | "e(" freq ")" | "(" expr ")" | name
//! number := digits ["." digits] ["/" digits] ["i"]
//! ```
//!
//! The same syntax describes trigonometric polynomials, where names refer to
//! stored polynomials and `e(freq)` is a character, and Laurent polynomials
//! in `z1, …, zM`. Output of `render` on either type parses back to the same
//! value.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::freqmod::{freq_parse, GeneratorTable};
use crate::rational::{coeff, parse_decimal, parse_rational, Coeff};
use crate::torus::LaurentPoly;
use crate::trigpoly::TrigPoly;

/// Largest accepted `|n|` in `x^n`.
pub const MAX_POWER: i64 = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(Coeff),
    /// Raw frequency text inside `e(…)`, with its byte offset.
    Character(String, usize),
    Name(String, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

impl<'a> Parser<'a> {
    fn bytes(&self) -> &'a [u8] {
        self.text.as_bytes()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes().get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = if self.eat(b'-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.eat(b'*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let negative = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.bytes()[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(syntax(start, "expected an integer exponent"));
        }
        let n: i64 = self.text[start..self.pos]
            .parse()
            .ok()
            .filter(|n| *n <= MAX_POWER)
            .ok_or_else(|| syntax(start, format!("exponent above {MAX_POWER}")))?;
        Ok(Expr::Pow(Box::new(base), if negative { -n } else { n }))
    }

    fn atom(&mut self) -> Result<Expr> {
        let c = self.peek().ok_or_else(|| syntax(self.pos, "unexpected end of input"))?;
        let start = self.pos;
        if c == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            if !self.eat(b')') {
                return Err(syntax(self.pos, "expected `)`"));
            }
            return Ok(inner);
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.number();
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < self.text.len()
                && (self.bytes()[self.pos].is_ascii_alphanumeric() || self.bytes()[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let name = &self.text[start..self.pos];
            if name == "i" {
                return Ok(Expr::Number(coeff(BigRational::zero(), BigRational::one())));
            }
            if name == "e" && self.peek() == Some(b'(') {
                self.pos += 1;
                let inner = self.pos;
                let close = self.text[inner..]
                    .find(')')
                    .ok_or_else(|| syntax(self.text.len(), "unclosed `e(`"))?;
                self.pos = inner + close + 1;
                return Ok(Expr::Character(self.text[inner..inner + close].to_string(), inner));
            }
            return Ok(Expr::Name(name.to_string(), start));
        }
        Err(syntax(start, format!("unexpected `{}`", c as char)))
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let b = self.bytes();
        while self.pos < b.len() && (b[self.pos].is_ascii_digit() || b[self.pos] == b'.') {
            self.pos += 1;
        }
        let mut value = parse_decimal(&self.text[start..self.pos])
            .ok_or_else(|| syntax(start, format!("malformed number `{}`", &self.text[start..self.pos])))?;
        if self.pos < b.len() && b[self.pos] == b'/' {
            self.pos += 1;
            let d = self.pos;
            while self.pos < b.len() && b[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if d == self.pos {
                return Err(syntax(d, "expected a denominator"));
            }
            let den = parse_rational(&self.text[d..self.pos])?;
            if den.is_zero() {
                return Err(Error::MalformedRational(self.text[start..self.pos].to_string()));
            }
            value /= den;
        }
        if self.pos < b.len() && b[self.pos] == b'i' {
            let next = b.get(self.pos + 1).copied();
            if !next.is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
                self.pos += 1;
                return Ok(Expr::Number(coeff(BigRational::zero(), value)));
            }
        }
        Ok(Expr::Number(coeff(value, BigRational::zero())))
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser { text, pos: 0 };
    let e = p.expr()?;
    if let Some(c) = p.peek() {
        return Err(syntax(p.pos, format!("unexpected `{}`", c as char)));
    }
    Ok(e)
}

/// Evaluates to a trigonometric polynomial; `lookup` resolves names.
pub fn eval_trig(e: &Expr, table: &Arc<GeneratorTable>, lookup: &dyn Fn(&str) -> Option<TrigPoly>) -> Result<TrigPoly> {
    let rec = |x: &Expr| eval_trig(x, table, lookup);
    match e {
        Expr::Number(c) => Ok(TrigPoly::constant(table, c.clone())),
        Expr::Character(text, pos) => {
            let f = freq_parse(text, table).map_err(|err| match err {
                Error::Syntax { pos: p, msg } => Error::Syntax { pos: pos + p, msg },
                other => other,
            })?;
            Ok(TrigPoly::character(table, f))
        }
        Expr::Name(name, _) => match lookup(name) {
            Some(p) => Ok(p.widened(table)),
            None => Err(Error::UnknownName(name.clone())),
        },
        Expr::Neg(x) => Ok(rec(x)?.neg()),
        Expr::Add(a, b) => rec(a)?.add(&rec(b)?),
        Expr::Sub(a, b) => rec(a)?.sub(&rec(b)?),
        Expr::Mul(a, b) => rec(a)?.mul(&rec(b)?),
        Expr::Pow(a, n) => rec(a)?.pow(*n),
    }
}

/// Evaluates to a Laurent polynomial in `z1, …, z{dim}`.
pub fn eval_laurent(e: &Expr, dim: usize) -> Result<LaurentPoly> {
    let rec = |x: &Expr| eval_laurent(x, dim);
    match e {
        Expr::Number(c) => Ok(LaurentPoly::constant(dim, c.clone())),
        Expr::Character(_, pos) => Err(syntax(*pos, "`e(…)` is not allowed in a torus polynomial")),
        Expr::Name(name, _) => {
            let index = name
                .strip_prefix('z')
                .and_then(|k| k.parse::<usize>().ok())
                .filter(|k| (1..=dim).contains(k))
                .ok_or_else(|| Error::UnknownName(name.clone()))?;
            Ok(LaurentPoly::var(dim, index - 1))
        }
        Expr::Neg(x) => Ok(rec(x)?.neg()),
        Expr::Add(a, b) => rec(a)?.add(&rec(b)?),
        Expr::Sub(a, b) => rec(a)?.sub(&rec(b)?),
        Expr::Mul(a, b) => rec(a)?.mul(&rec(b)?),
        Expr::Pow(a, n) => rec(a)?.pow(*n),
    }
}

pub fn parse_trig(text: &str, table: &Arc<GeneratorTable>, lookup: &dyn Fn(&str) -> Option<TrigPoly>) -> Result<TrigPoly> {
    eval_trig(&parse(text)?, table, lookup)
}

pub fn parse_laurent(text: &str, dim: usize) -> Result<LaurentPoly> {
    eval_laurent(&parse(text)?, dim)
}
