//! Polynomials in the generator names with rational coefficients, e.g.
//! `"2*p1^2 - 4*p2"` or `"(x + y/2)^2"`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cohom_ring::ring::{CohomClass, RingSpec};
use crate::error::{Error, Result};

type Class = CohomClass<BigRational>;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    ring: &'a Arc<RingSpec>,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse(format!(
            "{} at column {} in {:?}",
            msg.into(),
            self.pos + 1,
            self.src
        ))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..]
                .chars()
                .next()
                .map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        self.pos += self.src[self.pos..]
            .chars()
            .next()
            .map_or(0, char::len_utf8);
    }

    fn expr(&mut self) -> Result<Class> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.bump();
                    acc = acc.add(&self.term()?)?;
                }
                '-' => {
                    self.bump();
                    acc = acc.sub(&self.term()?)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Class> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.bump();
                    acc = acc.multiply(&self.unary()?)?;
                }
                '/' => {
                    self.bump();
                    let at = self.pos;
                    let d = self.unary()?;
                    let c0 = d.constant_term();
                    if d.max_degree().unwrap_or(0) > 0 || c0.is_zero() {
                        self.pos = at;
                        return Err(self.error("division only by a nonzero number"));
                    }
                    acc = acc.scale(&(BigRational::one() / c0));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Class> {
        match self.peek() {
            Some('-') => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Some('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Class> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let start = self.pos;
            while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected a nonnegative integer exponent"));
            }
            let e: u32 = self.src[start..self.pos]
                .parse()
                .map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Class> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.bump();
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit() || c == '.') {
                    self.pos += 1;
                }
                let q = parse_decimal(&self.src[start..self.pos]).ok_or_else(|| {
                    self.pos = start;
                    self.error("malformed number")
                })?;
                Ok(Class::constant(self.ring, q))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.src[self.pos..]
                    .starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_')
                {
                    self.pos += 1;
                }
                let src = self.src;
                let name = &src[start..self.pos];
                Class::generator(self.ring, name).map_err(|_| {
                    self.pos = start;
                    self.error(format!("unknown generator {name:?}"))
                })
            }
            Some(c) => Err(self.error(format!("unexpected {c:?}"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Exact value of a decimal literal such as `12`, `0.25` or `3.`.
fn parse_decimal(s: &str) -> Option<BigRational> {
    let (int, frac) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if (int.is_empty() && frac.is_empty()) || frac.contains('.') {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Some(BigRational::new(num, den))
}

/// Parse a rational polynomial in the generators of `ring`.
pub fn parse_class(ring: &Arc<RingSpec>, text: &str) -> Result<Class> {
    let mut p = Parser {
        src: text,
        pos: 0,
        ring,
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error("trailing input"));
    }
    Ok(out)
}

/// Parse a rational number written as `p`, `p/q` or a decimal.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let ring = RingSpec::point();
    let c = parse_class(&ring, text)?;
    Ok(c.constant_term())
}
