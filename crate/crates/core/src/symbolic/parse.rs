//! Text format for polynomials.
//!
//! Accepts sums of products such as `2*x1*y1 - 3/4*x2^2 + 0.5`, with
//! parentheses, integer powers and division by constants. Decimal literals
//! (including exponents like `1e-3`) are read exactly. When a chart supplies
//! variable names those are the only identifiers accepted; otherwise the
//! generic names `x0, x1, ...` address variables by index.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Polynomial, Rational};
use crate::error::{Error, Result};

pub fn parse_polynomial(text: &str, dimension: usize, names: &[&str]) -> Result<Polynomial> {
    if !names.is_empty() && names.len() != dimension {
        return Err(Error::DimensionMismatch {
            expected: dimension,
            found: names.len(),
        });
    }
    let mut parser = Parser {
        input: text,
        chars: text.char_indices().collect(),
        pos: 0,
        dimension,
        names,
    };
    let p = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.chars.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(p)
}

/// Exact rational from a decimal literal such as `-1.25e-3` or `7`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let p = parse_polynomial(text, 0, &[])?;
    p.as_constant().ok_or_else(|| Error::Parse {
        input: text.to_string(),
        position: 0,
        message: "not a constant".into(),
    })
}

struct Parser<'a> {
    input: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    dimension: usize,
    names: &'a [&'a str],
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        let position = self
            .chars
            .get(self.pos)
            .map(|&(b, _)| b)
            .unwrap_or(self.input.len());
        Error::Parse {
            input: self.input.to_string(),
            position,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, ch: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let divisor = self.unary()?;
                match divisor.as_constant() {
                    Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                    Some(_) => return Err(self.error("division by zero")),
                    None => return Err(self.error("division by a non-constant")),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected a non-negative integer exponent"));
            }
            let digits: String = self.chars[start..self.pos]
                .iter()
                .map(|&(_, c)| c)
                .collect();
            let e: u32 = digits
                .parse()
                .map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let value = self.number()?;
                Ok(Polynomial::constant(self.dimension, value))
            }
            Some(c) if c.is_alphabetic() || c == '_' => self.variable(),
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Rational> {
        let mut mantissa = String::new();
        let mut frac_digits = 0i64;
        let mut seen_dot = false;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                mantissa.push(c);
                if seen_dot {
                    frac_digits += 1;
                }
            } else if c == '.' && !seen_dot {
                seen_dot = true;
            } else {
                break;
            }
            self.pos += 1;
        }
        if mantissa.is_empty() {
            return Err(self.error("malformed number"));
        }
        let mut exponent = 0i64;
        if matches!(self.peek(), Some('e') | Some('E')) {
            let save = self.pos;
            self.pos += 1;
            let mut sign = 1i64;
            if self.peek() == Some('-') {
                sign = -1;
                self.pos += 1;
            } else if self.peek() == Some('+') {
                self.pos += 1;
            }
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            if start == self.pos {
                // not an exponent after all (e.g. `2e` is rejected later)
                self.pos = save;
            } else {
                let digits: String = self.chars[start..self.pos]
                    .iter()
                    .map(|&(_, c)| c)
                    .collect();
                exponent = sign
                    * digits
                        .parse::<i64>()
                        .map_err(|_| self.error("exponent too large"))?;
            }
        }
        let numer: BigInt = mantissa
            .parse()
            .map_err(|_| self.error("malformed number"))?;
        let shift = exponent - frac_digits;
        if shift.unsigned_abs() > 4096 {
            return Err(self.error("decimal exponent out of range"));
        }
        let ten = BigInt::from(10);
        let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
        Ok(if shift >= 0 {
            Rational::from_integer(numer * scale)
        } else {
            Rational::new(numer, scale)
        })
    }

    fn variable(&mut self) -> Result<Polynomial> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        let ident: String = self.chars[start..self.pos]
            .iter()
            .map(|&(_, c)| c)
            .collect();
        let index = if self.names.is_empty() {
            ident
                .strip_prefix('x')
                .filter(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
                .and_then(|d| d.parse::<usize>().ok())
        } else {
            self.names.iter().position(|n| *n == ident)
        };
        match index {
            Some(i) if i < self.dimension => {
                Ok(Polynomial::variable(self.dimension, i).expect("checked index"))
            }
            _ => {
                self.pos = start;
                Err(self.error(&format!("unknown variable `{ident}`")))
            }
        }
    }
}
