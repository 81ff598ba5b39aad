//! Polynomial text syntax: `3*x^2*y - 1/2*y^4`.
//!
//! Terms are joined by `+`/`-`, factors by `*`. A factor is an integer,
//! a fraction `a/b`, or a variable with an optional `^n`. Whitespace is
//! ignored.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::polynomial::Polynomial;
use crate::scalar::{Field, Scalar};

/// Parses a polynomial in the variables `names`. Errors report a 1-based column
/// on line 1.
pub fn parse_polynomial(text: &str, names: &[String], field: Field) -> Result<Polynomial> {
    parse_polynomial_at(text, names, field, 1, 1)
}

/// As [`parse_polynomial`], with positions offset to `line` and starting `column`.
pub(crate) fn parse_polynomial_at(
    text: &str,
    names: &[String],
    field: Field,
    line: usize,
    column: usize,
) -> Result<Polynomial> {
    let mut p = Parser {
        chars: text.char_indices().collect(),
        pos: 0,
        names,
        field,
        line,
        column,
    };
    p.polynomial()
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    names: &'a [String],
    field: Field,
    line: usize,
    column: usize,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        self.err_at(self.pos, message)
    }

    fn err_at(&self, pos: usize, message: impl Into<String>) -> Error {
        let col = self
            .chars
            .get(pos)
            .map(|&(i, _)| i)
            .unwrap_or_else(|| self.chars.last().map(|&(i, c)| i + c.len_utf8()).unwrap_or(0));
        Error::Parse {
            line: self.line,
            column: self.column + col,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn polynomial(&mut self) -> Result<Polynomial> {
        let nvars = self.names.len();
        let mut acc = Polynomial::zero(nvars, self.field);
        let mut first = true;
        loop {
            let negative = match self.peek() {
                Some('+') => {
                    self.bump();
                    false
                }
                Some('-') => {
                    self.bump();
                    true
                }
                None if first => return Err(self.err("empty polynomial")),
                None => break,
                Some(_) if first => false,
                Some(c) => return Err(self.err(format!("expected '+' or '-', found '{c}'"))),
            };
            first = false;
            let (m, mut c) = self.term()?;
            if negative {
                c = c.neg();
            }
            acc = &acc + &Polynomial::monomial(self.field, m, c);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<(Monomial, Scalar)> {
        let nvars = self.names.len();
        let mut mono = Monomial::one(nvars);
        let mut coeff = self.field.one();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let num = self.integer()?;
                    let value = if self.peek() == Some('/') {
                        self.bump();
                        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                            return Err(self.err("expected denominator after '/'"));
                        }
                        let den = self.integer()?;
                        self.field.from_ratio(&num, &den).map_err(|e| self.err(e.to_string()))?
                    } else {
                        self.field.from_bigint(&num)
                    };
                    coeff = coeff.mul(&value);
                }
                Some(c) if c.is_alphabetic() || c == '_' => {
                    let (start, name) = self.identifier();
                    let Some(idx) = self.names.iter().position(|n| *n == name) else {
                        return Err(self.err_at(start, format!("unknown variable '{name}'")));
                    };
                    let mut e = 1u32;
                    if self.peek() == Some('^') {
                        self.bump();
                        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                            return Err(self.err("expected exponent after '^'"));
                        }
                        let n = self.integer()?;
                        e = u32::try_from(&n).map_err(|_| self.err("exponent too large"))?;
                    }
                    mono = mono.mul(&Monomial::var(nvars, idx).pow(e));
                }
                Some(c) => return Err(self.err(format!("unexpected character '{c}'"))),
                None => return Err(self.err("unexpected end of input")),
            }
            if self.peek() == Some('*') {
                self.bump();
            } else {
                break;
            }
        }
        Ok((mono, coeff))
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        s.parse::<BigInt>().map_err(|_| self.err("malformed integer"))
    }

    fn identifier(&mut self) -> (usize, String) {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].1.is_alphanumeric() || self.chars[self.pos].1 == '_')
        {
            self.pos += 1;
        }
        let name: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        (start, name)
    }
}
