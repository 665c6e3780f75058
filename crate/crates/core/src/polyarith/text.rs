//! Polynomial text syntax shared with the CLI: terms like
//! `x^9-3*x^8+2*x^5+1`, integer coefficients, `*` optional, `^` for powers,
//! single variable `x`, whitespace insensitive.

use std::fmt;
use std::str::FromStr;

use super::IntPolynomial;
use crate::numerics::Int;
use dashu_base::Abs;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid polynomial text at byte {position}: {message}")]
pub struct ParsePolynomialError {
    pub position: usize,
    pub message: String,
}

impl FromStr for IntPolynomial {
    type Err = ParsePolynomialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parser {
            bytes: s.as_bytes(),
            pos: 0,
        }
        .parse()
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> ParsePolynomialError {
        ParsePolynomialError {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<IntPolynomial, ParsePolynomialError> {
        let mut acc: Vec<Int> = Vec::new();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if first => return Err(self.err("empty input")),
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                Some(_) if first => 1,
                Some(_) => return Err(self.err("expected '+' or '-' between terms")),
            };
            let (coeff, power) = self.parse_term()?;
            let c = if sign < 0 { -coeff } else { coeff };
            if acc.len() <= power {
                acc.resize(power + 1, Int::ZERO);
            }
            acc[power] += c;
            first = false;
        }
        Ok(IntPolynomial::new(acc))
    }

    /// One term: `coef`, `coef [*] x [^k]`, or `x [^k]`.
    fn parse_term(&mut self) -> Result<(Int, usize), ParsePolynomialError> {
        let coeff = match self.peek() {
            Some(b) if b.is_ascii_digit() => Some(self.parse_uint()?),
            _ => None,
        };
        let has_var = match self.peek() {
            Some(b'*') => {
                if coeff.is_none() {
                    return Err(self.err("'*' without coefficient"));
                }
                self.pos += 1;
                match self.peek() {
                    Some(b'x') | Some(b'X') => {
                        self.pos += 1;
                        true
                    }
                    _ => return Err(self.err("expected variable after '*'")),
                }
            }
            Some(b'x') | Some(b'X') => {
                self.pos += 1;
                true
            }
            _ => false,
        };
        if !has_var {
            return match coeff {
                Some(c) => Ok((c, 0)),
                None => Err(self.err("expected coefficient or variable")),
            };
        }
        let power = match self.peek() {
            Some(b'^') => {
                self.pos += 1;
                self.skip_ws();
                let p = self.parse_uint()?;
                usize::try_from(&p).map_err(|_| self.err("exponent too large"))?
            }
            _ => 1,
        };
        Ok((coeff.unwrap_or(Int::ONE), power))
    }

    fn parse_uint(&mut self) -> Result<Int, ParsePolynomialError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Int::from_str(text).map_err(|_| self.err("bad integer"))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Int::ZERO;
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let a = c.clone().abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != Int::ONE {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
