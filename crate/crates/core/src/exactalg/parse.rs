//! Parser for the polynomial text grammar.
//!
//! Grammar: integer or rational literals (`3`, `3/11`), the variables
//! `x, y, z`, the operators `+ - * ^` (exponents are nonnegative integers),
//! and parentheses.  Whitespace is insignificant.

use num_bigint::BigInt;
use thiserror::Error;

use super::poly::{Form, Poly};
use super::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("polynomial is not homogeneous: degrees {low} and {high} both occur")]
    NotHomogeneous { low: u32, high: u32 },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: [&'a str; 3],
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FormError> {
        Err(FormError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Poly, FormError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.bump();
                self.term()?.neg()
            }
            Some(b'+') => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                b'-' => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, FormError> {
        let mut acc = self.factor()?;
        while let Some(b'*') = self.peek() {
            self.bump();
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, FormError> {
        let base = self.base()?;
        if let Some(b'^') = self.peek() {
            self.bump();
            let e = self.nat()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Poly, FormError> {
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let inner = self.expr()?;
                match self.bump() {
                    Some(b')') => Ok(inner),
                    _ => self.err("expected `)`"),
                }
            }
            Some(b'-') => {
                self.bump();
                Ok(self.factor()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                if let Some(b'/') = self.peek() {
                    self.bump();
                    let d = self.integer()?;
                    if d == BigInt::from(0) {
                        return self.err("zero denominator");
                    }
                    Ok(Poly::constant(Rational::new(n, d)))
                } else {
                    Ok(Poly::constant(Rational::from_integer(n)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.ident();
                for (i, v) in self.vars.iter().enumerate() {
                    if name == *v {
                        return Ok(Poly::variable(i));
                    }
                }
                Err(FormError::UnknownVariable(name))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn integer(&mut self) -> Result<BigInt, FormError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse::<BigInt>().unwrap())
    }

    fn nat(&mut self) -> Result<u32, FormError> {
        let n = self.integer()?;
        u32::try_from(n.clone()).map_or_else(|_| self.err("exponent too large"), Ok)
    }
}

/// Parse an arbitrary polynomial expression in the named variables.
pub fn parse_polynomial(text: &str, vars: [&str; 3]) -> Result<Poly, FormError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.err("trailing input");
    }
    Ok(poly)
}

/// Parse and expand an expression in `x, y, z`; errors if the result is not
/// homogeneous.
pub fn parse_form(text: &str) -> Result<Form, FormError> {
    parse_form_vars(text, ["x", "y", "z"])
}

/// Like [`parse_form`] with custom variable names.
pub fn parse_form_vars(text: &str, vars: [&str; 3]) -> Result<Form, FormError> {
    let poly = parse_polynomial(text, vars)?;
    let (low, high) = (poly.min_degree(), poly.total_degree());
    Form::from_poly(poly).ok_or(FormError::NotHomogeneous { low, high })
}

/// Parse an affine polynomial in `x, y` and homogenize it with `z`.
///
/// `dehomogenize(homogenize_affine(p)) == p` for every input.
pub fn homogenize_affine(text: &str) -> Result<Form, FormError> {
    let poly = parse_polynomial(text, ["x", "y", "z"])?;
    if poly.terms().any(|(&(_, _, c), _)| c > 0) {
        return Err(FormError::UnknownVariable("z".to_string()));
    }
    Ok(super::poly::homogenize(&poly))
}
