//! Recursive-descent parser for the bracket text format, e.g.
//! `2*[x,[x,[x,y]]] + 3*[y,[x,[x,y]]]` or `-[x,y]`.

use super::{lie_reduce_mod_p, LiePoly};
use crate::error::{Error, Result};
use crate::scalars::{FpScalar, Rational, Scalar};
use crate::words::Alphabet;

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    alphabet: &'a Alphabet,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", b as char))
        }
    }

    fn parse_uint(&mut self) -> Result<i64> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a number");
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("digits are utf8")
            .parse::<i64>()
            .map_err(|e| Error::Parse {
                pos: start,
                msg: e.to_string(),
            })
    }

    fn parse_coeff(&mut self, neg: bool) -> Result<Rational> {
        let num = self.parse_uint()?;
        let den = if self.eat(b'/') { self.parse_uint()? } else { 1 };
        if den == 0 {
            return self.err("zero denominator");
        }
        Ok(Rational::new(if neg { -num } else { num }, den))
    }

    fn parse_ident(&mut self) -> Result<String> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a generator name");
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("idents are utf8")
            .to_string())
    }

    /// factor := letter | '[' expr ',' expr ']'
    fn parse_factor(&mut self) -> Result<LiePoly<Rational>> {
        self.skip_ws();
        if self.eat(b'[') {
            let left = self.parse_expr()?;
            self.skip_ws();
            self.expect(b',')?;
            let right = self.parse_expr()?;
            self.skip_ws();
            self.expect(b']')?;
            return Ok(left.bracket(&right));
        }
        let name = self.parse_ident()?;
        match self.alphabet.index_of(&name) {
            Some(l) => Ok(LiePoly::generator(
                self.alphabet.clone(),
                l,
                Rational::one(),
            )),
            None => self.err(format!("unknown generator '{name}'")),
        }
    }

    /// term := [coeff '*'] factor | '0'
    fn parse_term(&mut self, neg: bool) -> Result<LiePoly<Rational>> {
        self.skip_ws();
        if self.peek().is_some_and(|b| b.is_ascii_digit()) {
            let c = self.parse_coeff(neg)?;
            self.skip_ws();
            if self.eat(b'*') {
                let f = self.parse_factor()?;
                return Ok(f.scale(&c));
            }
            if c.is_zero() {
                return Ok(LiePoly::zero(self.alphabet.clone()));
            }
            return self.err("a bare nonzero constant is not a Lie element");
        }
        let f = self.parse_factor()?;
        Ok(if neg { f.neg() } else { f })
    }

    /// expr := ['-'] term (('+'|'-') term)*
    fn parse_expr(&mut self) -> Result<LiePoly<Rational>> {
        self.skip_ws();
        let lead_neg = self.eat(b'-');
        let mut acc = self.parse_term(lead_neg)?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.parse_term(false)?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.add(&self.parse_term(true)?);
                }
                _ => return Ok(acc),
            }
        }
    }
}

/// Parse a bracket expression over the given alphabet with rational
/// coefficients.
pub fn parse_lie(text: &str, alphabet: &Alphabet) -> Result<LiePoly<Rational>> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        alphabet,
    };
    let poly = p.parse_expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return p.err("trailing input");
    }
    Ok(poly)
}

/// Parse a bracket expression and reduce the coefficients mod p.
pub fn parse_lie_fp(text: &str, alphabet: &Alphabet, p: u64) -> Result<LiePoly<FpScalar>> {
    lie_reduce_mod_p(&parse_lie(text, alphabet)?, p)
}
