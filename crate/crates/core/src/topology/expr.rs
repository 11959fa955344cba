//! Class expressions such as `3*x^2 - 1/2*e1_2*y_1 + 2`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::ring::{CohClass, CohRing};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("column {col}: {message}")]
pub struct ExprError {
    /// 1-based column of the offending character.
    pub col: usize,
    pub message: String,
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    ring: &'a Arc<CohRing>,
}

pub fn parse_class(ring: &Arc<CohRing>, src: &str) -> Result<CohClass, ExprError> {
    let mut p = Parser { chars: src.chars().collect(), pos: 0, ring };
    let c = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err(format!("unexpected {:?}", p.chars[p.pos])));
    }
    Ok(c)
}

impl Parser<'_> {
    fn err(&self, message: String) -> ExprError {
        ExprError { col: self.pos + 1, message }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<CohClass, ExprError> {
        let mut acc = CohClass::zero(self.ring);
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    false
                }
                Some('-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => return Ok(acc),
            };
            first = false;
            let t = self.term()?;
            acc = if neg { &acc - &t } else { &acc + &t };
        }
    }

    fn term(&mut self) -> Result<CohClass, ExprError> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<CohClass, ExprError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'".into()));
                }
                self.pos += 1;
                self.power(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let d = if self.peek() == Some('/') {
                    self.pos += 1;
                    self.skip_ws();
                    let d = self.integer()?;
                    if d == BigInt::from(0) {
                        return Err(self.err("zero denominator".into()));
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                Ok(CohClass::constant(self.ring, BigRational::new(n, d)))
            }
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                let g = CohClass::generator(self.ring, &name).map_err(|_| ExprError {
                    col: start + 1,
                    message: format!("unknown generator {name}"),
                })?;
                self.power(g)
            }
            Some(c) => Err(self.err(format!("unexpected {c:?}"))),
            None => Err(self.err("unexpected end of expression".into())),
        }
    }

    fn power(&mut self, base: CohClass) -> Result<CohClass, ExprError> {
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let e = self.integer()?;
        let e: u32 = e.try_into().map_err(|_| self.err("exponent too large".into()))?;
        Ok(base.pow(e))
    }

    fn integer(&mut self) -> Result<BigInt, ExprError> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer".into()));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }
}
