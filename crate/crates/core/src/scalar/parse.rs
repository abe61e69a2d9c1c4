//! Parser for the textual scalar form produced by `Scalar::to_canonical_string`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Scalar, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseScalarError {
    #[error("unexpected character {found:?} at offset {offset}")]
    Unexpected { found: char, offset: usize },
    #[error("unexpected end of input")]
    Eof,
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("division by zero in scalar literal")]
    DivisionByZero,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

pub(super) fn parse_scalar(s: &str) -> Result<Scalar, ParseScalarError> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(ParseScalarError::Unexpected { found: p.src[p.pos] as char, offset: p.pos });
    }
    Ok(v)
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

    fn expr(&mut self) -> Result<Scalar, ParseScalarError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add_ref(&self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub_ref(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar, ParseScalarError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = acc.mul_ref(&self.unary()?);
                }
                b'/' => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = acc.checked_div(&d).map_err(|_| ParseScalarError::DivisionByZero)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Scalar, ParseScalarError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.unary()?.neg_ref());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Scalar, ParseScalarError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.unexpected();
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap();
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn unexpected<T>(&self) -> Result<T, ParseScalarError> {
        match self.src.get(self.pos) {
            Some(&c) => Err(ParseScalarError::Unexpected { found: c as char, offset: self.pos }),
            None => Err(ParseScalarError::Eof),
        }
    }

    fn atom(&mut self) -> Result<Scalar, ParseScalarError> {
        let c = self.peek().ok_or(ParseScalarError::Eof)?;
        if c == b'(' {
            self.pos += 1;
            let v = self.expr()?;
            if self.peek() != Some(b')') {
                return self.unexpected();
            }
            self.pos += 1;
            return Ok(v);
        }
        let start = self.pos;
        if c.is_ascii_digit() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let n: BigInt = std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap();
            return Ok(Scalar::from_rational(BigRational::from_integer(n)));
        }
        if c.is_ascii_alphabetic() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            return Var::from_name(name)
                .map(Scalar::var)
                .ok_or_else(|| ParseScalarError::UnknownVariable(name.to_string()));
        }
        self.unexpected()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_forms() {
        let s: Scalar = "(-eta + u - v)/(u - v)".parse().unwrap();
        let u = Scalar::var(Var::U);
        let v = Scalar::var(Var::V);
        assert_eq!(s, (u.clone() - v.clone() - Scalar::eta()) / (u - v));
        let c: Scalar = "eta/(2*xi)".parse().unwrap();
        assert_eq!(c.to_string(), "eta/(2*xi)");
        assert_eq!("-eta^2".parse::<Scalar>().unwrap(), -(Scalar::eta() * Scalar::eta()));
    }

    #[test]
    fn rejects_garbage() {
        assert!("eta +".parse::<Scalar>().is_err());
        assert!("zeta".parse::<Scalar>().is_err());
        assert!("1/0".parse::<Scalar>().is_err());
    }
}
