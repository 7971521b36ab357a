//! Polynomial text input.
//!
//! ```text
//! expr   = term { ("+" | "-") term } ;
//! term   = unary { ("*" | "/") unary } ;
//! unary  = ("+" | "-") unary | power ;
//! power  = atom [ "^" integer ] ;
//! atom   = integer | identifier | "(" expr ")" ;
//! ```
//!
//! Divisors must evaluate to nonzero constants.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::field::FieldKind;
use super::monomial::Monomial;
use super::poly::Poly;
use crate::error::{Error, ParseErrorKind, Result};

/// Variable names plus coefficient field: everything needed to read and
/// print polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    vars: Vec<String>,
    field: FieldKind,
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PolyRing {
    pub fn new(vars: Vec<String>, field: FieldKind) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::InvalidInput("at least one variable is required".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            if !valid_name(v) {
                return Err(Error::InvalidInput(alloc::format!("bad variable name `{}`", v)));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidInput(alloc::format!("duplicate variable `{}`", v)));
            }
        }
        Ok(PolyRing { vars, field })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn with_field(&self, field: FieldKind) -> PolyRing {
        PolyRing {
            vars: self.vars.clone(),
            field,
        }
    }

    pub fn zero(&self) -> Poly {
        Poly::zero(self.nvars(), self.field)
    }

    pub fn one(&self) -> Poly {
        Poly::one(self.nvars(), self.field)
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(self.nvars(), self.field, i)
    }

    pub fn parse(&self, text: &str) -> Result<Poly> {
        let mut p = Parser {
            ring: self,
            src: text.as_bytes(),
            pos: 0,
        };
        let value = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err(ParseErrorKind::Syntax("unexpected trailing input".into())));
        }
        Ok(value)
    }

    pub fn print(&self, p: &Poly) -> String {
        p.to_string_with(&self.vars)
    }
}

struct Parser<'a> {
    ring: &'a PolyRing,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, kind: ParseErrorKind) -> Error {
        Error::Parse {
            position: self.pos,
            kind,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                b'/' => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    let c = d.as_constant().ok_or(Error::Parse {
                        position: at,
                        kind: ParseErrorKind::NonConstantDivisor,
                    })?;
                    let inv = c.inv().ok_or(Error::Parse {
                        position: at,
                        kind: ParseErrorKind::DivisionByZero,
                    })?;
                    acc = acc.scale(&inv);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.err(ParseErrorKind::BadExponent));
            }
            let e: u32 = digits
                .parse()
                .ok()
                .filter(|e| *e < (1 << 16))
                .ok_or_else(|| self.err(ParseErrorKind::BadExponent))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<Poly> {
        let n = self.ring.nvars();
        let field = self.ring.field;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err(ParseErrorKind::Syntax("expected `)`".into())));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                let value: BigInt = digits.parse().expect("ascii digits");
                Ok(Poly::constant(n, field.from_bigint(&value)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                match self.ring.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(Poly::monomial(Monomial::var(n, i), field.one())),
                    None => Err(Error::Parse {
                        position: start,
                        kind: ParseErrorKind::UnknownVariable(name),
                    }),
                }
            }
            Some(c) => Err(self.err(ParseErrorKind::Syntax(alloc::format!(
                "unexpected character `{}`",
                c as char
            )))),
            None => Err(self.err(ParseErrorKind::Syntax("unexpected end of input".to_string()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ring() -> PolyRing {
        PolyRing::new(vec!["x".into(), "y".into()], FieldKind::Rationals).unwrap()
    }

    #[test]
    fn examples() {
        let r = ring();
        let p = r.parse("y^2 - x^3").unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.ord().finite(), Some(2));
        assert!(r.parse("0").unwrap().is_zero());
        assert_eq!(r.parse("(x+y)^2 - x^2 - 2*x*y").unwrap(), r.parse("y^2").unwrap());
        assert_eq!(r.parse("x/2 + x/2").unwrap(), r.parse("x").unwrap());
        assert_eq!(r.parse("-x^2").unwrap(), r.parse("0 - x*x").unwrap());
    }

    #[test]
    fn errors() {
        let r = ring();
        assert!(matches!(
            r.parse("x + z"),
            Err(Error::Parse { kind: ParseErrorKind::UnknownVariable(_), position: 4 })
        ));
        assert!(matches!(
            r.parse("1/x"),
            Err(Error::Parse { kind: ParseErrorKind::NonConstantDivisor, .. })
        ));
        assert!(matches!(
            r.parse("x/(1-1)"),
            Err(Error::Parse { kind: ParseErrorKind::DivisionByZero, .. })
        ));
        assert!(matches!(r.parse("x +"), Err(Error::Parse { .. })));
        assert!(matches!(r.parse("(x"), Err(Error::Parse { .. })));
        assert!(matches!(r.parse("x^y"), Err(Error::Parse { kind: ParseErrorKind::BadExponent, .. })));
    }

    #[test]
    fn print_roundtrip() {
        let r = ring();
        for s in ["y^2 - x^3", "1/2*x*y - 3", "-x + 7/3*y^4", "0"] {
            let p = r.parse(s).unwrap();
            assert_eq!(r.parse(&r.print(&p)).unwrap(), p);
        }
        assert_eq!(r.print(&r.parse("1/2*x*y").unwrap()), "1/2*x*y");
    }

    #[test]
    fn prime_field_printing() {
        let r = ring().with_field(FieldKind::Prime(7));
        let p = r.parse("-x + 1/2").unwrap();
        assert_eq!(r.print(&p), "6*x + 4");
        assert_eq!(r.parse(&r.print(&p)).unwrap(), p);
    }
}
