use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::field::{FieldKind, FieldScalar};
use super::monomial::Monomial;
use crate::error::{Error, Result};

/// Order of vanishing at the origin; the zero polynomial has infinite order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{}", v),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// A polynomial with nonzero coefficients, stored by monomial in ascending
/// graded order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    field: FieldKind,
    terms: BTreeMap<Monomial, FieldScalar>,
}

impl Poly {
    pub fn zero(nvars: usize, field: FieldKind) -> Self {
        Poly {
            nvars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: FieldScalar) -> Self {
        let mut p = Poly::zero(nvars, c.kind());
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize, field: FieldKind) -> Self {
        Poly::constant(nvars, field.one())
    }

    pub fn var(nvars: usize, field: FieldKind, i: usize) -> Self {
        Poly::monomial(Monomial::var(nvars, i), field.one())
    }

    pub fn monomial(m: Monomial, c: FieldScalar) -> Self {
        let mut p = Poly::zero(m.nvars(), c.kind());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from terms, combining repeated monomials.
    pub fn from_terms<I>(nvars: usize, field: FieldKind, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, FieldScalar)>,
    {
        let mut p = Poly::zero(nvars, field);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: &FieldScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = existing.add(c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldScalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// The minimal total degree of a term (the order at the origin).
    pub fn ord(&self) -> Valuation {
        match self.terms.keys().next() {
            Some(m) => Valuation::Finite(m.degree()),
            None => Valuation::Infinite,
        }
    }

    /// The maximal total degree of a term, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn is_constant(&self) -> bool {
        self.degree().is_none_or(|d| d == 0)
    }

    /// The constant term as a field element, when the polynomial is constant.
    pub fn as_constant(&self) -> Option<FieldScalar> {
        if self.is_constant() {
            Some(self.coeff(&Monomial::one(self.nvars)))
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        match (self.ord(), self.degree()) {
            (Valuation::Finite(a), Some(b)) => a == b,
            _ => true,
        }
    }

    /// Drops every term of total degree `>= n`.
    pub fn truncate(&self, n: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < n)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn homogeneous_part(&self, deg: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The homogeneous component of degree `ord(p)`.
    pub fn lowest_form(&self) -> Result<Poly> {
        match self.ord() {
            Valuation::Finite(d) => Ok(self.homogeneous_part(d)),
            Valuation::Infinite => Err(Error::ZeroPolynomial),
        }
    }

    fn check_compatible(&self, other: &Poly) {
        assert_eq!(self.nvars, other.nvars, "polynomials from different rings");
        assert_eq!(self.field, other.field, "polynomials over different fields");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldScalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars, self.field);
        }
        Poly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.mul(c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_compatible(other);
        let mut out = Poly::zero(self.nvars, self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), &c1.mul(c2));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars, self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Formats with the given variable names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        alloc::format!("{}", self.display(names))
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, names: &[String]) -> fmt::Result {
    let mut first = true;
    for (i, e) in m.exps().iter().enumerate() {
        if *e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        match names.get(i) {
            Some(n) => write!(f, "{}", n)?,
            None => write!(f, "x{}", i + 1)?,
        }
        if *e > 1 {
            write!(f, "^{}", e)?;
        }
    }
    Ok(())
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        // highest terms first, the usual reading order
        for (k, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if m.degree() == 0 {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write_monomial(f, m, self.names)?;
            } else {
                write!(f, "{}*", a)?;
                write_monomial(f, m, self.names)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = Vec::new();
        write!(f, "{}", self.display(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    fn x() -> Poly {
        Poly::var(2, FieldKind::Rationals, 0)
    }

    fn y() -> Poly {
        Poly::var(2, FieldKind::Rationals, 1)
    }

    #[test]
    fn cusp_basics() {
        let p = y().pow(2).sub(&x().pow(3));
        assert_eq!(p.ord(), Valuation::Finite(2));
        assert_eq!(p.lowest_form().unwrap(), y().pow(2));
        assert_eq!(p.truncate(3), y().pow(2));
        assert_eq!(p.truncate(10), p);
        assert_eq!(p.to_string_with(&names()), "-x^3 + y^2");
    }

    #[test]
    fn zero_and_truncation() {
        let z = Poly::zero(2, FieldKind::Rationals);
        assert_eq!(z.ord(), Valuation::Infinite);
        assert_eq!(z.lowest_form(), Err(Error::ZeroPolynomial));
        assert!(x().add(&x().pow(2)).truncate(1).is_zero());
    }

    #[test]
    fn unit_lowest_form() {
        let five = Poly::constant(2, FieldKind::Rationals.from_i64(5));
        let p = five.add(&x());
        assert_eq!(p.lowest_form().unwrap(), five);
        assert_eq!(p.ord(), Valuation::Finite(0));
    }
}
