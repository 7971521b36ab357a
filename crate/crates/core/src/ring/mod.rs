//! Exact coefficient fields, monomials, sparse polynomials and their text form.

pub mod field;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod rational;

pub use field::{FieldKind, FieldScalar};
pub use monomial::Monomial;
pub use parse::PolyRing;
pub use poly::{Poly, Valuation};
pub use rational::Rational;
