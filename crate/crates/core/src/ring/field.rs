//! Coefficient fields: the rationals and prime fields `F_p`.

use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::rational::Rational;

/// Which field the coefficients live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    /// `F_p` for a prime `p < 2^63`.
    Prime(u64),
}

/// A single field element. Elements of different fields never mix; doing so
/// is a programming error and panics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Q(Rational),
    Fp { value: u64, modulus: u64 },
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

impl FieldKind {
    /// Validates the prime for `Prime(p)`.
    pub fn prime(p: u64) -> Option<FieldKind> {
        (p < (1u64 << 63) && is_prime_u64(p)).then_some(FieldKind::Prime(p))
    }

    pub fn zero(self) -> FieldScalar {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldScalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> FieldScalar {
        match self {
            FieldKind::Rationals => FieldScalar::Q(Rational::from_int(n)),
            FieldKind::Prime(p) => FieldScalar::Fp {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(self, n: &BigInt) -> FieldScalar {
        match self {
            FieldKind::Rationals => FieldScalar::Q(Rational::from_big(n.clone().into())),
            FieldKind::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                FieldScalar::Fp {
                    value: r.to_u64().expect("residue fits"),
                    modulus: p,
                }
            }
        }
    }

    /// Maps a rational number into the field; `None` when the denominator
    /// vanishes modulo `p`.
    pub fn from_rational(self, r: &Rational) -> Option<FieldScalar> {
        match self {
            FieldKind::Rationals => Some(FieldScalar::Q(r.clone())),
            FieldKind::Prime(_) => {
                let (n, d) = r.numer_denom();
                let d = self.from_bigint(&d);
                let inv = d.inv()?;
                Some(self.from_bigint(&n).mul(&inv))
            }
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldKind::Rationals => 0,
            FieldKind::Prime(p) => p,
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "Fp {}", p),
        }
    }
}

impl FieldScalar {
    pub fn kind(&self) -> FieldKind {
        match self {
            FieldScalar::Q(_) => FieldKind::Rationals,
            FieldScalar::Fp { modulus, .. } => FieldKind::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Q(r) => r.is_zero(),
            FieldScalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Q(r) => r.is_one(),
            FieldScalar::Fp { value, .. } => *value == 1,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (FieldScalar::Q(a), FieldScalar::Q(b)) => FieldScalar::Q(a.add(b)),
            (FieldScalar::Fp { value: a, modulus: p }, FieldScalar::Fp { value: b, modulus: q })
                if p == q =>
            {
                let s = *a as u128 + *b as u128;
                FieldScalar::Fp {
                    value: (s % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => panic!("mixed fields"),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            FieldScalar::Q(a) => FieldScalar::Q(a.neg()),
            FieldScalar::Fp { value, modulus } => FieldScalar::Fp {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (FieldScalar::Q(a), FieldScalar::Q(b)) => FieldScalar::Q(a.mul(b)),
            (FieldScalar::Fp { value: a, modulus: p }, FieldScalar::Fp { value: b, modulus: q })
                if p == q =>
            {
                FieldScalar::Fp {
                    value: mul_mod(*a, *b, *p),
                    modulus: *p,
                }
            }
            _ => panic!("mixed fields"),
        }
    }

    /// `self - a * b`, the elimination step.
    pub fn sub_mul(&self, a: &Self, b: &Self) -> Self {
        match (self, a, b) {
            (
                FieldScalar::Fp { value: s, modulus: p },
                FieldScalar::Fp { value: x, .. },
                FieldScalar::Fp { value: y, .. },
            ) => {
                let prod = mul_mod(*x, *y, *p);
                FieldScalar::Fp {
                    value: if *s >= prod { s - prod } else { p - (prod - s) },
                    modulus: *p,
                }
            }
            _ => self.sub(&a.mul(b)),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        match self {
            FieldScalar::Q(a) => a.inv().map(FieldScalar::Q),
            FieldScalar::Fp { value, modulus } => {
                if *value == 0 {
                    None
                } else {
                    Some(FieldScalar::Fp {
                        value: pow_mod(*value, modulus - 2, *modulus),
                        modulus: *modulus,
                    })
                }
            }
        }
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    /// True when the printed form needs a leading minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            FieldScalar::Q(a) => a.is_negative(),
            FieldScalar::Fp { .. } => false,
        }
    }

    /// The rational value, when this is a rational scalar.
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            FieldScalar::Q(r) => Some(r),
            FieldScalar::Fp { .. } => None,
        }
    }

    pub fn abs_is_one(&self) -> bool {
        self.is_one() || self.neg().is_one()
    }

    /// Absolute value for printing (identity in `F_p`).
    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            FieldScalar::Q(r) => r.to_i64(),
            FieldScalar::Fp { value, .. } => i64::try_from(*value).ok(),
        }
    }

    /// Whether a signed integer represents this value (used by tests).
    pub fn equals_int(&self, n: &BigInt) -> bool {
        match self {
            FieldScalar::Q(r) => r.is_integer() && &r.numer_denom().0 == n,
            FieldScalar::Fp { modulus, .. } => *self == FieldKind::Prime(*modulus).from_bigint(n),
        }
    }

    pub fn is_positive_int(&self) -> bool {
        match self {
            FieldScalar::Q(r) => r.is_integer() && r.numer_denom().0.is_positive(),
            FieldScalar::Fp { .. } => true,
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Q(r) => write!(f, "{}", r),
            FieldScalar::Fp { value, .. } => write!(f, "{}", value),
        }
    }
}

impl fmt::Debug for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
