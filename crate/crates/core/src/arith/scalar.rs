//! Base fields: the rationals or a finite field.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::finite_field::{FiniteField, Fq};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BaseField {
    Rationals,
    Finite(FiniteField),
}

impl BaseField {
    pub fn finite(q: u64) -> Result<Self> {
        FiniteField::of_order(q).map(BaseField::Finite)
    }

    pub fn zero(&self) -> Scalar {
        match self {
            BaseField::Rationals => Scalar::Rational(BigRational::zero()),
            BaseField::Finite(f) => Scalar::Finite(f.zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            BaseField::Rationals => Scalar::Rational(BigRational::from_integer(n.into())),
            BaseField::Finite(f) => Scalar::Finite(f.from_i64(n)),
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            BaseField::Rationals => 0,
            BaseField::Finite(f) => f.characteristic(),
        }
    }

    /// `"Q"` or `"Fq:<p>^<e>"`.
    pub fn descriptor(&self) -> String {
        match self {
            BaseField::Rationals => "Q".into(),
            BaseField::Finite(f) => format!("Fq:{}^{}", f.characteristic(), f.degree()),
        }
    }

    pub fn parse_descriptor(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(BaseField::Rationals);
        }
        let body = s
            .strip_prefix("Fq:")
            .or_else(|| s.strip_prefix("F"))
            .ok_or_else(|| Error::Parse(format!("unknown field descriptor {s:?}")))?;
        let field = match body.split_once('^') {
            Some((p, e)) => {
                let p: u32 = p.parse().map_err(|_| Error::Parse(format!("bad prime in {s:?}")))?;
                let e: u8 = e.parse().map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
                FiniteField::new(p, e)?
            }
            None => {
                let q: u64 = body.parse().map_err(|_| Error::Parse(format!("bad order in {s:?}")))?;
                FiniteField::of_order(q)?
            }
        };
        Ok(BaseField::Finite(field))
    }

    /// Parses a scalar: `"a/b"` or `"a"` over Q; over `F_q` an integer or a
    /// bracketed coefficient list such as `"[1,2]"`.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        match self {
            BaseField::Rationals => parse_rational(s).map(Scalar::Rational),
            BaseField::Finite(f) => {
                if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                    let coeffs = inner
                        .split(',')
                        .filter(|t| !t.trim().is_empty())
                        .map(|t| {
                            t.trim()
                                .parse::<i64>()
                                .map_err(|_| Error::Parse(format!("bad coefficient {t:?}")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    f.from_coeffs(&coeffs).map(Scalar::Finite)
                } else {
                    let n: i64 = s
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad F_q element {s:?}")))?;
                    Ok(Scalar::Finite(f.from_i64(n)))
                }
            }
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

/// An exact element of a [`BaseField`].
///
/// Arithmetic between elements of different fields is a programming error and
/// panics; fallible entry points check fields up front.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Finite(Fq),
}

impl Scalar {
    pub fn field(&self) -> BaseField {
        match self {
            Scalar::Rational(_) => BaseField::Rationals,
            Scalar::Finite(x) => BaseField::Finite(x.field()),
        }
    }

    pub fn rational(n: i64, d: i64) -> Scalar {
        Scalar::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(x) => x.is_zero(),
            Scalar::Finite(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(x) => x.is_one(),
            Scalar::Finite(x) => x.is_one(),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Finite(a), Scalar::Finite(b)) => Scalar::Finite(a.add(b)),
            _ => panic!("mixed base fields in arithmetic"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Finite(a), Scalar::Finite(b)) => Scalar::Finite(a.mul(b)),
            _ => panic!("mixed base fields in arithmetic"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Finite(a) => Scalar::Finite(a.neg()),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(a) if a.is_zero() => None,
            Scalar::Rational(a) => Some(Scalar::Rational(a.recip())),
            Scalar::Finite(a) => a.inv().map(Scalar::Finite),
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        other
            .inv()
            .map(|inv| self.mul(&inv))
            .ok_or(Error::DivisionByZero)
    }

    pub fn pow(&self, exp: i64) -> Result<Scalar> {
        let base = if exp < 0 {
            self.inv().ok_or(Error::DivisionByZero)?
        } else {
            self.clone()
        };
        let mut acc = self.field().one();
        let mut b = base;
        let mut e = exp.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(a) => Some(a),
            Scalar::Finite(_) => None,
        }
    }

    /// Decimal rendering: `"n"` / `"n/d"` over Q.
    pub fn to_decimal(&self) -> String {
        self.to_string()
    }

    /// True when the printed form needs parentheses inside a product.
    pub(crate) fn is_compound(&self) -> bool {
        match self {
            Scalar::Rational(a) => !a.is_integer() || a.is_negative(),
            Scalar::Finite(x) => x.field().degree() > 1,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(a) if a.is_integer() => write!(f, "{}", a.numer()),
            Scalar::Rational(a) => write!(f, "{}/{}", a.numer(), a.denom()),
            Scalar::Finite(x) => write!(f, "{x}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_normalized() {
        let q = BaseField::Rationals;
        let a = q.parse_scalar("6/-4").unwrap();
        assert_eq!(a, Scalar::rational(-3, 2));
        assert_eq!(a.to_string(), "-3/2");
        assert_eq!(q.parse_scalar("4/2").unwrap().to_string(), "2");
        assert_eq!(q.parse_scalar("1/0"), Err(Error::DivisionByZero));
    }

    #[test]
    fn descriptors_round_trip() {
        for d in ["Q", "Fq:7^1", "Fq:2^4", "Fq:3^2", "Fq:101^1"] {
            assert_eq!(BaseField::parse_descriptor(d).unwrap().descriptor(), d);
        }
        assert_eq!(
            BaseField::parse_descriptor("F9").unwrap().descriptor(),
            "Fq:3^2"
        );
        assert!(BaseField::parse_descriptor("Fq:6^1").is_err());
        assert!(BaseField::parse_descriptor("R").is_err());
    }

    #[test]
    fn finite_scalars_parse() {
        let f9 = BaseField::parse_descriptor("Fq:3^2").unwrap();
        let x = f9.parse_scalar("[1,2]").unwrap();
        assert_eq!(x.to_string(), "[1, 2]");
        assert_eq!(f9.parse_scalar("-1").unwrap(), f9.from_i64(2));
        assert!(f9.parse_scalar("[1,2,0]").is_err());
    }

    #[test]
    fn powers() {
        let f = BaseField::finite(11).unwrap();
        let two = f.from_i64(2);
        assert_eq!(two.pow(10).unwrap(), f.one());
        assert_eq!(two.pow(-1).unwrap(), f.from_i64(6));
    }
}
