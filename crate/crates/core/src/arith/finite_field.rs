//! Prime fields `F_p` and the small extension fields `F_{p^e}` with `q <= 16`.
//!
//! Extension-field elements are coefficient vectors over `F_p` reduced modulo a
//! fixed Conway polynomial, so every element has exactly one representation.

use std::fmt;

use crate::error::{Error, Result};

/// Largest extension degree in the modulus table.
pub const MAX_DEGREE: usize = 4;

/// Conway polynomials for the non-prime `q <= 16`, coefficients low to high, monic.
const CONWAY_TABLE: &[(u32, u8, &[u32])] = &[
    (2, 2, &[1, 1, 1]),    // x^2 + x + 1
    (2, 3, &[1, 1, 0, 1]), // x^3 + x + 1
    (2, 4, &[1, 1, 0, 0, 1]),
    (3, 2, &[2, 2, 1]), // x^2 + 2x + 2
];

/// A finite field `F_q`, `q = p^e`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FiniteField {
    p: u32,
    e: u8,
    // monic modulus without its leading 1, low to high
    modulus: [u32; MAX_DEGREE],
}

impl FiniteField {
    /// `F_p` for a prime `p < 2^31`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn new(p: u32, e: u8) -> Result<Self> {
        if !is_prime(p as u64) || p >= (1 << 31) {
            return Err(Error::UnsupportedField(format!("{p} is not a prime below 2^31")));
        }
        if e == 0 {
            return Err(Error::UnsupportedField("extension degree 0".into()));
        }
        let mut modulus = [0u32; MAX_DEGREE];
        if e > 1 {
            let (_, _, coeffs) = CONWAY_TABLE
                .iter()
                .find(|(tp, te, _)| *tp == p && *te == e)
                .ok_or_else(|| {
                    Error::UnsupportedField(format!(
                        "F_{{{p}^{e}}}: extension fields are tabulated only for q <= 16"
                    ))
                })?;
            modulus[..e as usize].copy_from_slice(&coeffs[..e as usize]);
        }
        Ok(FiniteField { p, e, modulus })
    }

    /// Field of order `q`; accepts any prime, or a tabulated prime power.
    pub fn of_order(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::UnsupportedField(format!("{q} is not a prime power")));
        }
        let p = smallest_prime_factor(q);
        let mut e = 0u8;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::UnsupportedField(format!("{q} is not a prime power")));
        }
        let p = u32::try_from(p).map_err(|_| Error::UnsupportedField(format!("{q} too large")))?;
        Self::new(p, e)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        self.e
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.e as u32)
    }

    pub fn zero(&self) -> Fq {
        Fq { field: *self, c: [0; MAX_DEGREE] }
    }

    pub fn one(&self) -> Fq {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Fq {
        let mut c = [0; MAX_DEGREE];
        c[0] = n.rem_euclid(self.p as i64) as u32;
        Fq { field: *self, c }
    }

    /// Builds an element from coefficients (low to high) of a polynomial in the generator.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<Fq> {
        if coeffs.len() > self.e as usize {
            return Err(Error::Parse(format!(
                "{} coefficients given for F_{{{}^{}}}",
                coeffs.len(),
                self.p,
                self.e
            )));
        }
        let mut c = [0; MAX_DEGREE];
        for (slot, &v) in c.iter_mut().zip(coeffs) {
            *slot = v.rem_euclid(self.p as i64) as u32;
        }
        Ok(Fq { field: *self, c })
    }

    /// All `q` elements in a fixed order (zero first).
    pub fn elements(&self) -> Vec<Fq> {
        let q = self.order();
        (0..q)
            .map(|mut k| {
                let mut c = [0; MAX_DEGREE];
                for slot in c.iter_mut().take(self.e as usize) {
                    *slot = (k % self.p as u64) as u32;
                    k /= self.p as u64;
                }
                Fq { field: *self, c }
            })
            .collect()
    }

    pub fn units(&self) -> Vec<Fq> {
        self.elements().into_iter().filter(|x| !x.is_zero()).collect()
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.e)
    }
}

/// An element of a [`FiniteField`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fq {
    field: FiniteField,
    c: [u32; MAX_DEGREE],
}

impl Fq {
    pub fn field(&self) -> FiniteField {
        self.field
    }

    /// Coefficients low to high, length `e`.
    pub fn coeffs(&self) -> &[u32] {
        &self.c[..self.field.e as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }

    fn check(&self, other: &Fq) {
        assert_eq!(self.field, other.field, "mixed finite fields in arithmetic");
    }

    pub fn add(&self, other: &Fq) -> Fq {
        self.check(other);
        let p = self.field.p as u64;
        let mut c = [0; MAX_DEGREE];
        for k in 0..MAX_DEGREE {
            c[k] = ((self.c[k] as u64 + other.c[k] as u64) % p) as u32;
        }
        Fq { field: self.field, c }
    }

    pub fn neg(&self) -> Fq {
        let p = self.field.p;
        let mut c = self.c;
        for x in c.iter_mut() {
            if *x != 0 {
                *x = p - *x;
            }
        }
        Fq { field: self.field, c }
    }

    pub fn sub(&self, other: &Fq) -> Fq {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Fq) -> Fq {
        self.check(other);
        let p = self.field.p as u64;
        let e = self.field.e as usize;
        if e == 1 {
            let mut c = [0; MAX_DEGREE];
            c[0] = ((self.c[0] as u64 * other.c[0] as u64) % p) as u32;
            return Fq { field: self.field, c };
        }
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..e {
            for j in 0..e {
                prod[i + j] = (prod[i + j] + self.c[i] as u64 * other.c[j] as u64) % p;
            }
        }
        // x^e = -(m_0 + m_1 x + ... + m_{e-1} x^{e-1})
        for k in (e..2 * e - 1).rev() {
            let lead = prod[k];
            if lead == 0 {
                continue;
            }
            prod[k] = 0;
            for (t, &m) in self.field.modulus[..e].iter().enumerate() {
                let idx = k - e + t;
                prod[idx] = (prod[idx] + (p - lead) * m as u64) % p;
            }
        }
        let mut c = [0; MAX_DEGREE];
        for k in 0..e {
            c[k] = prod[k] as u32;
        }
        Fq { field: self.field, c }
    }

    pub fn pow(&self, mut exp: u64) -> Fq {
        let mut base = *self;
        let mut acc = self.field.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Option<Fq> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.field.order() - 2))
        }
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.e == 1 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "{:?}", self.coeffs())
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    smallest_prime_factor(n) == n
}

pub(crate) fn smallest_prime_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}
