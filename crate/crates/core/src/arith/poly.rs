//! Sparse multivariate polynomials over a [`BaseField`].
//!
//! A [`Ring`] is a base field together with an ordered list of indeterminates;
//! with no indeterminates it is the field itself, so matrix entries over `k`
//! and over `k[T]` share one representation. Terms are kept in a `BTreeMap`
//! keyed by exponent vectors, which orders monomials lexicographically along
//! the declared variable list. Zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use super::scalar::{BaseField, Scalar};
use crate::error::{Error, Result};

pub type Monomial = SmallVec<[u32; 4]>;

/// A polynomial ring `k[x_1, ..., x_m]` (possibly with `m = 0`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Ring {
    field: BaseField,
    vars: Arc<[String]>,
}

impl Ring {
    pub fn new<S: Into<String>>(field: BaseField, vars: impl IntoIterator<Item = S>) -> Self {
        Ring {
            field,
            vars: vars.into_iter().map(Into::into).collect(),
        }
    }

    /// The field itself, viewed as a ring with no indeterminates.
    pub fn field(field: BaseField) -> Self {
        Ring::new::<String>(field, [])
    }

    pub fn univariate(field: BaseField, var: &str) -> Self {
        Ring::new(field, [var])
    }

    pub fn base(&self) -> BaseField {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_field(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn zero(&self) -> Poly {
        Poly {
            ring: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> Poly {
        self.constant(self.field.one())
    }

    pub fn from_i64(&self, n: i64) -> Poly {
        self.constant(self.field.from_i64(n))
    }

    pub fn constant(&self, c: Scalar) -> Poly {
        assert_eq!(c.field(), self.field, "constant from a different field");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::from_elem(0, self.nvars()), c);
        }
        Poly {
            ring: self.clone(),
            terms,
        }
    }

    /// The indeterminate at position `idx`.
    pub fn var(&self, idx: usize) -> Poly {
        self.monomial(self.field.one(), idx, 1)
    }

    pub fn var_named(&self, name: &str) -> Result<Poly> {
        self.var_index(name)
            .map(|i| self.var(i))
            .ok_or_else(|| Error::RingMismatch(format!("no variable {name} in {}", self.descriptor())))
    }

    /// `c * x_idx^exp`.
    pub fn monomial(&self, c: Scalar, idx: usize, exp: u32) -> Poly {
        let mut m = Monomial::from_elem(0, self.nvars());
        m[idx] = exp;
        Poly::from_terms(self.clone(), [(m, c)])
    }

    /// Descriptor such as `"Q"`, `"Fq:7^1"` or `"poly:Q:T,S"`.
    pub fn descriptor(&self) -> String {
        if self.is_field() {
            self.field.descriptor()
        } else {
            format!("poly:{}:{}", self.field.descriptor(), self.vars.join(","))
        }
    }

    pub fn parse_descriptor(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.strip_prefix("poly:") {
            None => Ok(Ring::field(BaseField::parse_descriptor(s)?)),
            Some(rest) => {
                let (field, vars) = rest
                    .rsplit_once(':')
                    .ok_or_else(|| Error::Parse(format!("ring descriptor {s:?} lacks variables")))?;
                let vars: Vec<String> = vars.split(',').map(|v| v.trim().to_string()).collect();
                if vars.iter().any(|v| v.is_empty()) {
                    return Err(Error::Parse(format!("empty variable name in {s:?}")));
                }
                for (i, v) in vars.iter().enumerate() {
                    if vars[..i].contains(v) {
                        return Err(Error::Parse(format!("repeated variable {v} in {s:?}")));
                    }
                }
                Ok(Ring::new(BaseField::parse_descriptor(field)?, vars))
            }
        }
    }

    pub(crate) fn ensure_same(&self, other: &Ring) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!(
                "{} vs {}",
                self.descriptor(),
                other.descriptor()
            )))
        }
    }
}

/// An element of a [`Ring`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: Ring,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    /// Collects terms, summing repeated monomials and dropping zeros.
    pub fn from_terms(ring: Ring, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut map: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), ring.nvars(), "exponent vector length");
            assert_eq!(c.field(), ring.base(), "coefficient from a different field");
            accumulate(&mut map, m, c);
        }
        Poly { ring, terms: map }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value if the polynomial is constant (zero included).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(self.ring.base().zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Inverse in the ring: only nonzero constants are units.
    pub fn inv(&self) -> Option<Poly> {
        let c = self.as_constant()?;
        c.inv().map(|i| self.ring.constant(i))
    }

    pub fn is_unit(&self) -> bool {
        self.as_constant().is_some_and(|c| !c.is_zero())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Leading coefficient in the lexicographic order.
    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.terms.values().next_back()
    }

    fn check(&self, other: &Poly) {
        if self.ring != other.ring {
            panic!(
                "ring mismatch in arithmetic: {} vs {}",
                self.ring.descriptor(),
                other.ring.descriptor()
            );
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check(other);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            accumulate(&mut terms, m.clone(), c.clone());
        }
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.check(other);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            accumulate(&mut terms, m.clone(), c.neg());
        }
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return self.ring.zero();
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x.mul(c))).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return self.ring.zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb.iter()).map(|(a, b)| a + b).collect();
                accumulate(&mut terms, m, ca.mul(cb));
            }
        }
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division in `k[T]` (or exact division in `k`).
    ///
    /// Returns `(q, r)` with `self = q * divisor + r` and `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.ring.ensure_same(&divisor.ring)?;
        if self.ring.nvars() > 1 {
            return Err(Error::UnsupportedRing(format!(
                "Euclidean division needs a univariate ring, got {}",
                self.ring.descriptor()
            )));
        }
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ring = &self.ring;
        let lead_inv = divisor.leading_coeff().unwrap().inv().expect("field coefficient");
        let dg = divisor.degree().unwrap();
        let mut quotient = ring.zero();
        let mut rem = self.clone();
        while let Some(rd) = rem.degree() {
            if rd < dg {
                break;
            }
            let coeff = rem.leading_coeff().unwrap().mul(&lead_inv);
            let step = if ring.is_field() {
                ring.constant(coeff)
            } else {
                ring.monomial(coeff, 0, rd - dg)
            };
            rem = rem.sub(&step.mul(divisor));
            quotient = quotient.add(&step);
        }
        Ok((quotient, rem))
    }

    /// Ring homomorphism sending variable `i` to `images[i]`, all in `target`,
    /// and acting as the identity on coefficients.
    pub fn compose(&self, target: &Ring, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.ring.nvars() {
            return Err(Error::SizeMismatch(format!(
                "{} images for {} variables",
                images.len(),
                self.ring.nvars()
            )));
        }
        if target.base() != self.ring.base() {
            return Err(Error::RingMismatch("composition changes the base field".into()));
        }
        for img in images {
            target.ensure_same(&img.ring)?;
        }
        // cache powers of each image
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![target.one(), p.clone()]).collect();
        let mut acc = target.zero();
        for (m, c) in &self.terms {
            let mut term = target.constant(c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e as usize]);
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Substitutes field values for some variables; the result lives in the
    /// ring of the remaining variables (in their original order).
    pub fn eval(&self, assignment: &[(&str, Scalar)]) -> Result<Poly> {
        for (name, value) in assignment {
            if self.ring.var_index(name).is_none() {
                return Err(Error::RingMismatch(format!(
                    "no variable {name} in {}",
                    self.ring.descriptor()
                )));
            }
            if value.field() != self.ring.base() {
                return Err(Error::RingMismatch(format!("value for {name} from another field")));
            }
        }
        let remaining: Vec<&String> = self
            .ring
            .vars()
            .iter()
            .filter(|v| !assignment.iter().any(|(name, _)| name == v))
            .collect();
        let target = Ring::new(self.ring.base(), remaining.iter().map(|v| v.as_str()));
        let images: Vec<Poly> = self
            .ring
            .vars()
            .iter()
            .map(|v| match assignment.iter().find(|(name, _)| name == v) {
                Some((_, value)) => target.constant(value.clone()),
                None => target.var(target.var_index(v).unwrap()),
            })
            .collect();
        self.compose(&target, &images)
    }

    /// Evaluates a univariate polynomial at a point, returning a field element.
    pub fn eval_at(&self, value: &Scalar) -> Result<Scalar> {
        match self.ring.nvars() {
            0 => Ok(self.as_constant().unwrap()),
            1 => {
                let name = self.ring.vars()[0].clone();
                let p = self.eval(&[(name.as_str(), value.clone())])?;
                Ok(p.as_constant().unwrap())
            }
            _ => Err(Error::UnsupportedRing("eval_at needs a univariate ring".into())),
        }
    }

    /// Reinterprets the polynomial in a ring with the same field and number of
    /// variables, matching variables by position.
    pub fn rename_into(&self, target: &Ring) -> Result<Poly> {
        if target.base() != self.ring.base() || target.nvars() != self.ring.nvars() {
            return Err(Error::RingMismatch(format!(
                "cannot rename {} into {}",
                self.ring.descriptor(),
                target.descriptor()
            )));
        }
        Ok(Poly {
            ring: target.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Embeds an element of `k` (a constant) into any ring over `k`.
    pub fn lift_constant(&self, target: &Ring) -> Result<Poly> {
        let c = self
            .as_constant()
            .ok_or_else(|| Error::RingMismatch("non-constant element cannot be lifted".into()))?;
        if c.field() != target.base() {
            return Err(Error::RingMismatch("different base fields".into()));
        }
        Ok(target.constant(c))
    }
}

fn accumulate(terms: &mut BTreeMap<Monomial, Scalar>, m: Monomial, c: Scalar) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let sum = o.get().add(&c);
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = m
                .iter()
                .zip(self.ring.vars())
                .filter(|(e, _)| **e > 0)
                .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else if c.is_compound() {
                write!(f, "({c})*{}", vars.join("*"))?;
            } else {
                write!(f, "{c}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.ring.descriptor())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qt() -> Ring {
        Ring::univariate(BaseField::Rationals, "T")
    }

    #[test]
    fn divmod_one_step() {
        let r = qt();
        let t = r.var(0);
        let f = t.pow(2).add(&r.one());
        let (q, rem) = f.divmod(&t).unwrap();
        assert_eq!(q, t);
        assert_eq!(rem, r.one());
    }

    #[test]
    fn divmod_by_unit() {
        let r = qt();
        let t = r.var(0);
        let f = t.pow(5).sub(&t.scale(&Scalar::rational(3, 7)));
        let (q, rem) = f.divmod(&r.one()).unwrap();
        assert_eq!(q, f);
        assert!(rem.is_zero());
    }

    #[test]
    fn divmod_over_f5() {
        let f5 = BaseField::finite(5).unwrap();
        let r = Ring::univariate(f5, "T");
        let t = r.var(0);
        let f = t.pow(3).scale(&f5.from_i64(2)).add(&t);
        let g = t.scale(&f5.from_i64(3)).add(&r.one());
        let (q, rem) = f.divmod(&g).unwrap();
        assert_eq!(q.mul(&g).add(&rem), f);
        assert!(rem.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn divmod_errors() {
        let r = qt();
        assert_eq!(r.one().divmod(&r.zero()), Err(Error::DivisionByZero));
        let other = Ring::univariate(BaseField::finite(7).unwrap(), "T");
        assert!(matches!(r.one().divmod(&other.one()), Err(Error::RingMismatch(_))));
        let two = Ring::new(BaseField::Rationals, ["T", "S"]);
        assert!(matches!(
            two.var(0).divmod(&two.var(1)),
            Err(Error::UnsupportedRing(_))
        ));
    }

    #[test]
    fn eval_examples() {
        let r = qt();
        let t = r.var(0);
        let f = t.mul(&r.one().sub(&t));
        assert!(f.eval_at(&Scalar::rational(1, 1)).unwrap().is_zero());
        assert_eq!(f.eval_at(&Scalar::rational(1, 2)).unwrap(), Scalar::rational(1, 4));
    }

    #[test]
    fn partial_eval_keeps_remaining_variables() {
        let r = Ring::new(BaseField::Rationals, ["T", "S"]);
        let f = r.var(0).mul(&r.var(1)).add(&r.var(1));
        let g = f.eval(&[("T", Scalar::rational(2, 1))]).unwrap();
        let s_ring = Ring::univariate(BaseField::Rationals, "S");
        assert_eq!(g, s_ring.var(0).scale(&Scalar::rational(3, 1)));
    }

    #[test]
    fn display() {
        let r = qt();
        let t = r.var(0);
        let f = t.pow(2).scale(&Scalar::rational(-1, 2)).add(&r.from_i64(3));
        assert_eq!(f.to_string(), "(-1/2)*T^2 + 3");
    }

    #[test]
    fn descriptors() {
        let r = Ring::parse_descriptor("poly:Fq:7^1:T,S").unwrap();
        assert_eq!(r.nvars(), 2);
        assert_eq!(r.descriptor(), "poly:Fq:7^1:T,S");
        assert!(Ring::parse_descriptor("poly:Q:T,T").is_err());
        assert!(Ring::parse_descriptor("poly:Q").is_err());
    }
}
