//! Exact arithmetic: Q, finite fields, and polynomial rings over them.

pub mod finite_field;
pub mod poly;
pub mod scalar;

pub use finite_field::{FiniteField, Fq};
pub use poly::{Monomial, Poly, Ring};
pub use scalar::{BaseField, Scalar};

use rand::Rng;

/// A random element of `field`; rationals have numerator in `[-bound, bound]`
/// and denominator in `[1, bound]`.
pub fn random_scalar<R: Rng + ?Sized>(rng: &mut R, field: BaseField, bound: i64) -> Scalar {
    match field {
        BaseField::Rationals => Scalar::rational(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound)),
        BaseField::Finite(f) => {
            let coeffs: Vec<i64> = (0..f.degree())
                .map(|_| rng.gen_range(0..f.characteristic() as i64))
                .collect();
            Scalar::Finite(f.from_coeffs(&coeffs).unwrap())
        }
    }
}

/// A random nonzero element of `field`.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, field: BaseField, bound: i64) -> Scalar {
    loop {
        let x = random_scalar(rng, field, bound);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A random polynomial in `ring` with at most `max_terms` terms, each variable
/// of degree at most `max_deg`.
pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, ring: &Ring, max_terms: usize, max_deg: u32) -> Poly {
    let terms = (0..rng.gen_range(0..=max_terms)).map(|_| {
        let m: Monomial = (0..ring.nvars()).map(|_| rng.gen_range(0..=max_deg)).collect();
        (m, random_scalar(rng, ring.base(), 5))
    });
    let terms: Vec<_> = terms.collect();
    Poly::from_terms(ring.clone(), terms)
}
