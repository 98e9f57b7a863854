//! Tame symbols `K_2(Q) -> F_p^*`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::finite_field::is_prime;
use crate::error::{Error, Result};

/// p-adic valuation of a nonzero integer and its p-free part.
fn split_valuation(x: &BigInt, p: u64) -> (i64, BigInt) {
    let p = BigInt::from(p);
    let mut v = 0;
    let mut rest = x.clone();
    loop {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            return (v, rest);
        }
        rest = q;
        v += 1;
    }
}

/// `v_p(x)` and the p-adic unit `x / p^{v_p(x)}`, as a residue in `F_p`.
fn valuation_and_unit(x: &BigRational, p: u64) -> (i64, u64) {
    let (vn, n) = split_valuation(x.numer(), p);
    let (vd, d) = split_valuation(x.denom(), p);
    let n = residue(&n, p);
    let d = residue(&d, p);
    (vn - vd, mul_mod(n, pow_mod(d, p - 2, p), p))
}

fn residue(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn pow_mod(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    let mut b = base % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        exp >>= 1;
    }
    acc
}

/// `x^e mod p` for a unit residue `x` and any integer exponent.
fn pow_signed(x: u64, e: i64, p: u64) -> u64 {
    let base = if e < 0 { pow_mod(x, p - 2, p) } else { x };
    pow_mod(base, e.unsigned_abs(), p)
}

/// The tame symbol `(-1)^{v(a)v(b)} a^{v(b)} b^{-v(a)} mod p`, a value in `1..p`.
pub fn tame_symbol(a: &BigRational, b: &BigRational, p: u64) -> Result<u64> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Precondition("tame symbol of zero".into()));
    }
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    if p == 2 {
        // F_2^* is trivial
        return Ok(1);
    }
    let (va, ua) = valuation_and_unit(a, p);
    let (vb, ub) = valuation_and_unit(b, p);
    // a^{v(b)} b^{-v(a)} = ua^{v(b)} ub^{-v(a)} p^{v(a)v(b) - v(b)v(a)}
    let mut value = mul_mod(pow_signed(ua, vb, p), pow_signed(ub, -va, p), p);
    if (va * vb).rem_euclid(2) == 1 {
        value = (p - value) % p;
    }
    Ok(value)
}

/// Primes dividing a nonzero integer, ascending. Integers beyond `u64` are rejected.
pub fn primes_dividing(x: &BigInt) -> Result<Vec<u64>> {
    let mut n = x
        .abs()
        .to_u64()
        .ok_or_else(|| Error::Precondition(format!("{x} is too large to factor")))?;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Direct evaluation of the defining formula with exact rationals.
    fn brute(a: &BigRational, b: &BigRational, p: u64) -> u64 {
        let v = |x: &BigRational| {
            let pb = BigInt::from(p);
            let count = |mut n: BigInt| {
                let mut k = 0i64;
                while (&n % &pb).is_zero() {
                    n /= &pb;
                    k += 1;
                }
                k
            };
            count(x.numer().clone()) - count(x.denom().clone())
        };
        let (va, vb) = (v(a), v(b));
        let sign = if (va * vb) % 2 == 0 { r(1, 1) } else { r(-1, 1) };
        let x = sign * num_traits::pow::Pow::pow(a, vb as i32) * num_traits::pow::Pow::pow(b, -va as i32);
        let n = x.numer().mod_floor(&BigInt::from(p)).to_u64().unwrap();
        let d = x.denom().mod_floor(&BigInt::from(p)).to_u64().unwrap();
        mul_mod(n, pow_mod(d, p - 2, p), p)
    }

    #[test]
    fn symbol_two_three_at_three() {
        assert_eq!(tame_symbol(&r(2, 1), &r(3, 1), 3).unwrap(), 2);
    }

    #[test]
    fn units_give_one() {
        assert_eq!(tame_symbol(&r(2, 5), &r(-7, 11), 13).unwrap(), 1);
    }

    #[test]
    fn agrees_with_brute_force() {
        let samples = [r(12, 5), r(-9, 4), r(25, 18), r(7, 1), r(1, 27), r(-50, 3)];
        for a in &samples {
            for b in &samples {
                for p in [3u64, 5, 7] {
                    assert_eq!(tame_symbol(a, b, p).unwrap(), brute(a, b, p), "{a} {b} {p}");
                }
            }
        }
    }

    #[test]
    fn errors() {
        assert!(tame_symbol(&r(0, 1), &r(3, 1), 3).is_err());
        assert!(tame_symbol(&r(2, 1), &r(3, 1), 9).is_err());
    }

    #[test]
    fn factoring() {
        assert_eq!(primes_dividing(&BigInt::from(-360)).unwrap(), vec![2, 3, 5]);
        assert!(primes_dividing(&BigInt::from(1)).unwrap().is_empty());
        assert_eq!(primes_dividing(&BigInt::from(97)).unwrap(), vec![97]);
    }
}
