//! Integer helpers: primality, factorization, p-adic valuations.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn ensure_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Prime factorization of `|n|` by trial division. `n` must be nonzero.
pub fn factorize(n: &BigInt) -> Result<BTreeMap<u64, u32>> {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut rest = n.abs();
    let mut out = BTreeMap::new();
    let mut d: u64 = 2;
    loop {
        let dd = BigInt::from(d) * BigInt::from(d);
        if dd > rest {
            break;
        }
        let big_d = BigInt::from(d);
        while (&rest % &big_d).is_zero() {
            rest /= &big_d;
            *out.entry(d).or_insert(0) += 1;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let p = rest.to_u64().ok_or(Error::CoefficientTooLarge)?;
        *out.entry(p).or_insert(0) += 1;
    }
    Ok(out)
}

pub fn pow(p: u64, k: u32) -> BigInt {
    num::pow(BigInt::from(p), k as usize)
}

/// Exponent of `p` in a nonzero integer; `None` for zero.
pub fn int_valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn valuation(q: &Rat, p: u64) -> Option<i64> {
    let num = int_valuation(q.numer(), p)?;
    let den = int_valuation(q.denom(), p).unwrap_or(0);
    Some(num as i64 - den as i64)
}

pub fn is_p_integral(q: &Rat, p: u64) -> bool {
    valuation(q, p).is_none_or(|v| v >= 0)
}

/// The rational `p^k` for any integer `k`.
pub fn p_power(p: u64, k: i64) -> Rat {
    let base = pow(p, k.unsigned_abs() as u32);
    if k >= 0 {
        Rat::from_integer(base)
    } else {
        Rat::new(BigInt::one(), base)
    }
}

/// Reduce a p-integral rational modulo `modulus = p^K`, returning a
/// representative in `[0, modulus)`.
pub fn reduce_p_integral(q: &Rat, modulus: &BigInt) -> BigInt {
    let den = q.denom();
    let inv = mod_inverse(den, modulus).expect("denominator must be prime to p");
    (q.numer() * inv).mod_floor(modulus)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if g.gcd.abs().is_one() {
        Some((g.x * g.gcd.signum()).mod_floor(m))
    } else {
        None
    }
}
