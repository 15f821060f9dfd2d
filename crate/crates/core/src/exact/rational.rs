//! Rational-number helpers: binomials, heights, p-valuations, and rational
//! reconstruction from a residue.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Height of a rational: max(|numerator|, denominator) in lowest terms.
pub fn height(q: &BigRational) -> BigUint {
    let n = q.numer().abs().to_biguint().unwrap();
    let d = q.denom().abs().to_biguint().unwrap();
    n.max(d)
}

/// p-adic valuation of a nonzero rational (negative when p divides the
/// denominator). Returns `None` for zero.
pub fn valuation(q: &BigRational, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v: i64 = 0;
    let mut n = q.numer().clone();
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    let mut d = q.denom().clone();
    while (&d % &p).is_zero() {
        d /= &p;
        v -= 1;
    }
    Some(v)
}

/// Reconstruct the unique rational r/s ≡ a (mod m) with |r|, |s| ≤ √(m/2),
/// if one exists. Classic half-extended Euclid, used to turn a p-adic
/// residue back into the small rational it came from.
pub fn rational_reconstruct(a: &BigUint, modulus: &BigUint) -> Option<BigRational> {
    let bound: BigInt = (modulus / 2u32).sqrt().into();
    let mut r0: BigInt = modulus.clone().into();
    let mut r1: BigInt = (a % modulus).into();
    let mut s0 = BigInt::zero();
    let mut s1 = BigInt::one();
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound {
        return None;
    }
    if r1.gcd(&s1) != BigInt::one() {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

/// Reconstruct a rational with an explicit height bound (numerator and
/// denominator both at most `bound`). Requires 2·bound² < m.
pub fn rational_reconstruct_bounded(
    a: &BigUint,
    modulus: &BigUint,
    bound: &BigUint,
) -> Option<BigRational> {
    let b: BigInt = bound.clone().into();
    if 2u32 * &b * &b >= BigInt::from(modulus.clone()) {
        return None;
    }
    let mut r0: BigInt = modulus.clone().into();
    let mut r1: BigInt = (a % modulus).into();
    let mut s0 = BigInt::zero();
    let mut s1 = BigInt::one();
    while r1 > b {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > b || r1.gcd(&s1) != BigInt::one() {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small() {
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert_eq!(binomial(5, 0), BigUint::one());
        assert_eq!(binomial(5, 6), BigUint::zero());
        assert_eq!(binomial(52, 26), "495918532948104".parse().unwrap());
    }

    #[test]
    fn valuation_signs() {
        assert_eq!(valuation(&rat(12, 1), 2), Some(2));
        assert_eq!(valuation(&rat(5, 9), 3), Some(-2));
        assert_eq!(valuation(&rat(0, 1), 3), None);
    }

    #[test]
    fn reconstruct_round_trip() {
        // 22/7 mod 10^9: residue a = 22 * inverse(7) mod m.
        let m = BigUint::from(1_000_000_007u64);
        // inverse of 7 mod m via Fermat
        let inv7 = BigUint::from(7u32).modpow(&(&m - 2u32), &m);
        let a = (BigUint::from(22u32) * inv7) % &m;
        let q = rational_reconstruct(&a, &m).unwrap();
        assert_eq!(q, rat(22, 7));
    }

    #[test]
    fn reconstruct_rejects_garbage() {
        // A residue chosen so no tiny rational matches.
        let m = BigUint::from(1_000_003u64);
        let a = BigUint::from(719_284u64);
        if let Some(q) = rational_reconstruct(&a, &m) {
            // If something is found it must actually reduce to a mod m.
            let n = q.numer();
            let d = q.denom();
            let lhs = (n % BigInt::from(m.clone()) + BigInt::from(m.clone()))
                % BigInt::from(m.clone());
            let rhs = (BigInt::from(a) * d) % BigInt::from(m.clone());
            let rhs = (rhs + BigInt::from(m.clone())) % BigInt::from(m.clone());
            assert_eq!(lhs, rhs);
        }
    }
}
