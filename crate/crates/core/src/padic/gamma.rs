//! The p-adic gamma function on Z_p (odd p).
//!
//! Γ_p(0) = 1 and Γ_p(x+1) = -x·Γ_p(x) for p ∤ x, -Γ_p(x) for p | x. On
//! non-negative integers this gives Γ_p(n) = (-1)^n Π_{0<j<n, p∤j} j, and
//! since |Γ_p(x) - Γ_p(y)| ≤ |x - y|, the value modulo p^w only depends on
//! the argument modulo p^w. So Γ_p at any x ∈ Z_p is the sign-adjusted
//! partial product at the integer representative of x mod p^w.
//!
//! The partial products are shared: a batch of arguments is sorted and one
//! pass over 1..p^w snapshots the running product at each requested point.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::number::Padic;
use crate::error::{Error, Result};

/// Largest modulus the linear product walk will attempt. The walk is O(p^w),
/// so this is a compute guard as much as a u64-overflow guard.
const MAX_MODULUS: u64 = 1 << 36;

fn checked_modulus(p: u64, w: u32) -> Result<u64> {
    assert!(p >= 3 && p % 2 == 1, "odd primes only");
    assert!(w >= 1);
    let mut m: u64 = 1;
    for _ in 0..w {
        m = m.checked_mul(p).filter(|&m| m <= MAX_MODULUS).ok_or_else(|| {
            Error::Domain(format!(
                "gamma working modulus {}^{} exceeds the direct-product range",
                p, w
            ))
        })?;
    }
    Ok(m)
}

/// Γ_p at integer representatives mod p^w, batched: one pass over the range
/// serves every argument. Returns values aligned with the input order.
pub fn gamma_p_many_int(p: u64, w: u32, xs: &[BigUint]) -> Result<Vec<BigUint>> {
    let m = checked_modulus(p, w)?;
    let reduced: Vec<u64> = xs.iter().map(|x| (x % m).to_u64().unwrap()).collect();
    let mut order: Vec<usize> = (0..reduced.len()).collect();
    order.sort_by_key(|&i| reduced[i]);

    let mut out = vec![0u64; reduced.len()];
    let mut pos = 0;
    // Record Γ_p for every target equal to the current walk position before
    // folding that position into the product.
    let mut prod: u64 = 1;
    let mut record = |walk: u64, prod: u64, pos: &mut usize| {
        while *pos < order.len() && reduced[order[*pos]] == walk {
            // The running product is a unit, so 0 < prod < m throughout.
            out[order[*pos]] = if walk & 1 == 1 { m - prod } else { prod };
            *pos += 1;
        }
    };
    record(0, prod, &mut pos);
    for j in 1..m {
        record(j, prod, &mut pos);
        if pos == order.len() {
            break;
        }
        if j % p != 0 {
            prod = (prod as u128 * j as u128 % m as u128) as u64;
        }
    }
    Ok(out.into_iter().map(BigUint::from).collect())
}

/// Γ_p(x) for a rational argument in Z_p (denominator prime to p), as a
/// p-adic unit known to relative precision w.
pub fn gamma_p_rational(p: u64, w: u32, x: &BigRational) -> Result<Padic> {
    Ok(gamma_p_rationals(p, w, std::slice::from_ref(x))?.pop().unwrap())
}

/// Batched Γ_p over rational arguments; one product walk serves all of them.
pub fn gamma_p_rationals(p: u64, w: u32, xs: &[BigRational]) -> Result<Vec<Padic>> {
    let m = checked_modulus(p, w)?;
    let mb = BigUint::from(m);
    let mut reps = Vec::with_capacity(xs.len());
    for x in xs {
        let den_red = num_integer::Integer::mod_floor(x.denom(), &num_bigint::BigInt::from(m))
            .to_biguint()
            .unwrap();
        let den_inv = super::inv_mod(&den_red, &mb).ok_or_else(|| {
            Error::Domain(format!("gamma argument {} is not p-integral", x))
        })?;
        let num_red = num_integer::Integer::mod_floor(x.numer(), &num_bigint::BigInt::from(m))
            .to_biguint()
            .unwrap();
        reps.push((num_red * den_inv) % &mb);
    }
    let vals = gamma_p_many_int(p, w, &reps)?;
    Ok(vals
        .into_iter()
        .map(|v| Padic::from_bigint(p, &v.into(), w))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn gam(p: u64, w: u32, x: u64) -> BigUint {
        gamma_p_many_int(p, w, &[BigUint::from(x)]).unwrap().pop().unwrap()
    }

    #[test]
    fn base_values() {
        // Γ_p(0) = 1, Γ_p(1) = -1.
        for p in [3u64, 5, 7] {
            assert_eq!(gam(p, 4, 0), BigUint::from(1u32));
            let m = p.pow(4);
            assert_eq!(gam(p, 4, 1), BigUint::from(m - 1));
        }
    }

    #[test]
    fn recurrence_steps() {
        let (p, w) = (5u64, 6u32);
        let m = p.pow(w);
        for x in [2u64, 3, 10, 14, 624, 1234] {
            let g = gam(p, w, x).to_u64().unwrap();
            let g1 = gam(p, w, x + 1).to_u64().unwrap();
            let expect = if x % p == 0 {
                (m - g) % m
            } else {
                (m - (g as u128 * (x % m) as u128 % m as u128) as u64) % m
            };
            assert_eq!(g1, expect, "recurrence at x = {}", x);
        }
    }

    #[test]
    fn reflection_formula() {
        // Γ_p(x) Γ_p(1-x) = (-1)^{x0}, x0 ∈ {1..p} congruent to x mod p.
        let (p, w) = (7u64, 5u32);
        for (a, n) in [(1i64, 3i64), (2, 3), (1, 4), (3, 4), (5, 9), (2, 11)] {
            let x = BigRational::new(BigInt::from(a), BigInt::from(n));
            let gx = gamma_p_rational(p, w, &x).unwrap();
            let gr = gamma_p_rational(p, w, &(BigRational::from(BigInt::from(1)) - &x)).unwrap();
            let prod = gx.mul(&gr);
            // x0: representative of x mod p in 1..=p.
            let ninv = super::super::inv_mod(&BigUint::from(n as u64 % p), &BigUint::from(p))
                .unwrap()
                .to_u64()
                .unwrap();
            let mut x0 = (a as u64 % p) * ninv % p;
            if x0 == 0 {
                x0 = p;
            }
            let expect = Padic::from_i64(p, if x0 % 2 == 1 { -1 } else { 1 }, w);
            let d = prod.agreement_depth(&expect);
            assert!(d.depth >= w as i64, "reflection at {}/{}: {:?}", a, n, d);
        }
    }

    #[test]
    fn lipschitz_congruence() {
        // Γ_p(x + p^j) ≡ Γ_p(x) mod p^j.
        let (p, w) = (3u64, 8u32);
        let x = 50u64;
        for j in 2..w {
            let a = gam(p, w, x);
            let b = gam(p, w, x + p.pow(j));
            let pj = BigUint::from(p.pow(j));
            assert_eq!(a % &pj, b % &pj, "congruence mod 3^{}", j);
        }
    }

    #[test]
    fn batch_matches_single() {
        let (p, w) = (5u64, 5u32);
        let xs: Vec<BigUint> = [0u64, 7, 7, 624, 3000, 1].iter().map(|&x| BigUint::from(x)).collect();
        let batch = gamma_p_many_int(p, w, &xs).unwrap();
        for (x, b) in xs.iter().zip(&batch) {
            assert_eq!(&gamma_p_many_int(p, w, std::slice::from_ref(x)).unwrap()[0], b);
        }
    }

    #[test]
    fn modulus_guard_refuses_huge_walks() {
        assert!(matches!(
            gamma_p_many_int(3, 60, &[BigUint::from(1u32)]),
            Err(Error::Domain(_))
        ));
    }
}
