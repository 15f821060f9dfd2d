//! Finite-field polynomial arithmetic and Hensel lifting.
//!
//! Everything here is deterministic. Finite fields F_{p^f} are built on the
//! lexicographically first monic irreducible of degree f, cyclotomic factor
//! patterns come from explicit root orbits rather than randomized splitting,
//! and the canonical factor of Φ_m mod p is the lexicographically smallest
//! one. Repeat runs therefore agree bit for bit.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use super::{inv_mod, mult_order, p_pow};
use crate::error::{Error, Result};
use crate::exact::poly::cyclotomic_polynomial;

// --- F_p[x] on u64 coefficient vectors (ascending, trimmed) ---

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_u64(p: u64, a: u64) -> u64 {
    // Fermat inverse; p is an odd prime well below 2^32 in practice.
    let mut acc: u128 = 1;
    let mut base: u128 = (a % p) as u128;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    acc as u64
}

fn fp_sub(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, c) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *c = (x + p - y) % p;
    }
    trim(&mut out);
    out
}

fn fp_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    trim(&mut out);
    out
}

fn fp_divrem(p: u64, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    let lead_inv = inv_u64(p, b[db]);
    for i in (db..r.len()).rev() {
        let c = r[i] % p;
        if c == 0 {
            continue;
        }
        let factor = (c as u128 * lead_inv as u128 % p as u128) as u64;
        q[i - db] = factor;
        for (j, &bc) in b.iter().enumerate() {
            let t = (factor as u128 * bc as u128 % p as u128) as u64;
            r[i - db + j] = (r[i - db + j] + p - t) % p;
        }
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

fn fp_monic(p: u64, a: &[u64]) -> Vec<u64> {
    let mut a = a.to_vec();
    trim(&mut a);
    if let Some(&lead) = a.last() {
        if lead != 1 {
            let li = inv_u64(p, lead);
            for c in a.iter_mut() {
                *c = (*c as u128 * li as u128 % p as u128) as u64;
            }
        }
    }
    a
}

fn fp_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let (_, r) = fp_divrem(p, &a, &b);
        a = b;
        b = r;
    }
    fp_monic(p, &a)
}

/// Extended gcd: returns monic g and u, v with u·a + v·b = g.
fn fp_egcd(p: u64, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut u0, mut u1) = (vec![1u64], Vec::new());
    let (mut v0, mut v1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(p, &r0, &r1);
        let qu = fp_mul(p, &q, &u1);
        let qv = fp_mul(p, &q, &v1);
        let nu = fp_sub(p, &u0, &qu);
        let nv = fp_sub(p, &v0, &qv);
        r0 = std::mem::replace(&mut r1, r);
        u0 = std::mem::replace(&mut u1, nu);
        v0 = std::mem::replace(&mut v1, nv);
    }
    if let Some(&lead) = r0.last() {
        if lead != 1 {
            let li = inv_u64(p, lead);
            let fix = |v: &mut Vec<u64>| {
                for c in v.iter_mut() {
                    *c = (*c as u128 * li as u128 % p as u128) as u64;
                }
            };
            fix(&mut r0);
            fix(&mut u0);
            fix(&mut v0);
        }
    }
    (r0, u0, v0)
}

/// Inverse of a modulo g in F_p[x], when gcd(a, g) = 1.
pub(crate) fn poly_inv_mod_p(p: u64, a: &[u64], g: &[u64]) -> Option<Vec<u64>> {
    let (_, ar) = fp_divrem(p, a, g);
    let (d, u, _) = fp_egcd(p, &ar, g);
    if d == vec![1u64] {
        let (_, r) = fp_divrem(p, &u, g);
        Some(r)
    } else {
        None
    }
}

// --- GF(p^f) = F_p[y]/(h), elements as trimmed Vec<u64> of degree < f ---

fn gf_mul(p: u64, h: &[u64], a: &[u64], b: &[u64]) -> Vec<u64> {
    let prod = fp_mul(p, a, b);
    fp_divrem(p, &prod, h).1
}

fn gf_pow(p: u64, h: &[u64], a: &[u64], mut e: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = gf_mul(p, h, &acc, &base);
        }
        base = gf_mul(p, h, &base, &base);
        e >>= 1;
    }
    acc
}

fn index_to_elem(p: u64, f: u32, mut idx: u64) -> Vec<u64> {
    let mut v = Vec::with_capacity(f as usize);
    for _ in 0..f {
        v.push(idx % p);
        idx /= p;
    }
    trim(&mut v);
    v
}

fn is_irreducible(p: u64, h: &[u64]) -> bool {
    let f = (h.len() - 1) as u32;
    if f == 0 {
        return false;
    }
    // x^{p^k} mod h by iterated p-th powering of x.
    let x = vec![0u64, 1];
    let mut xq = x.clone();
    let mut frobenius_powers = Vec::with_capacity(f as usize);
    for _ in 0..f {
        xq = gf_pow(p, h, &xq, p);
        frobenius_powers.push(xq.clone());
    }
    // x^{p^f} must return to x.
    if frobenius_powers[f as usize - 1] != x {
        return false;
    }
    // No root generates a proper subfield: gcd(x^{p^{f/l}} - x, h) = 1 for
    // each prime l dividing f.
    for l in distinct_prime_factors(f as u64) {
        let k = (f / l as u32) as usize;
        let d = fp_sub(p, &frobenius_powers[k - 1], &x);
        if fp_gcd(p, &d, h).len() > 1 {
            return false;
        }
    }
    true
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The lexicographically first monic irreducible of degree f over F_p
/// (coefficient vectors ordered as base-p integers, constant term least
/// significant).
pub(crate) fn deterministic_irreducible(p: u64, f: u32) -> Vec<u64> {
    if f == 1 {
        return vec![0, 1]; // y itself: F_p[y]/(y) = F_p
    }
    let count = p.pow(f);
    for idx in 0..count {
        let mut h = index_to_elem(p, f, idx);
        h.resize(f as usize, 0);
        h.push(1);
        if is_irreducible(p, &h) {
            return h;
        }
    }
    unreachable!("irreducibles of every degree exist over F_p")
}

/// A multiplicative generator of GF(p^f)^*, the first element in counter
/// order whose order is exactly p^f - 1.
fn gf_generator(p: u64, h: &[u64]) -> Vec<u64> {
    let f = (h.len() - 1) as u32;
    let q = p.pow(f);
    let primes = distinct_prime_factors(q - 1);
    for idx in 1..q {
        let cand = index_to_elem(p, f, idx);
        let mut ok = true;
        for &l in &primes {
            if gf_pow(p, h, &cand, (q - 1) / l) == vec![1u64] {
                ok = false;
                break;
            }
        }
        if ok {
            return cand;
        }
    }
    unreachable!("GF(q)^* is cyclic")
}

/// All monic irreducible factors of Φ_m over F_p (requires p ∤ m), sorted by
/// ascending coefficient vector. Each has degree f = ord_m(p), and the roots
/// of the k-th factor are ζ^j for j in one orbit of multiplication by p on
/// the primitive residues mod m.
pub(crate) fn cyclotomic_factors_mod_p(p: u64, m: u64) -> Vec<Vec<u64>> {
    assert!(m >= 1 && m % p != 0);
    if m == 1 {
        return vec![vec![p - 1, 1]]; // x - 1
    }
    let f = mult_order(p % m, m);
    let h = deterministic_irreducible(p, f);
    let q = p.pow(f);
    assert_eq!((q - 1) % m, 0, "μ_m must embed in GF(p^f)^*");
    let zeta = gf_pow(p, &h, &gf_generator(p, &h), (q - 1) / m);

    // Orbits of multiplication by p on primitive residues mod m.
    let mut seen = vec![false; m as usize];
    let mut factors = Vec::new();
    for k0 in 1..m {
        if seen[k0 as usize] || num_integer::gcd(k0, m) != 1 {
            continue;
        }
        let mut orbit = Vec::new();
        let mut k = k0;
        loop {
            seen[k as usize] = true;
            orbit.push(k);
            k = (k as u128 * (p % m) as u128 % m as u128) as u64;
            if k == k0 {
                break;
            }
        }
        assert_eq!(orbit.len(), f as usize);
        // Π (x - ζ^k) over the orbit, coefficients in GF(q)[x].
        let mut poly: Vec<Vec<u64>> = vec![vec![1u64]];
        for &k in &orbit {
            let root = gf_pow(p, &h, &zeta, k);
            // Multiply by (x - root).
            let mut next: Vec<Vec<u64>> = vec![Vec::new(); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] = c.clone();
            }
            for (i, c) in poly.iter().enumerate() {
                let t = gf_mul(p, &h, c, &root);
                next[i] = fp_sub(p, &next[i], &t);
            }
            poly = next;
        }
        let flat: Vec<u64> = poly
            .iter()
            .map(|c| {
                assert!(c.len() <= 1, "factor coefficients must descend to F_p");
                c.first().copied().unwrap_or(0)
            })
            .collect();
        factors.push(flat);
    }
    factors.sort();
    factors
}

/// Lift a factorization Φ_m ≡ g·h (mod p) with gcd(g, h) = 1 to modulus
/// p^prec, returning the lift of g (monic, ascending coefficients reduced
/// mod p^prec).
fn hensel_lift_factor(p: u64, prec: u32, target: &[BigUint], g0: &[u64], h0: &[u64]) -> Vec<BigUint> {
    let pm = p_pow(p, prec);
    let pb = BigUint::from(p);
    let (_, _, v) = fp_egcd(p, g0, h0);
    let mut g: Vec<BigUint> = g0.iter().map(|&c| BigUint::from(c)).collect();
    let mut h: Vec<BigUint> = h0.iter().map(|&c| BigUint::from(c)).collect();

    let bp_mul = |a: &[BigUint], b: &[BigUint]| -> Vec<BigUint> {
        let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (&out[i + j] + x * y) % &pm;
            }
        }
        out
    };

    for k in 1..prec {
        let pk = p_pow(p, k);
        let gh = bp_mul(&g, &h);
        // delta = (target - g h) / p^k reduced mod p.
        let mut delta = vec![0u64; target.len()];
        for (i, d) in delta.iter_mut().enumerate() {
            let got = gh.get(i).cloned().unwrap_or_default() % &pm;
            let want = &target[i] % &pm;
            let diff = ((&pm + want) - got) % &pm;
            let (quot, rem) = num_integer::Integer::div_rem(&diff, &pk);
            assert!(rem.is_zero(), "lift drift at step {}", k);
            *d = (quot % &pb).to_u64().unwrap();
        }
        trim(&mut delta);
        // Solve A h + B g = delta mod p with deg A < deg g.
        let vd = fp_mul(p, &v, &delta);
        let (_, a_corr) = fp_divrem(p, &vd, g0);
        let ah = fp_mul(p, &a_corr, h0);
        let num = fp_sub(p, &delta, &ah);
        let (b_corr, rem) = fp_divrem(p, &num, g0);
        assert!(rem.is_empty(), "Bezout correction must divide exactly");
        for (i, &c) in a_corr.iter().enumerate() {
            g[i] = (&g[i] + &pk * c) % &pm;
        }
        for (i, &c) in b_corr.iter().enumerate() {
            h[i] = (&h[i] + &pk * c) % &pm;
        }
    }
    g
}

/// The canonical (lexicographically smallest) monic irreducible factor of
/// Φ_m mod p, Hensel-lifted to coefficients mod p^prec. Requires p ∤ m.
pub(crate) fn canonical_cyclotomic_factor(p: u64, m: u64, prec: u32) -> Result<Vec<BigUint>> {
    if m % p == 0 {
        return Err(Error::Domain(format!("p = {} divides m = {}", p, m)));
    }
    let factors = cyclotomic_factors_mod_p(p, m);
    let g0 = factors[0].clone();
    let phi = cyclotomic_polynomial(m);
    let pm = p_pow(p, prec);
    let pmi = BigInt::from(pm.clone());
    let target: Vec<BigUint> = phi
        .iter()
        .map(|c| {
            let mut r = c % &pmi;
            if r < BigInt::zero() {
                r += &pmi;
            }
            r.to_biguint().unwrap()
        })
        .collect();
    if factors.len() == 1 {
        return Ok(target);
    }
    // h0 = Φ_m / g0 mod p.
    let mut phi_p: Vec<u64> = target
        .iter()
        .map(|c| (c % p).to_u64().unwrap())
        .collect();
    trim(&mut phi_p);
    let (h0, rem) = fp_divrem(p, &phi_p, &g0);
    assert!(rem.is_empty());
    Ok(hensel_lift_factor(p, prec, &target, &g0, &h0))
}

// --- roots in Z_p and GF(q) ---

/// Simple roots of an integer polynomial in Z_p, to precision p^prec: roots
/// r mod p with f'(r) a unit, Newton-lifted. Multiple roots mod p are
/// skipped.
pub fn zp_roots(p: u64, poly: &[BigInt], prec: u32) -> Vec<BigUint> {
    assert!(prec >= 1);
    let pm = p_pow(p, prec);
    let pmi = BigInt::from(pm.clone());
    let eval = |x: &BigUint, coeffs: &[BigInt]| -> BigUint {
        let xb = BigInt::from(x.clone());
        let mut acc = BigInt::zero();
        for c in coeffs.iter().rev() {
            acc = (acc * &xb + c) % &pmi;
        }
        if acc < BigInt::zero() {
            acc += &pmi;
        }
        acc.to_biguint().unwrap()
    };
    let deriv: Vec<BigInt> = poly
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let mut out = Vec::new();
    for r0 in 0..p {
        let r = BigUint::from(r0);
        if !(eval(&r, poly) % p).is_zero() {
            continue;
        }
        let d0 = eval(&r, &deriv) % p;
        if d0.is_zero() {
            continue;
        }
        // Newton: r <- r - f(r)/f'(r); quadratic convergence reaches p^prec
        // in ceil(log2 prec) + 1 steps, a few spares cost nothing.
        let mut r = r;
        for _ in 0..(32 - (prec as u32).leading_zeros() + 2) {
            let fr = eval(&r, poly);
            let dr = eval(&r, &deriv);
            let dinv = inv_mod(&dr, &pm).expect("derivative stays a unit");
            r = ((&r + &pm) - (fr * dinv) % &pm) % &pm;
        }
        debug_assert!(eval(&r, poly).is_zero());
        out.push(r);
    }
    out.sort();
    out
}

/// Square root of a unit in Z_p (p odd), to precision p^prec; the returned
/// root is the one whose residue mod p lies in 1..=(p-1)/2. `None` for
/// non-residues.
pub fn zp_sqrt(p: u64, a: &BigUint, prec: u32) -> Option<BigUint> {
    let a0 = (a % p).to_u64().unwrap();
    assert!(a0 != 0, "square root of a non-unit");
    let mut r0 = None;
    for r in 1..p {
        if r * r % p == a0 {
            r0 = Some(r.min(p - r));
            break;
        }
    }
    let r0 = r0?;
    let pm = p_pow(p, prec);
    let mut r = BigUint::from(r0);
    let two_inv = inv_mod(&BigUint::from(2u32), &pm).unwrap();
    for _ in 0..(32 - prec.leading_zeros() + 2) {
        // r <- (r + a/r) / 2
        let rinv = inv_mod(&r, &pm)?;
        r = ((&r + (a * rinv) % &pm) * &two_inv) % &pm;
    }
    debug_assert!(((&r * &r) % &pm) == a % &pm);
    Some(r)
}

/// Roots in GF(p^f) = F_p[y]/(h) of a polynomial with GF coefficients, by
/// exhaustive evaluation (the fields here are small).
pub(crate) fn gf_roots(p: u64, h: &[u64], poly: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let f = (h.len() - 1) as u32;
    let q = p.pow(f);
    let mut out = Vec::new();
    for idx in 0..q {
        let x = index_to_elem(p, f, idx);
        let mut acc: Vec<u64> = Vec::new();
        for c in poly.iter().rev() {
            acc = gf_mul(p, h, &acc, &x);
            acc = fp_add_gf(p, &acc, c);
        }
        if acc.is_empty() {
            out.push(x);
        }
    }
    out
}

fn fp_add_gf(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, c) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *c = (x + y) % p;
    }
    trim(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use num_traits::One;

    fn fp_mul_many(p: u64, fs: &[Vec<u64>]) -> Vec<u64> {
        let mut acc = vec![1u64];
        for f in fs {
            acc = fp_mul(p, &acc, f);
        }
        acc
    }

    #[test]
    fn cyclotomic_factor_pattern_mod_three() {
        // ord_13(3) = 3, so Φ_13 splits into four cubics mod 3.
        let fs = cyclotomic_factors_mod_p(3, 13);
        assert_eq!(fs.len(), 4);
        for f in &fs {
            assert_eq!(f.len(), 4);
            assert_eq!(*f.last().unwrap(), 1);
        }
        let prod = fp_mul_many(3, &fs);
        let phi: Vec<u64> = cyclotomic_polynomial(13)
            .iter()
            .map(|c| c.mod_floor(&BigInt::from(3)).to_u64().unwrap())
            .collect();
        assert_eq!(prod, phi);
    }

    #[test]
    fn inert_cyclotomic_stays_whole() {
        // ord_5(7) = 4 = φ(5): Φ_5 is irreducible mod 7.
        let fs = cyclotomic_factors_mod_p(7, 5);
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].len(), 5);
    }

    #[test]
    fn canonical_factor_lifts_and_divides() {
        // ord_12(5) = 2: two quadratic factors.
        let prec = 10;
        let g = canonical_cyclotomic_factor(5, 12, prec).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(*g.last().unwrap(), BigUint::one());
        // g divides Φ_12 mod 5^prec: remainder of the exact division is 0.
        let pm = p_pow(5, prec);
        let phi = cyclotomic_polynomial(12);
        let mut rem: Vec<BigUint> = phi
            .iter()
            .map(|c| {
                let pmi = BigInt::from(pm.clone());
                let mut r = c % &pmi;
                if r < BigInt::zero() {
                    r += &pmi;
                }
                r.to_biguint().unwrap()
            })
            .collect();
        // Long division by monic g over Z/5^prec.
        let dg = g.len() - 1;
        for i in (dg..rem.len()).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            for (j, gc) in g.iter().enumerate() {
                let sub = (&c * gc) % &pm;
                rem[i - dg + j] = ((&rem[i - dg + j] + &pm) - sub) % &pm;
            }
        }
        for c in rem.iter().take(dg) {
            assert!(c.is_zero(), "remainder coefficient {:?}", c);
        }
    }

    #[test]
    fn canonical_factor_is_reproducible() {
        let a = canonical_cyclotomic_factor(3, 13, 8).unwrap();
        let b = canonical_cyclotomic_factor(3, 13, 8).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zp_roots_of_squares() {
        // x^2 - 2 over Z_7: two simple roots, squaring back to 2.
        let poly = [BigInt::from(-2), BigInt::zero(), BigInt::one()];
        let roots = zp_roots(7, &poly, 9);
        assert_eq!(roots.len(), 2);
        let pm = p_pow(7, 9);
        for r in &roots {
            assert_eq!((r * r) % &pm, BigUint::from(2u32));
        }
    }

    #[test]
    fn zp_sqrt_matches_roots() {
        let r = zp_sqrt(7, &BigUint::from(2u32), 9).unwrap();
        let pm = p_pow(7, 9);
        assert_eq!((&r * &r) % &pm, BigUint::from(2u32));
        assert!(zp_sqrt(7, &BigUint::from(3u32), 9).is_none());
    }

    #[test]
    fn gf_root_search_finds_all_roots_of_unity() {
        // Roots of Φ_5 in GF(7^4): all four primitive 5th roots of unity.
        let h = deterministic_irreducible(7, 4);
        let phi: Vec<Vec<u64>> = cyclotomic_polynomial(5)
            .iter()
            .map(|c| {
                let r = c.mod_floor(&BigInt::from(7)).to_u64().unwrap();
                if r == 0 { Vec::new() } else { vec![r] }
            })
            .collect();
        let roots = gf_roots(7, &h, &phi);
        assert_eq!(roots.len(), 4);
        for r in &roots {
            assert_eq!(gf_pow(7, &h, r, 5), vec![1u64]);
        }
    }
}
