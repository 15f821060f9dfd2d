//! p-adic arithmetic: precision-tracked scalars, cyclotomic coefficient
//! algebras over Z_p, Hensel lifting, and Morita's p-adic gamma function.

pub mod algebra;
pub mod gamma;
pub mod hensel;
pub mod number;

pub use algebra::{AlgCtx, AlgEl};
pub use number::{Depth, Padic};

use num_bigint::BigUint;

/// p^k as a BigUint.
pub fn p_pow(p: u64, k: u32) -> BigUint {
    BigUint::from(p).pow(k)
}

/// Multiplicative inverse mod m (m > 1), if it exists.
pub fn inv_mod(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::One;
    let e = BigInt::from(a.clone()).extended_gcd(&BigInt::from(m.clone()));
    if !e.gcd.is_one() {
        return None;
    }
    let mi = BigInt::from(m.clone());
    let x = ((e.x % &mi) + &mi) % &mi;
    x.to_biguint()
}

/// Multiplicative order of a mod m (a coprime to m). Brute force; only used
/// for small moduli.
pub fn mult_order(a: u64, m: u64) -> u32 {
    assert!(m > 0 && num_integer::gcd(a, m) == 1);
    if m == 1 {
        return 1;
    }
    let mut x = a % m;
    let mut k = 1u32;
    while x != 1 {
        x = ((x as u128 * (a % m) as u128) % m as u128) as u64;
        k += 1;
        assert!(k <= m as u32, "order search overran the group");
    }
    k
}
