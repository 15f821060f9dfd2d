//! Bernoulli numbers and Bernoulli polynomials (convention B_1 = -1/2).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::rational::binomial;

/// B_0, B_1, ..., B_n by the standard recurrence
/// B_n = -1/(n+1) · Σ_{j<n} C(n+1, j) B_j.
pub fn bernoulli_upto(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        if m > 1 && m % 2 == 1 {
            b.push(BigRational::zero());
            continue;
        }
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                let c = BigRational::from(BigInt::from(binomial(m as u64 + 1, j as u64)));
                acc += c * bj;
            }
        }
        let denom = BigRational::from(BigInt::from(m as u64 + 1));
        b.push(-acc / denom);
    }
    b
}

pub fn bernoulli(n: usize) -> BigRational {
    bernoulli_upto(n).pop().unwrap()
}

/// B_n(x) = Σ_k C(n,k) B_k x^{n-k}.
pub fn bernoulli_poly_at(n: usize, x: &BigRational) -> BigRational {
    let b = bernoulli_upto(n);
    let mut acc = BigRational::zero();
    let mut xpow = BigRational::one();
    // Accumulate from k = n down so the power of x climbs as k drops.
    for k in (0..=n).rev() {
        if !b[k].is_zero() {
            let c = BigRational::from(BigInt::from(binomial(n as u64, k as u64)));
            acc += c * &b[k] * &xpow;
        }
        xpow *= x;
    }
    acc
}
