//! Dense univariate polynomials over Q, plus cyclotomic polynomials over Z.
//!
//! Coefficients are stored in ascending degree order with trailing zeros
//! trimmed; the zero polynomial is the empty vector.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

#[derive(Clone, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        QPoly::constant(BigRational::one())
    }

    pub fn x() -> Self {
        QPoly::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::new(vec![c])
    }

    pub fn from_int_coeffs(cs: &[i64]) -> Self {
        QPoly::new(cs.iter().map(|&c| BigRational::from(BigInt::from(c))).collect())
    }

    pub fn from_bigint_coeffs(cs: &[BigInt]) -> Self {
        QPoly::new(cs.iter().cloned().map(BigRational::from).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        QPoly::new(out)
    }

    pub fn sub(&self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        QPoly::new(out)
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn divrem(&self, rhs: &QPoly) -> (QPoly, QPoly) {
        assert!(!rhs.is_zero(), "polynomial division by zero");
        let d = rhs.coeffs.len();
        if self.coeffs.len() < d {
            return (QPoly::zero(), self.clone());
        }
        let lead_inv = rhs.leading().unwrap().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); rem.len() - d + 1];
        for i in (0..quot.len()).rev() {
            let q = &rem[i + d - 1] * &lead_inv;
            if q.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = &q * b;
                rem[i + j] -= t;
            }
            quot[i] = q;
        }
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn rem(&self, rhs: &QPoly) -> QPoly {
        self.divrem(rhs).1
    }

    pub fn monic(&self) -> QPoly {
        match self.leading() {
            None => QPoly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, rhs: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = std::mem::replace(&mut b, r);
        }
        a.monic()
    }

    /// Extended gcd: returns (g, u, v) with u·self + v·rhs = g and g monic.
    pub fn egcd(&self, rhs: &QPoly) -> (QPoly, QPoly, QPoly) {
        let mut r0 = self.clone();
        let mut r1 = rhs.clone();
        let mut u0 = QPoly::one();
        let mut u1 = QPoly::zero();
        let mut v0 = QPoly::zero();
        let mut v1 = QPoly::one();
        while !r1.is_zero() {
            let (q, r2) = r0.divrem(&r1);
            let u2 = u0.sub(&q.mul(&u1));
            let v2 = v0.sub(&q.mul(&v1));
            r0 = std::mem::replace(&mut r1, r2);
            u0 = std::mem::replace(&mut u1, u2);
            v0 = std::mem::replace(&mut v1, v2);
        }
        match r0.leading() {
            None => (QPoly::zero(), QPoly::zero(), QPoly::zero()),
            Some(l) => {
                let li = l.recip();
                (r0.scale(&li), u0.scale(&li), v0.scale(&li))
            }
        }
    }

    pub fn derivative(&self) -> QPoly {
        if self.coeffs.len() <= 1 {
            return QPoly::zero();
        }
        QPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigRational::from(BigInt::from(i as u64 + 1)))
                .collect(),
        )
    }

    /// Substitute x ↦ x^k.
    pub fn inflate(&self, k: usize) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        QPoly::new(out)
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})*x", c)?,
                _ => write!(f, "({})*x^{}", c, i)?,
            }
        }
        Ok(())
    }
}

/// Exact division of integer polynomials; panics if not exact.
fn zpoly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(!den.is_empty() && !den.last().unwrap().is_zero());
    let mut rem: Vec<BigInt> = num.to_vec();
    let d = den.len();
    assert!(rem.len() >= d);
    let mut quot = vec![BigInt::zero(); rem.len() - d + 1];
    let lead = den.last().unwrap();
    for i in (0..quot.len()).rev() {
        let (q, r) = num_integer::Integer::div_rem(&rem[i + d - 1], lead);
        assert!(r.is_zero(), "inexact integer polynomial division");
        for (j, b) in den.iter().enumerate() {
            let t = &q * b;
            rem[i + j] -= t;
        }
        quot[i] = q;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact integer polynomial division");
    quot
}

fn cyclotomic_uncached(m: u64, memo: &mut BTreeMap<u64, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(v) = memo.get(&m) {
        return v.clone();
    }
    let phi = if m == 1 {
        vec![BigInt::from(-1), BigInt::one()]
    } else {
        // x^m - 1 divided by the product of Phi_d over proper divisors d | m.
        let mut num = vec![BigInt::zero(); m as usize + 1];
        num[0] = BigInt::from(-1);
        num[m as usize] = BigInt::one();
        let mut acc = num;
        for d in 1..m {
            if m % d == 0 {
                let phid = cyclotomic_uncached(d, memo);
                acc = zpoly_div_exact(&acc, &phid);
            }
        }
        acc
    };
    memo.insert(m, phi.clone());
    phi
}

/// Coefficients of the m-th cyclotomic polynomial Φ_m, ascending degree.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    assert!(m >= 1);
    static MEMO: OnceLock<Mutex<BTreeMap<u64, Vec<BigInt>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(BTreeMap::new()));
    let mut guard = memo.lock().unwrap();
    cyclotomic_uncached(m, &mut guard)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn p(cs: &[i64]) -> QPoly {
        QPoly::from_int_coeffs(cs)
    }

    #[test]
    fn divrem_reconstructs() {
        let a = p(&[3, 0, -2, 7, 1]);
        let b = p(&[1, 2, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_common_factor() {
        // (x-1)(x+2) and (x-1)(x-3) share x-1.
        let a = p(&[-2, 1, 1]);
        let b = p(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
    }

    #[test]
    fn egcd_identity() {
        let a = p(&[1, 0, 0, 1]); // x^3+1
        let b = p(&[1, 1]); // x+1, divides a
        let (g, u, v) = a.egcd(&b);
        assert_eq!(g, p(&[1, 1]));
        assert_eq!(u.mul(&a).add(&v.mul(&b)), g);

        let c = p(&[2, 1]); // x+2, coprime to a
        let (g2, u2, v2) = a.egcd(&c);
        assert_eq!(g2, QPoly::one());
        assert_eq!(u2.mul(&a).add(&v2.mul(&c)), QPoly::one());
    }

    #[test]
    fn eval_horner() {
        let a = p(&[1, -3, 2]); // 2x^2-3x+1
        assert_eq!(a.eval(&rat(2, 1)), rat(3, 1));
        assert_eq!(a.eval(&rat(1, 2)). clone(), rat(0, 1));
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic_polynomial(1), vec![BigInt::from(-1), BigInt::from(1)]);
        assert_eq!(
            cyclotomic_polynomial(4),
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]
        );
        assert_eq!(
            cyclotomic_polynomial(12),
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(-1), BigInt::from(0), BigInt::from(1)]
        );
        // Phi_105 is the first with a coefficient of absolute value 2.
        let c105 = cyclotomic_polynomial(105);
        assert_eq!(c105.len() - 1, 48);
        assert!(c105.iter().any(|c| *c == BigInt::from(-2)));
    }

    #[test]
    fn cyclotomic_product_is_x_m_minus_1() {
        let m = 20u64;
        let mut acc = QPoly::one();
        for d in 1..=m {
            if m % d == 0 {
                acc = acc.mul(&QPoly::from_bigint_coeffs(&cyclotomic_polynomial(d)));
            }
        }
        let mut expect = vec![BigRational::zero(); m as usize + 1];
        expect[0] = -BigRational::one();
        expect[m as usize] = BigRational::one();
        assert_eq!(acc, QPoly::new(expect));
    }
}
