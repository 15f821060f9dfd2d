//! Exact arithmetic in cyclotomic fields Q(ζ_m), elements represented as
//! polynomials in ζ_m reduced modulo Φ_m.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::bigfloat::{BigComplex, BigFixed};
use super::poly::{cyclotomic_polynomial, QPoly};

fn phi_poly(m: u64) -> Arc<QPoly> {
    static MEMO: OnceLock<Mutex<HashMap<u64, Arc<QPoly>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = memo.lock().unwrap();
    guard
        .entry(m)
        .or_insert_with(|| Arc::new(QPoly::from_bigint_coeffs(&cyclotomic_polynomial(m))))
        .clone()
}

/// An element of Q(ζ_m).
#[derive(Clone, PartialEq, Eq)]
pub struct CycNum {
    m: u64,
    poly: QPoly,
}

impl CycNum {
    pub fn new(m: u64, poly: QPoly) -> Self {
        let reduced = poly.rem(&phi_poly(m));
        CycNum { m, poly: reduced }
    }

    pub fn zero(m: u64) -> Self {
        CycNum { m, poly: QPoly::zero() }
    }

    pub fn one(m: u64) -> Self {
        CycNum { m, poly: QPoly::one() }
    }

    pub fn from_rational(m: u64, q: BigRational) -> Self {
        CycNum { m, poly: QPoly::constant(q) }
    }

    pub fn from_int(m: u64, n: i64) -> Self {
        CycNum::from_rational(m, BigRational::from(BigInt::from(n)))
    }

    /// ζ_m^k.
    pub fn zeta_pow(m: u64, k: i64) -> Self {
        let k = k.rem_euclid(m as i64) as usize;
        let mut cs = vec![BigRational::zero(); k + 1];
        cs[k] = BigRational::one();
        CycNum::new(m, QPoly::new(cs))
    }

    pub fn zeta(m: u64) -> Self {
        CycNum::zeta_pow(m, 1)
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// The rational coefficient vector of length φ(m) (degree of Φ_m).
    pub fn coeff_vector(&self) -> Vec<BigRational> {
        let deg = phi_poly(self.m).degree().unwrap();
        (0..deg).map(|i| self.poly.coeff(i)).collect()
    }

    pub fn add(&self, rhs: &CycNum) -> CycNum {
        assert_eq!(self.m, rhs.m, "mixed cyclotomic moduli");
        CycNum { m: self.m, poly: self.poly.add(&rhs.poly) }
    }

    pub fn sub(&self, rhs: &CycNum) -> CycNum {
        assert_eq!(self.m, rhs.m, "mixed cyclotomic moduli");
        CycNum { m: self.m, poly: self.poly.sub(&rhs.poly) }
    }

    pub fn neg(&self) -> CycNum {
        CycNum { m: self.m, poly: self.poly.neg() }
    }

    pub fn mul(&self, rhs: &CycNum) -> CycNum {
        assert_eq!(self.m, rhs.m, "mixed cyclotomic moduli");
        CycNum::new(self.m, self.poly.mul(&rhs.poly))
    }

    pub fn scale(&self, c: &BigRational) -> CycNum {
        CycNum { m: self.m, poly: self.poly.scale(c) }
    }

    pub fn inv(&self) -> CycNum {
        assert!(!self.is_zero(), "inverse of zero");
        // Phi_m is irreducible over Q, so any nonzero residue is coprime to it.
        let (g, u, _) = self.poly.egcd(&phi_poly(self.m));
        assert_eq!(g, QPoly::one());
        CycNum::new(self.m, u)
    }

    pub fn div(&self, rhs: &CycNum) -> CycNum {
        self.mul(&rhs.inv())
    }

    pub fn pow(&self, e: i64) -> CycNum {
        if e < 0 {
            return self.inv().pow(-e);
        }
        let mut base = self.clone();
        let mut e = e as u64;
        let mut acc = CycNum::one(self.m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Galois action σ_t: ζ ↦ ζ^t for gcd(t, m) = 1.
    pub fn galois(&self, t: u64) -> CycNum {
        let t = t % self.m;
        assert_eq!(num_integer::gcd(t, self.m), 1, "galois index not coprime to modulus");
        let zt = CycNum::zeta_pow(self.m, t as i64);
        // Evaluate the coefficient polynomial at ζ^t by Horner.
        let mut acc = CycNum::zero(self.m);
        for i in (0..self.poly.coeffs().len()).rev() {
            acc = acc.mul(&zt);
            acc = acc.add(&CycNum::from_rational(self.m, self.poly.coeff(i)));
        }
        acc
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> CycNum {
        if self.m == 1 {
            return self.clone();
        }
        self.galois(self.m - 1)
    }

    /// Reinterpret in Q(ζ_{m'}) for m | m', via ζ_m = ζ_{m'}^{m'/m}.
    pub fn lift(&self, m_new: u64) -> CycNum {
        assert_eq!(m_new % self.m, 0, "target modulus must be a multiple");
        let k = (m_new / self.m) as usize;
        CycNum::new(m_new, self.poly.inflate(k))
    }

    /// If the element is rational, return it.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.poly.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(self.poly.coeff(0)),
            _ => None,
        }
    }

    /// Field norm down to Q: the product over all Galois conjugates.
    pub fn norm(&self) -> BigRational {
        let mut acc = CycNum::one(self.m);
        for t in 1..=self.m {
            if num_integer::gcd(t, self.m) == 1 {
                acc = acc.mul(&self.galois(t));
            }
        }
        acc.as_rational().expect("norm must be rational")
    }

    /// Evaluate at ζ_m = e^{2πi/m} in fixed-point complex arithmetic.
    pub fn embed(&self, bits: u32) -> BigComplex {
        let zeta = BigComplex::root_of_unity(self.m, 1, bits);
        let mut acc = BigComplex::zero(bits);
        for i in (0..self.poly.coeffs().len()).rev() {
            acc = acc.mul(&zeta);
            let c = BigFixed::from_ratio(&self.poly.coeff(i), bits);
            acc = acc.add(&BigComplex::real(c));
        }
        acc
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum(m={}, {:?})", self.m, self.poly)
    }
}
