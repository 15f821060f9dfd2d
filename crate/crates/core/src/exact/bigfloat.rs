//! Arbitrary-precision fixed-point real and complex arithmetic.
//!
//! A `BigFixed` is an integer mantissa with a fixed binary shift: the value
//! is `mant / 2^bits`. All operations on two values require equal shifts.
//! Rounding is plain floor on the mantissa, which keeps every computation
//! bit-for-bit deterministic across platforms; callers are expected to run
//! with generous guard bits and treat the low bits as noise.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

#[derive(Clone, PartialEq, Eq)]
pub struct BigFixed {
    mant: BigInt,
    bits: u32,
}

/// Guard bits used internally by the transcendental routines.
const GUARD: u32 = 32;

impl BigFixed {
    pub fn new(mant: BigInt, bits: u32) -> Self {
        BigFixed { mant, bits }
    }

    pub fn zero(bits: u32) -> Self {
        BigFixed { mant: BigInt::zero(), bits }
    }

    pub fn one(bits: u32) -> Self {
        BigFixed { mant: BigInt::one() << bits, bits }
    }

    pub fn from_bigint(n: &BigInt, bits: u32) -> Self {
        BigFixed { mant: n << bits, bits }
    }

    pub fn from_i64(n: i64, bits: u32) -> Self {
        BigFixed::from_bigint(&BigInt::from(n), bits)
    }

    pub fn from_ratio(q: &BigRational, bits: u32) -> Self {
        let num: BigInt = q.numer() << bits;
        BigFixed { mant: num.div_floor(q.denom()), bits }
    }

    pub fn from_ratio_i64(n: i64, d: i64, bits: u32) -> Self {
        BigFixed::from_ratio(&BigRational::new(BigInt::from(n), BigInt::from(d)), bits)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// Change the binary shift, truncating or zero-extending the mantissa.
    pub fn with_bits(&self, bits: u32) -> BigFixed {
        if bits >= self.bits {
            BigFixed { mant: &self.mant << (bits - self.bits), bits }
        } else {
            BigFixed { mant: &self.mant >> (self.bits - bits), bits }
        }
    }

    fn check(&self, rhs: &BigFixed) {
        assert_eq!(self.bits, rhs.bits, "mixed fixed-point precisions");
    }

    pub fn add(&self, rhs: &BigFixed) -> BigFixed {
        self.check(rhs);
        BigFixed { mant: &self.mant + &rhs.mant, bits: self.bits }
    }

    pub fn sub(&self, rhs: &BigFixed) -> BigFixed {
        self.check(rhs);
        BigFixed { mant: &self.mant - &rhs.mant, bits: self.bits }
    }

    pub fn neg(&self) -> BigFixed {
        BigFixed { mant: -&self.mant, bits: self.bits }
    }

    pub fn abs(&self) -> BigFixed {
        BigFixed { mant: self.mant.abs(), bits: self.bits }
    }

    pub fn mul(&self, rhs: &BigFixed) -> BigFixed {
        self.check(rhs);
        BigFixed { mant: (&self.mant * &rhs.mant) >> self.bits, bits: self.bits }
    }

    pub fn mul_i64(&self, k: i64) -> BigFixed {
        BigFixed { mant: &self.mant * k, bits: self.bits }
    }

    pub fn div(&self, rhs: &BigFixed) -> BigFixed {
        self.check(rhs);
        assert!(!rhs.is_zero(), "fixed-point division by zero");
        BigFixed { mant: (&self.mant << self.bits).div_floor(&rhs.mant), bits: self.bits }
    }

    pub fn div_i64(&self, k: i64) -> BigFixed {
        assert!(k != 0);
        BigFixed { mant: self.mant.div_floor(&BigInt::from(k)), bits: self.bits }
    }

    pub fn recip(&self) -> BigFixed {
        BigFixed::one(self.bits).div(self)
    }

    pub fn cmp_val(&self, rhs: &BigFixed) -> Ordering {
        self.check(rhs);
        self.mant.cmp(&rhs.mant)
    }

    /// Floor to an integer.
    pub fn floor_int(&self) -> BigInt {
        &self.mant >> self.bits
    }

    /// Round to the nearest integer (half toward +infinity).
    pub fn round_int(&self) -> BigInt {
        (&self.mant + (BigInt::one() << (self.bits - 1))) >> self.bits
    }

    /// Approximate base-2 magnitude: roughly log2|x|, or i64::MIN for zero.
    pub fn approx_log2(&self) -> i64 {
        if self.mant.is_zero() {
            return i64::MIN;
        }
        self.mant.bits() as i64 - self.bits as i64
    }

    /// True once the mantissa is within a few ulps of zero. Series loops must
    /// use this rather than an exact zero test: floor rounding pins tiny
    /// negative values at -1 ulp forever.
    fn is_negligible(&self) -> bool {
        self.mant.abs() <= BigInt::from(16)
    }

    pub fn sqrt(&self) -> BigFixed {
        assert!(!self.mant.is_negative(), "sqrt of a negative number");
        let shifted = (&self.mant << self.bits).to_biguint().unwrap();
        BigFixed { mant: shifted.sqrt().into(), bits: self.bits }
    }

    pub fn powi(&self, e: u64) -> BigFixed {
        let mut acc = BigFixed::one(self.bits);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Decimal rendering with the given number of fractional digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        let neg = self.mant.is_negative();
        let a = self.mant.abs().to_biguint().unwrap();
        let int = &a >> self.bits;
        let frac_part = &a - (&int << self.bits);
        let scaled = (frac_part * BigUint::from(10u32).pow(digits)) >> self.bits;
        let mut s = scaled.to_string();
        while (s.len() as u32) < digits {
            s.insert(0, '0');
        }
        format!("{}{}.{}", if neg { "-" } else { "" }, int, s)
    }
}

impl fmt::Debug for BigFixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(12.min(self.bits / 4)))
    }
}

fn cached_const(
    table: &'static OnceLock<Mutex<HashMap<u32, BigFixed>>>,
    bits: u32,
    compute: impl FnOnce(u32) -> BigFixed,
) -> BigFixed {
    let memo = table.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = memo.lock().unwrap().get(&bits) {
        return v.clone();
    }
    let v = compute(bits);
    memo.lock().unwrap().insert(bits, v.clone());
    v
}

/// Mantissa of atan(1/k) at the given shift, by the alternating series.
fn atan_recip_mant(k: u64, bits: u32) -> BigInt {
    let k2 = BigInt::from(k) * BigInt::from(k);
    let mut term = (BigInt::one() << bits).div_floor(&BigInt::from(k));
    let mut acc = BigInt::zero();
    let mut n: u64 = 0;
    while !term.is_zero() {
        let t = term.div_floor(&BigInt::from(2 * n + 1));
        if n % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
        term = term.div_floor(&k2);
        n += 1;
    }
    acc
}

pub fn pi(bits: u32) -> BigFixed {
    static MEMO: OnceLock<Mutex<HashMap<u32, BigFixed>>> = OnceLock::new();
    cached_const(&MEMO, bits, |bits| {
        let wb = bits + GUARD;
        // Machin: pi = 16 atan(1/5) - 4 atan(1/239).
        let m = atan_recip_mant(5, wb) * 16 - atan_recip_mant(239, wb) * 4;
        BigFixed::new(m, wb).with_bits(bits)
    })
}

pub fn ln2(bits: u32) -> BigFixed {
    static MEMO: OnceLock<Mutex<HashMap<u32, BigFixed>>> = OnceLock::new();
    cached_const(&MEMO, bits, |bits| {
        let wb = bits + GUARD;
        // ln 2 = 2 atanh(1/3) = 2 Σ 1/((2n+1) 3^(2n+1)).
        let nine = BigInt::from(9);
        let mut term = (BigInt::one() << wb).div_floor(&BigInt::from(3));
        let mut acc = BigInt::zero();
        let mut n: u64 = 0;
        while !term.is_zero() {
            acc += term.div_floor(&BigInt::from(2 * n + 1));
            term = term.div_floor(&nine);
            n += 1;
        }
        BigFixed::new(acc * 2, wb).with_bits(bits)
    })
}

/// Natural log. Requires a strictly positive argument; handles any magnitude
/// by normalizing to [1, 2) and using atanh series plus a multiple of ln 2.
pub fn ln(x: &BigFixed) -> BigFixed {
    assert!(x.mant.is_positive(), "log of a non-positive number");
    let bits = x.bits;
    let wb = bits + GUARD;
    // Normalize: x = m * 2^e with m in [1, 2).
    let e = x.mant.bits() as i64 - 1 - bits as i64;
    let mant_w = if e >= 0 {
        (&x.mant << wb as i64) >> (bits as i64 + e)
    } else {
        (&x.mant << (wb as i64 - e)) >> bits as i64
    };
    // atanh series: ln m = 2 atanh((m-1)/(m+1)), argument in [0, 1/3).
    let one = BigInt::one() << wb;
    let num = &mant_w - &one;
    let den = &mant_w + &one;
    let y = (num << wb).div_floor(&den);
    let y2 = (&y * &y) >> wb;
    let mut term = y.clone();
    let mut acc = BigInt::zero();
    let mut n: u64 = 0;
    while !term.is_zero() {
        acc += term.div_floor(&BigInt::from(2 * n + 1));
        term = (&term * &y2) >> wb;
        n += 1;
    }
    let ln_m = BigFixed::new(acc * 2, wb);
    let result = ln_m.add(&ln2(wb).mul_i64(e));
    result.with_bits(bits)
}

/// exp(x) for arguments of moderate size. The result underflows to zero when
/// it drops below the representable range.
pub fn exp(x: &BigFixed) -> BigFixed {
    let bits = x.bits;
    let wb = bits + GUARD;
    let xw = x.with_bits(wb);
    // x = n ln2 + r with |r| <= ln2/2.
    let l2 = ln2(wb);
    let n = xw.div(&l2).round_int();
    if n > BigInt::from(1u64 << 24) {
        panic!("exp overflow: argument too large");
    }
    if n < BigInt::from(-((wb as i64) + 64)) {
        return BigFixed::zero(bits);
    }
    let n_i = n.to_i64().unwrap();
    let r = xw.sub(&l2.mul_i64(n_i));
    // Further halve the argument 6 times so the Taylor series is short.
    const K: u32 = 6;
    let r_small = BigFixed::new(r.mant.clone() >> K, wb);
    let mut term = BigFixed::one(wb);
    let mut acc = BigFixed::one(wb);
    let mut k: i64 = 1;
    loop {
        term = term.mul(&r_small).div_i64(k);
        if term.is_negligible() {
            break;
        }
        acc = acc.add(&term);
        k += 1;
    }
    for _ in 0..K {
        acc = acc.mul(&acc);
    }
    // Apply the power of two and drop the guard bits.
    let shifted = if n_i >= 0 {
        BigFixed::new(acc.mant << n_i, wb)
    } else {
        BigFixed::new(acc.mant >> (-n_i), wb)
    };
    shifted.with_bits(bits)
}

/// (cos x, sin x) by argument reduction to [-pi/4, pi/4] plus quadrant fixup.
pub fn cos_sin(x: &BigFixed) -> (BigFixed, BigFixed) {
    let bits = x.bits;
    let wb = bits + GUARD;
    let xw = x.with_bits(wb);
    let pi_w = pi(wb);
    let two_pi = pi_w.mul_i64(2);
    let turns = xw.div(&two_pi).round_int();
    let r = xw.sub(&BigFixed::from_bigint(&turns, wb).mul(&two_pi));
    let half_pi = BigFixed::new(pi_w.mant.clone() >> 1, wb);
    let q = r.div(&half_pi).round_int().to_i64().unwrap();
    let t = r.sub(&half_pi.mul_i64(q));
    // Taylor for |t| <= pi/4.
    let t2 = t.mul(&t);
    let mut c = BigFixed::one(wb);
    let mut term = BigFixed::one(wb);
    let mut k: i64 = 1;
    loop {
        term = term.mul(&t2).div_i64((2 * k - 1) * (2 * k));
        if term.is_negligible() {
            break;
        }
        if k % 2 == 1 {
            c = c.sub(&term);
        } else {
            c = c.add(&term);
        }
        k += 1;
    }
    let mut s = t.clone();
    term = t.clone();
    k = 1;
    loop {
        term = term.mul(&t2).div_i64((2 * k) * (2 * k + 1));
        if term.is_negligible() {
            break;
        }
        if k % 2 == 1 {
            s = s.sub(&term);
        } else {
            s = s.add(&term);
        }
        k += 1;
    }
    let (c, s) = match q.rem_euclid(4) {
        0 => (c, s),
        1 => (s.neg(), c),
        2 => (c.neg(), s.neg()),
        _ => (s, c.neg()),
    };
    (c.with_bits(bits), s.with_bits(bits))
}

/// Euler's constant via the Brent-McMillan Bessel-function identity.
pub fn euler_gamma(bits: u32) -> BigFixed {
    static MEMO: OnceLock<Mutex<HashMap<u32, BigFixed>>> = OnceLock::new();
    cached_const(&MEMO, bits, |bits| {
        let wb = bits + GUARD + 16;
        // gamma = S(n)/I(n) - ln n + O(e^{-4n}) with
        // S = Σ (n^k/k!)^2 H_k, I = Σ (n^k/k!)^2.
        let n = (wb as u64 * 693 / 4000) + 5;
        let mut t = BigFixed::one(wb);
        let mut h = BigFixed::zero(wb);
        let mut s = BigFixed::zero(wb);
        let mut i = BigFixed::one(wb);
        let mut k: u64 = 1;
        loop {
            // t <- t * n^2 / k^2
            t = t.mul_i64((n * n) as i64).div_i64((k * k) as i64);
            if t.is_zero() {
                break;
            }
            h = h.add(&BigFixed::one(wb).div_i64(k as i64));
            i = i.add(&t);
            s = s.add(&t.mul(&h));
            k += 1;
        }
        let ln_n = ln(&BigFixed::from_i64(n as i64, wb));
        s.div(&i).sub(&ln_n).with_bits(bits)
    })
}

/// Exponential integral E1(x) = ∫_x^∞ e^{-t}/t dt for x > 0, via the
/// convergent series E1 = -gamma - ln x + Σ (-1)^{k+1} x^k/(k·k!).
///
/// The series suffers catastrophic cancellation for large x, so it runs at a
/// working precision widened by about x·log2(e) bits. Arguments large enough
/// that E1(x) underflows the target precision return zero directly.
pub fn exp_integral_e1(x: &BigFixed) -> BigFixed {
    assert!(x.mant.is_positive(), "E1 requires a positive argument");
    let bits = x.bits;
    // Integer ceiling of x, for sizing.
    let xc = (x.floor_int() + 1i32).to_i64().expect("E1 argument out of range");
    // E1(x) < e^{-x}: once that is below an ulp the value is zero for us.
    if (xc as f64) * 1.4427 > bits as f64 + 40.0 {
        return BigFixed::zero(bits);
    }
    let guard = (xc as u32 + 2) * 3 / 2 + GUARD + 32;
    let wb = bits + guard;
    let xw = x.with_bits(wb);
    let mut term = BigFixed::one(wb);
    let mut acc = BigFixed::zero(wb);
    let mut k: i64 = 1;
    loop {
        term = term.mul(&xw).div_i64(k);
        let t = term.div_i64(k);
        if t.is_zero() && k as f64 > 2.8 * xc as f64 {
            break;
        }
        if k % 2 == 1 {
            acc = acc.add(&t);
        } else {
            acc = acc.sub(&t);
        }
        k += 1;
    }
    acc.sub(&euler_gamma(wb)).sub(&ln(&xw)).with_bits(bits)
}

/// Tangent numbers T_1..T_n (Knuth-Buckholtz in-place recurrence). Used to
/// produce the long run of even-index Bernoulli numbers Stirling summation
/// needs, with integer arithmetic only.
fn tangent_numbers(n: usize) -> Vec<BigInt> {
    let mut t = vec![BigInt::zero(); n + 1];
    if n >= 1 {
        t[1] = BigInt::one();
    }
    for k in 2..=n {
        t[k] = &t[k - 1] * BigInt::from(k as u64 - 1);
    }
    for k in 2..=n {
        for j in k..=n {
            let a = &t[j - 1] * BigInt::from((j - k) as u64);
            let b = &t[j] * BigInt::from((j - k + 2) as u64);
            t[j] = a + b;
        }
    }
    t.remove(0);
    t
}

/// B_2, B_4, ..., B_{2n} via B_{2k} = (-1)^{k-1} T_k · 2k / (4^k (4^k - 1)).
fn bernoulli_even_upto(n: usize) -> Vec<BigRational> {
    let t = tangent_numbers(n);
    let mut out = Vec::with_capacity(n);
    let four = BigInt::from(4);
    let mut four_k = BigInt::one();
    for (k, tk) in t.into_iter().enumerate() {
        let k = k + 1;
        four_k *= &four;
        let num = tk * BigInt::from(2 * k as u64) * if k % 2 == 1 { 1 } else { -1 };
        let den = &four_k * (&four_k - BigInt::one());
        out.push(BigRational::new(num, den));
    }
    out
}

/// Stirling-series log-gamma at a positive rational argument.
pub fn lgamma_rational(x: &BigRational, bits: u32) -> BigFixed {
    assert!(x.is_positive(), "lgamma requires a positive argument");
    let wb = bits + GUARD + 16;
    // Shift the argument up so the Stirling tail converges: z = x + j.
    let zmin = wb as i64 / 4 + 16;
    let x_floor = x.floor().to_integer().to_i64().unwrap();
    let shift = (zmin - x_floor).max(0) as u64;
    // ln Π_{j=0}^{shift-1} (x + j) computed as one big rational product.
    let mut prod_num = BigInt::one();
    let d = x.denom().clone();
    let mut a = x.numer().clone();
    for _ in 0..shift {
        prod_num *= &a;
        a += &d;
    }
    let z = x + BigRational::from(BigInt::from(shift));
    let zf = BigFixed::from_ratio(&z, wb);
    let ln_z = ln(&zf);
    // (z - 1/2) ln z - z + ln(2pi)/2
    let half = BigFixed::from_ratio_i64(1, 2, wb);
    let mut acc = zf.sub(&half).mul(&ln_z).sub(&zf);
    let two_pi = pi(wb).mul_i64(2);
    acc = acc.add(&BigFixed::new(ln(&two_pi).mant >> 1, wb));
    // Asymptotic tail Σ B_{2k} / (2k (2k-1) z^{2k-1}).
    let kmax = (wb as usize) / 8 + 4;
    let bs = bernoulli_even_upto(kmax);
    let z2 = zf.mul(&zf);
    let mut zpow = zf.clone(); // z^{2k-1}
    for k in 1..=kmax {
        let b2k = BigFixed::from_ratio(&bs[k - 1], wb);
        let denom = (2 * k as i64) * (2 * k as i64 - 1);
        acc = acc.add(&b2k.div_i64(denom).div(&zpow));
        zpow = zpow.mul(&z2);
    }
    // Remove the shift product: ln Γ(x) = ln Γ(z) - ln Π (x+j)
    if shift > 0 {
        let ln_num = ln(&BigFixed::from_bigint(&prod_num, wb));
        let ln_den = ln(&BigFixed::from_bigint(&d, wb)).mul_i64(shift as i64);
        acc = acc.sub(&ln_num.sub(&ln_den));
    }
    acc.with_bits(bits)
}

#[derive(Clone, PartialEq, Eq)]
pub struct BigComplex {
    pub re: BigFixed,
    pub im: BigFixed,
}

impl BigComplex {
    pub fn new(re: BigFixed, im: BigFixed) -> Self {
        assert_eq!(re.bits, im.bits);
        BigComplex { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        BigComplex { re: BigFixed::zero(bits), im: BigFixed::zero(bits) }
    }

    pub fn one(bits: u32) -> Self {
        BigComplex { re: BigFixed::one(bits), im: BigFixed::zero(bits) }
    }

    pub fn real(re: BigFixed) -> Self {
        let bits = re.bits;
        BigComplex { re, im: BigFixed::zero(bits) }
    }

    pub fn bits(&self) -> u32 {
        self.re.bits
    }

    pub fn add(&self, rhs: &BigComplex) -> BigComplex {
        BigComplex { re: self.re.add(&rhs.re), im: self.im.add(&rhs.im) }
    }

    pub fn sub(&self, rhs: &BigComplex) -> BigComplex {
        BigComplex { re: self.re.sub(&rhs.re), im: self.im.sub(&rhs.im) }
    }

    pub fn neg(&self) -> BigComplex {
        BigComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> BigComplex {
        BigComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, rhs: &BigComplex) -> BigComplex {
        BigComplex {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }

    pub fn scale(&self, c: &BigFixed) -> BigComplex {
        BigComplex { re: self.re.mul(c), im: self.im.mul(c) }
    }

    pub fn scale_i64(&self, k: i64) -> BigComplex {
        BigComplex { re: self.re.mul_i64(k), im: self.im.mul_i64(k) }
    }

    pub fn norm_sqr(&self) -> BigFixed {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> BigFixed {
        self.norm_sqr().sqrt()
    }

    pub fn div(&self, rhs: &BigComplex) -> BigComplex {
        let d = rhs.norm_sqr();
        let n = self.mul(&rhs.conj());
        BigComplex { re: n.re.div(&d), im: n.im.div(&d) }
    }

    pub fn recip(&self) -> BigComplex {
        BigComplex::one(self.bits()).div(self)
    }

    pub fn powi(&self, e: u64) -> BigComplex {
        let mut acc = BigComplex::one(self.bits());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// exp(z) = e^{Re z} (cos Im z + i sin Im z).
    pub fn exp(&self) -> BigComplex {
        let r = exp(&self.re);
        let (c, s) = cos_sin(&self.im);
        BigComplex { re: r.mul(&c), im: r.mul(&s) }
    }

    /// e^{2πi k/m}.
    pub fn root_of_unity(m: u64, k: i64, bits: u32) -> BigComplex {
        let wb = bits + GUARD;
        let k = k.rem_euclid(m as i64);
        let angle = pi(wb)
            .mul_i64(2 * k)
            .div_i64(m as i64);
        let (c, s) = cos_sin(&angle);
        BigComplex { re: c.with_bits(bits), im: s.with_bits(bits) }
    }

    /// Max of |Re|, |Im| as an approximate log2, for convergence checks.
    pub fn approx_log2(&self) -> i64 {
        self.re.approx_log2().max(self.im.approx_log2())
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + {:?}i", self.re, self.im)
    }
}

/// Decimal digits to mantissa bits, with a healthy guard.
pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 64
}
