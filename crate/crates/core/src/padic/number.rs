//! Precision-tracked p-adic scalars.
//!
//! A value is either `Zero { abs }`, meaning "O(p^abs): indistinguishable
//! from zero at this precision", or `Unit { val, unit, rel }`, meaning
//! p^val · u with u a unit known modulo p^rel. Arithmetic propagates
//! precision the way interval arithmetic would: subtraction detects
//! cancellation and converts to `Zero` when everything known cancels.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero as _};
use std::fmt;

use super::{inv_mod, p_pow};
use crate::error::{Error, Result};

/// Absolute precision assigned to exact inputs (integers, rationals). Large
/// enough to dominate any working precision in practice while leaving
/// headroom for valuation arithmetic.
pub const EXACT_PREC: i64 = 1 << 40;

#[derive(Clone, PartialEq, Eq)]
enum Repr {
    Zero { abs: i64 },
    Unit { val: i64, unit: BigUint, rel: u32 },
}

#[derive(Clone, PartialEq, Eq)]
pub struct Padic {
    p: u64,
    repr: Repr,
}

/// Result of comparing two p-adic numbers: the valuation of the difference,
/// and whether that reading was capped by the available precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Depth {
    pub depth: i64,
    pub saturated: bool,
}

impl Padic {
    fn normalize(p: u64, val: i64, unit: BigUint, rel: u32) -> Padic {
        if rel == 0 {
            return Padic { p, repr: Repr::Zero { abs: val } };
        }
        let modulus = p_pow(p, rel);
        let unit = unit % &modulus;
        if unit.is_zero() {
            return Padic { p, repr: Repr::Zero { abs: val + rel as i64 } };
        }
        // Split off any powers of p hiding in the residue.
        let mut u = unit;
        let mut v = val;
        let mut r = rel;
        let pb = BigUint::from(p);
        while (&u % &pb).is_zero() {
            u /= &pb;
            v += 1;
            r -= 1;
            if r == 0 {
                return Padic { p, repr: Repr::Zero { abs: v } };
            }
        }
        Padic { p, repr: Repr::Unit { val: v, unit: u, rel: r } }
    }

    pub fn zero(p: u64, abs: i64) -> Padic {
        Padic { p, repr: Repr::Zero { abs } }
    }

    pub fn exact_zero(p: u64) -> Padic {
        Padic::zero(p, EXACT_PREC)
    }

    pub fn from_bigint(p: u64, n: &BigInt, prec: u32) -> Padic {
        assert!(p >= 3 && p % 2 == 1, "odd primes only");
        if n.is_zero() {
            return Padic::exact_zero(p);
        }
        let pb = BigInt::from(p);
        let mut v: i64 = 0;
        let mut m = n.clone();
        while (&m % &pb).is_zero() {
            m /= &pb;
            v += 1;
        }
        let modulus = BigInt::from(p_pow(p, prec));
        let mut r = &m % &modulus;
        if r.is_negative() {
            r += &modulus;
        }
        Padic::normalize(p, v, r.to_biguint().unwrap(), prec)
    }

    pub fn from_i64(p: u64, n: i64, prec: u32) -> Padic {
        Padic::from_bigint(p, &BigInt::from(n), prec)
    }

    pub fn from_ratio(p: u64, q: &BigRational, prec: u32) -> Padic {
        if q.is_zero() {
            return Padic::exact_zero(p);
        }
        let num = Padic::from_bigint(p, q.numer(), prec);
        let den = Padic::from_bigint(p, q.denom(), prec);
        num.div(&den).expect("denominator is a nonzero rational")
    }

    pub fn one(p: u64, prec: u32) -> Padic {
        Padic::from_i64(p, 1, prec)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero_like(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    /// Exact valuation if the value is distinguishable from zero.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { val, .. } => Some(*val),
        }
    }

    /// A lower bound for the valuation that is always available.
    pub fn valuation_at_least(&self) -> i64 {
        match &self.repr {
            Repr::Zero { abs } => *abs,
            Repr::Unit { val, .. } => *val,
        }
    }

    /// Absolute precision: the value is known modulo p^(this).
    pub fn abs_prec(&self) -> i64 {
        match &self.repr {
            Repr::Zero { abs } => *abs,
            Repr::Unit { val, rel, .. } => val + *rel as i64,
        }
    }

    /// The unit part and its relative precision, for units.
    pub fn unit_part(&self) -> Option<(&BigUint, u32)> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { unit, rel, .. } => Some((unit, *rel)),
        }
    }

    /// Truncate to at most the given absolute precision.
    pub fn truncate_abs(&self, abs: i64) -> Padic {
        match &self.repr {
            Repr::Zero { abs: a } => Padic::zero(self.p, (*a).min(abs)),
            Repr::Unit { val, unit, rel } => {
                if abs <= *val {
                    Padic::zero(self.p, abs)
                } else {
                    let new_rel = ((abs - val) as u32).min(*rel);
                    Padic::normalize(self.p, *val, unit.clone(), new_rel)
                }
            }
        }
    }

    pub fn neg(&self) -> Padic {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Unit { val, unit, rel } => {
                let m = p_pow(self.p, *rel);
                Padic::normalize(self.p, *val, &m - (unit % &m), *rel)
            }
        }
    }

    pub fn add(&self, rhs: &Padic) -> Padic {
        assert_eq!(self.p, rhs.p, "mixed primes");
        let p = self.p;
        match (&self.repr, &rhs.repr) {
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => Padic::zero(p, *a.min(b)),
            (Repr::Zero { abs }, Repr::Unit { val, unit, rel }) |
            (Repr::Unit { val, unit, rel }, Repr::Zero { abs }) => {
                if *abs <= *val {
                    Padic::zero(p, *abs)
                } else {
                    let r = (*abs - *val).min(*rel as i64) as u32;
                    Padic::normalize(p, *val, unit.clone(), r)
                }
            }
            (
                Repr::Unit { val: v1, unit: u1, rel: r1 },
                Repr::Unit { val: v2, unit: u2, rel: r2 },
            ) => {
                let (v1, u1, r1, v2, u2, r2) = if v1 <= v2 {
                    (*v1, u1, *r1, *v2, u2, *r2)
                } else {
                    (*v2, u2, *r2, *v1, u1, *r1)
                };
                // Align at valuation v1.
                let shift = (v2 - v1) as u32;
                let rel = r1.min(shift.saturating_add(r2));
                let m = p_pow(p, rel);
                let sum = (u1 % &m) + (u2 * p_pow(p, shift.min(rel))) % &m;
                Padic::normalize(p, v1, sum, rel)
            }
        }
    }

    pub fn sub(&self, rhs: &Padic) -> Padic {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Padic) -> Padic {
        assert_eq!(self.p, rhs.p, "mixed primes");
        let p = self.p;
        match (&self.repr, &rhs.repr) {
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => {
                Padic::zero(p, a.saturating_add(*b).min(EXACT_PREC))
            }
            (Repr::Zero { abs }, Repr::Unit { val, .. }) |
            (Repr::Unit { val, .. }, Repr::Zero { abs }) => {
                Padic::zero(p, abs.saturating_add(*val).min(EXACT_PREC))
            }
            (
                Repr::Unit { val: v1, unit: u1, rel: r1 },
                Repr::Unit { val: v2, unit: u2, rel: r2 },
            ) => {
                let rel = (*r1).min(*r2);
                let m = p_pow(p, rel);
                Padic::normalize(p, v1 + v2, (u1 * u2) % &m, rel)
            }
        }
    }

    pub fn mul_i64(&self, k: i64) -> Padic {
        self.mul(&Padic::from_i64(self.p, k, self.rel_or_default()))
    }

    fn rel_or_default(&self) -> u32 {
        match &self.repr {
            Repr::Zero { abs } => (*abs).clamp(1, 1 << 20) as u32,
            Repr::Unit { rel, .. } => *rel,
        }
    }

    pub fn inv(&self) -> Result<Padic> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::Domain(
                "inverse of a value indistinguishable from zero".into(),
            )),
            Repr::Unit { val, unit, rel } => {
                let m = p_pow(self.p, *rel);
                let ui = inv_mod(unit, &m).expect("unit is invertible");
                Ok(Padic::normalize(self.p, -val, ui, *rel))
            }
        }
    }

    pub fn div(&self, rhs: &Padic) -> Result<Padic> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Multiply by p^k (exact rescaling).
    pub fn shift(&self, k: i64) -> Padic {
        match &self.repr {
            Repr::Zero { abs } => Padic::zero(self.p, abs.saturating_add(k).min(EXACT_PREC)),
            Repr::Unit { val, unit, rel } => Padic {
                p: self.p,
                repr: Repr::Unit { val: val + k, unit: unit.clone(), rel: *rel },
            },
        }
    }

    pub fn pow(&self, e: i64) -> Result<Padic> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        match &self.repr {
            Repr::Zero { abs } => {
                if e == 0 {
                    Ok(Padic::one(self.p, self.rel_or_default()))
                } else {
                    Ok(Padic::zero(
                        self.p,
                        abs.saturating_mul(e).min(EXACT_PREC),
                    ))
                }
            }
            Repr::Unit { val, unit, rel } => {
                let m = p_pow(self.p, *rel);
                let u = unit.modpow(&BigUint::from(e as u64), &m);
                Ok(Padic::normalize(self.p, val * e, u, *rel))
            }
        }
    }

    /// Teichmüller representative of the unit part: the (p-1)st root of
    /// unity congruent to the unit mod p. Requires valuation zero.
    pub fn teichmuller(&self) -> Result<Padic> {
        match &self.repr {
            Repr::Unit { val: 0, unit, rel } => {
                let m = p_pow(self.p, *rel);
                let mut x = unit.clone();
                for _ in 0..*rel {
                    x = x.modpow(&BigUint::from(self.p), &m);
                }
                Ok(Padic::normalize(self.p, 0, x, *rel))
            }
            _ => Err(Error::Domain("teichmuller requires a unit of valuation 0".into())),
        }
    }

    /// Iwasawa-branch p-adic logarithm of a unit: log(u) with log p = 0,
    /// computed as log of the principal-unit part u/ω(u).
    pub fn iwasawa_log(&self) -> Result<Padic> {
        match &self.repr {
            Repr::Unit { val: 0, .. } => {}
            _ => return Err(Error::Domain("log requires a unit of valuation 0".into())),
        }
        let om = self.teichmuller()?;
        let w = self.div(&om)?;
        let one = Padic::one(self.p, w.rel_or_default());
        let z = one.sub(&w); // v_p(z) >= 1
        debug_assert!(z.valuation_at_least() >= 1);
        // log(1 - z) = -Σ z^k / k. Terms have valuation >= k - log_p(k), so
        // running k to 2·target + 24 certainly exhausts the precision.
        let target = z.abs_prec();
        let mut acc = Padic::zero(self.p, target);
        let mut zk = z.clone();
        for k in 1..=(2 * target.max(1) + 24) {
            let term = zk.div(&Padic::from_i64(self.p, k, z.rel_or_default()))?;
            acc = acc.sub(&term);
            if zk.valuation_at_least() > target + ilog_p(self.p, 2 * target.max(1) as u64 + 24) as i64 {
                break;
            }
            zk = zk.mul(&z);
        }
        Ok(acc)
    }

    /// p-adic exponential; converges for valuation >= 1 (p odd).
    pub fn exp(&self) -> Result<Padic> {
        if self.valuation_at_least() < 1 {
            return Err(Error::Domain("exp requires valuation >= 1".into()));
        }
        // Terms x^k/k! have valuation >= k - (k - s_p(k))/(p-1) >= k/2 for
        // p >= 3, so k up to 2·target + 24 exhausts the precision.
        let rel = self.rel_or_default();
        let target = self.abs_prec();
        let mut acc = Padic::one(self.p, rel);
        let mut term = Padic::one(self.p, rel);
        for k in 1..=(2 * target.max(1) + 24) {
            term = term.mul(self).div(&Padic::from_i64(self.p, k, rel))?;
            acc = acc.add(&term);
            if term.valuation_at_least() > target + ilog_p(self.p, 2 * target.max(1) as u64 + 24) as i64 {
                break;
            }
        }
        Ok(acc)
    }

    /// h-th root of a unit, when it is canonical: requires gcd(h, p-1) = 1
    /// and p not dividing h, so exactly one root exists and Hensel applies.
    pub fn nth_root(&self, h: u32) -> Result<Padic> {
        if h == 0 {
            return Err(Error::Domain("0th root".into()));
        }
        if h == 1 {
            return Ok(self.clone());
        }
        let (val, rel) = match &self.repr {
            Repr::Unit { val, rel, .. } => (*val, *rel),
            Repr::Zero { .. } => {
                return Err(Error::Domain("nth root of a value indistinguishable from zero".into()))
            }
        };
        if val % h as i64 != 0 {
            return Err(Error::Refused(format!(
                "valuation {} not divisible by root order {}",
                val, h
            )));
        }
        if self.p % h as u64 == 0 {
            return Err(Error::Refused("root order divisible by p".into()));
        }
        if num_integer::gcd(h as u64, self.p - 1) != 1 {
            return Err(Error::Refused(format!(
                "{}-th root is not unique: gcd with p-1 is {}",
                h,
                num_integer::gcd(h as u64, self.p - 1)
            )));
        }
        // Unit group mod p^rel has order p^(rel-1)(p-1); invert h there.
        let group_order = p_pow(self.p, rel - 1) * BigUint::from(self.p - 1);
        let hinv = inv_mod(&BigUint::from(h), &group_order)
            .expect("h invertible by the gcd checks");
        let unit = self.shift(-val);
        let root = match &unit.repr {
            Repr::Unit { unit: u, rel, .. } => {
                let m = p_pow(self.p, *rel);
                Padic::normalize(self.p, 0, u.modpow(&hinv, &m), *rel)
            }
            _ => unreachable!(),
        };
        Ok(root.shift(val / h as i64))
    }

    /// Valuation of (self - rhs), capped by the coarser absolute precision.
    pub fn agreement_depth(&self, rhs: &Padic) -> Depth {
        let d = self.sub(rhs);
        match &d.repr {
            Repr::Zero { abs } => Depth { depth: *abs, saturated: true },
            Repr::Unit { val, .. } => Depth { depth: *val, saturated: false },
        }
    }

    /// Digit expansion p^val · (d_0 + d_1 p + ...) for display; `None` for
    /// zero-like values.
    pub fn digits(&self) -> Option<(i64, Vec<u64>, u32)> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { val, unit, rel } => {
                let mut u = unit.clone();
                let pb = BigUint::from(self.p);
                let mut ds = Vec::with_capacity(*rel as usize);
                for _ in 0..*rel {
                    ds.push((&u % &pb).to_u64().unwrap());
                    u /= &pb;
                }
                Some((*val, ds, *rel))
            }
        }
    }

    /// Canonical display string, e.g. `3^-1 * (2 + 1*3 + O(3^4))`.
    pub fn display_string(&self) -> String {
        match self.digits() {
            None => format!("O({}^{})", self.p, self.abs_prec()),
            Some((val, ds, rel)) => {
                let mut terms = Vec::new();
                for (i, d) in ds.iter().enumerate() {
                    if *d != 0 {
                        terms.push(match i {
                            0 => format!("{}", d),
                            1 => format!("{}*{}", d, self.p),
                            _ => format!("{}*{}^{}", d, self.p, i),
                        });
                    }
                }
                let body = format!("{} + O({}^{})", terms.join(" + "), self.p, rel);
                if val == 0 {
                    body
                } else {
                    format!("{}^{} * ({})", self.p, val, body)
                }
            }
        }
    }
}

impl fmt::Debug for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_string())
    }
}

fn ilog_p(p: u64, mut n: u64) -> u32 {
    let mut k = 0;
    while n >= p {
        n /= p;
        k += 1;
    }
    k
}
