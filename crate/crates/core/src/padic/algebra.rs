//! The coefficient arena Z_p[x]/(g(x), p^prec).
//!
//! Two flavors share one engine: the full cyclotomic algebra (g = Φ_m),
//! whose components sweep all completions of Q(ζ_m) above p at once, and an
//! unramified field (g = one canonical Hensel factor of Φ_m mod p, p ∤ m).
//!
//! Elements carry a global power-of-p scale: value = p^scale · (integer
//! coefficient vector mod p^prec). The scale absorbs divisions by p exactly,
//! so evaluators like the finite Kubota-Leopoldt sums can divide by their
//! p-divisible normalizing factors without losing tracked precision, and
//! identity checks report depth as scale plus the minimum coefficient
//! valuation of the difference.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use std::sync::Arc;

use super::number::{Depth, Padic};
use super::{inv_mod, mult_order, p_pow};
use crate::error::{Error, Result};
use crate::exact::cyclotomic::CycNum;
use crate::exact::poly::cyclotomic_polynomial;

#[derive(Clone, Debug)]
enum Kind {
    /// Z_p[x]/(Φ_m, p^prec); m = m' · p^a with p ∤ m'.
    Cyclotomic { m: u64, m_prime: u64, a: u32 },
    /// Z_p[y]/(g, p^prec) for an irreducible degree-f factor g of Φ_m mod p,
    /// p ∤ m: the unramified extension of degree f, with y a primitive m-th
    /// root of unity.
    Field { m: u64, f: u32 },
}

pub struct AlgCtx {
    p: u64,
    prec: u32,
    pm: BigUint,
    /// Monic modulus, ascending, reduced mod p^prec; length deg+1.
    modulus: Vec<BigUint>,
    /// (p^prec - g_j) mod p^prec for the reduction loop.
    neg_modulus: Vec<BigUint>,
    kind: Kind,
}

#[derive(Clone)]
pub struct AlgEl {
    /// value = p^scale · Σ coeffs[i] x^i
    pub scale: i64,
    /// Coefficients valid modulo p^prec (always stored mod the context
    /// modulus; prec only annotates how many digits are meaningful).
    pub prec: u32,
    coeffs: Vec<BigUint>,
}

impl AlgCtx {
    fn build(p: u64, prec: u32, modulus_exact: &[BigInt], kind: Kind) -> Arc<AlgCtx> {
        assert!(p >= 3 && p % 2 == 1, "odd primes only");
        assert!(prec >= 1);
        let pm = p_pow(p, prec);
        let pmi = BigInt::from(pm.clone());
        let modulus: Vec<BigUint> = modulus_exact
            .iter()
            .map(|c| {
                let mut r = c % &pmi;
                if r < BigInt::zero() {
                    r += &pmi;
                }
                r.to_biguint().unwrap()
            })
            .collect();
        assert!(modulus.last() == Some(&BigUint::one()), "modulus must be monic");
        let neg_modulus = modulus
            .iter()
            .map(|c| {
                if c.is_zero() {
                    BigUint::zero()
                } else {
                    &pm - c
                }
            })
            .collect();
        Arc::new(AlgCtx { p, prec, pm, modulus, neg_modulus, kind })
    }

    /// Full cyclotomic algebra Z_p[x]/(Φ_m, p^prec).
    pub fn cyclotomic(p: u64, m: u64, prec: u32) -> Arc<AlgCtx> {
        let mut m_prime = m;
        let mut a = 0u32;
        while m_prime % p == 0 {
            m_prime /= p;
            a += 1;
        }
        let phi = cyclotomic_polynomial(m);
        AlgCtx::build(p, prec, &phi, Kind::Cyclotomic { m, m_prime, a })
    }

    /// Unramified field from a canonical irreducible factor of Φ_m mod p
    /// (the lexicographically smallest one, lifted by Hensel). Requires
    /// p ∤ m.
    pub fn unramified_factor(p: u64, m: u64, prec: u32) -> Result<Arc<AlgCtx>> {
        if m % p == 0 {
            return Err(Error::Domain(format!(
                "unramified field requires p ∤ m, got p = {}, m = {}",
                p, m
            )));
        }
        let g = super::hensel::canonical_cyclotomic_factor(p, m, prec)?;
        let f = g.len() as u32 - 1;
        let gi: Vec<BigInt> = g.into_iter().map(BigInt::from).collect();
        Ok(AlgCtx::build(p, prec, &gi, Kind::Field { m, f }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// The root-of-unity order carried by the generator.
    pub fn zeta_order(&self) -> u64 {
        match self.kind {
            Kind::Cyclotomic { m, .. } => m,
            Kind::Field { m, .. } => m,
        }
    }

    pub fn zero(&self) -> AlgEl {
        AlgEl { scale: 0, prec: self.prec, coeffs: vec![BigUint::zero(); self.degree()] }
    }

    pub fn one(&self) -> AlgEl {
        self.from_u64(1)
    }

    pub fn from_u64(&self, n: u64) -> AlgEl {
        let mut e = self.zero();
        e.coeffs[0] = BigUint::from(n) % &self.pm;
        e
    }

    pub fn from_bigint(&self, n: &BigInt) -> AlgEl {
        let pmi = BigInt::from(self.pm.clone());
        let mut r = n % &pmi;
        if r < BigInt::zero() {
            r += &pmi;
        }
        let mut e = self.zero();
        e.coeffs[0] = r.to_biguint().unwrap();
        e
    }

    /// Embed a p-adic scalar (its valuation becomes the scale).
    pub fn from_padic(&self, x: &Padic) -> AlgEl {
        assert_eq!(x.p(), self.p);
        match x.unit_part() {
            None => AlgEl {
                scale: x.abs_prec(),
                prec: 0,
                coeffs: vec![BigUint::zero(); self.degree()],
            },
            Some((u, rel)) => {
                let mut e = self.zero();
                e.coeffs[0] = u % &self.pm;
                e.prec = rel.min(self.prec);
                e.scale = x.valuation().unwrap();
                e
            }
        }
    }

    /// x^k: the image of ζ_m^k.
    pub fn zeta_pow(&self, k: i64) -> AlgEl {
        let m = self.zeta_order();
        let k = k.rem_euclid(m as i64) as u64;
        let mut raw = vec![BigUint::zero(); k as usize + 1];
        raw[k as usize] = BigUint::one();
        AlgEl { scale: 0, prec: self.prec, coeffs: self.reduce(raw) }
    }

    /// Embed an exact cyclotomic number; its field's root order must divide
    /// (or equal) this algebra's. Rational coefficients are handled by
    /// factoring the denominator into a p-power (goes into the scale) and a
    /// unit (inverted mod p^prec).
    pub fn embed_cyc(&self, c: &CycNum) -> AlgEl {
        let m = self.zeta_order();
        assert_eq!(
            m % c.modulus(),
            0,
            "cyclotomic element of order {} does not fit in arena of order {}",
            c.modulus(),
            m
        );
        let step = (m / c.modulus()) as i64;
        let coeffs = c.coeff_vector();
        let mut acc = self.zero();
        for (i, q) in coeffs.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let term = self.zeta_pow(step * i as i64);
            let term = self.mul_ratio(&term, q.numer(), q.denom());
            acc = self.add(&acc, &term);
        }
        acc
    }

    fn reduce(&self, mut raw: Vec<BigUint>) -> Vec<BigUint> {
        let n = self.degree();
        for c in raw.iter_mut() {
            *c %= &self.pm;
        }
        if raw.len() <= n {
            raw.resize(n, BigUint::zero());
            return raw;
        }
        for i in (n..raw.len()).rev() {
            let c = std::mem::take(&mut raw[i]);
            if c.is_zero() {
                continue;
            }
            for j in 0..n {
                if !self.neg_modulus[j].is_zero() {
                    raw[i - n + j] = (&raw[i - n + j] + &c * &self.neg_modulus[j]) % &self.pm;
                }
            }
        }
        raw.truncate(n);
        raw
    }

    pub fn add(&self, a: &AlgEl, b: &AlgEl) -> AlgEl {
        // Align scales at the smaller one. Shifts are clamped to the working
        // precision: p^prec is zero in the coefficient ring, and exact-zero
        // embeddings carry enormous scales.
        let scale = a.scale.min(b.scale);
        let (da, db) = (a.scale - scale, b.scale - scale);
        let prec = (a.prec as i64 + da)
            .min(b.prec as i64 + db)
            .min(self.prec as i64)
            .max(0) as u32;
        let fa = p_pow(self.p, da.min(self.prec as i64) as u32);
        let fb = p_pow(self.p, db.min(self.prec as i64) as u32);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| (x * &fa + y * &fb) % &self.pm)
            .collect();
        AlgEl { scale, prec, coeffs }
    }

    pub fn neg(&self, a: &AlgEl) -> AlgEl {
        let coeffs = a
            .coeffs
            .iter()
            .map(|c| if c.is_zero() { BigUint::zero() } else { &self.pm - c })
            .collect();
        AlgEl { scale: a.scale, prec: a.prec, coeffs }
    }

    pub fn sub(&self, a: &AlgEl, b: &AlgEl) -> AlgEl {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &AlgEl, b: &AlgEl) -> AlgEl {
        let n = self.degree();
        let mut raw = vec![BigUint::zero(); 2 * n - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] = (&raw[i + j] + x * y) % &self.pm;
                }
            }
        }
        AlgEl {
            scale: a.scale + b.scale,
            prec: a.prec.min(b.prec),
            coeffs: self.reduce(raw),
        }
    }

    pub fn mul_u64(&self, a: &AlgEl, k: u64) -> AlgEl {
        let kb = BigUint::from(k) % &self.pm;
        let coeffs = a.coeffs.iter().map(|c| (c * &kb) % &self.pm).collect();
        AlgEl { scale: a.scale, prec: a.prec, coeffs }
    }

    /// Multiply by the rational n/d: p-parts of n and d go into the scale.
    pub fn mul_ratio(&self, a: &AlgEl, n: &BigInt, d: &BigInt) -> AlgEl {
        assert!(!d.is_zero());
        let p = BigInt::from(self.p);
        let mut n = n.clone();
        let mut d = d.clone();
        let mut scale_delta: i64 = 0;
        if !n.is_zero() {
            while (&n % &p).is_zero() {
                n /= &p;
                scale_delta += 1;
            }
        }
        while (&d % &p).is_zero() {
            d /= &p;
            scale_delta -= 1;
        }
        let pmi = BigInt::from(self.pm.clone());
        let mut nn = &n % &pmi;
        if nn < BigInt::zero() {
            nn += &pmi;
        }
        let mut dd = &d % &pmi;
        if dd < BigInt::zero() {
            dd += &pmi;
        }
        let dinv = inv_mod(&dd.to_biguint().unwrap(), &self.pm).expect("unit denominator");
        let factor = (nn.to_biguint().unwrap() * dinv) % &self.pm;
        let coeffs = a.coeffs.iter().map(|c| (c * &factor) % &self.pm).collect();
        AlgEl { scale: a.scale + scale_delta, prec: a.prec, coeffs }
    }

    /// Divide by an integer k: the p-part of k moves the scale, the unit
    /// part is inverted mod p^prec. Exact, no precision loss.
    pub fn div_int(&self, a: &AlgEl, k: i64) -> AlgEl {
        self.mul_ratio(a, &BigInt::one(), &BigInt::from(k))
    }

    /// Multiply by p^k via the scale (exact).
    pub fn shift_scale(&self, a: &AlgEl, k: i64) -> AlgEl {
        AlgEl { scale: a.scale + k, prec: a.prec, coeffs: a.coeffs.clone() }
    }

    pub fn pow(&self, a: &AlgEl, e: &BigUint) -> AlgEl {
        // Scales accumulate through the multiplications, so the result ends
        // up at scale a.scale * e on its own.
        let mut acc = self.one();
        acc.prec = a.prec;
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Inverse of an element whose coefficient vector is a unit in the
    /// algebra (invertible mod p). Mod-p inverse by polynomial egcd, then
    /// Newton iterations u ← u(2 - a·u) double the precision.
    pub fn inv(&self, a: &AlgEl) -> Result<AlgEl> {
        let a0: Vec<u64> = a
            .coeffs
            .iter()
            .map(|c| (c % self.p).to_u64().unwrap())
            .collect();
        let g0: Vec<u64> = self
            .modulus
            .iter()
            .map(|c| (c % self.p).to_u64().unwrap())
            .collect();
        let inv0 = super::hensel::poly_inv_mod_p(self.p, &a0, &g0).ok_or_else(|| {
            Error::Domain("element is not invertible in the residue algebra".into())
        })?;
        let mut u = AlgEl {
            scale: 0,
            prec: self.prec,
            coeffs: {
                let mut v: Vec<BigUint> = inv0.into_iter().map(BigUint::from).collect();
                v.resize(self.degree(), BigUint::zero());
                v
            },
        };
        let unscaled = AlgEl { scale: 0, prec: a.prec, coeffs: a.coeffs.clone() };
        let two = self.from_u64(2);
        let mut k = 1u32;
        while k < self.prec {
            // u <- u (2 - a u)
            let au = self.mul(&unscaled, &u);
            let corr = self.sub(&two, &au);
            u = self.mul(&u, &corr);
            u.prec = self.prec;
            k *= 2;
        }
        u.prec = a.prec;
        u.scale = -a.scale;
        Ok(u)
    }

    pub fn div(&self, a: &AlgEl, b: &AlgEl) -> Result<AlgEl> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Galois substitution x ↦ x^t (full cyclotomic algebra only).
    pub fn galois(&self, a: &AlgEl, t: u64) -> AlgEl {
        let m = match self.kind {
            Kind::Cyclotomic { m, .. } => m,
            Kind::Field { .. } => panic!("galois substitution needs the full cyclotomic algebra"),
        };
        assert_eq!(num_integer::gcd(t % m, m), 1);
        let zt = self.zeta_pow((t % m) as i64);
        let mut acc = self.zero();
        acc.prec = a.prec;
        for i in (0..a.coeffs.len()).rev() {
            acc = self.mul(&acc, &zt);
            let mut c = self.zero();
            c.coeffs[0] = a.coeffs[i].clone();
            acc = self.add(&acc, &c);
        }
        acc.scale += a.scale;
        acc.prec = a.prec;
        acc
    }

    /// Frobenius x ↦ x^p. Sound when the modulus' roots are closed under
    /// p-th powers: the unramified field, or the full algebra with p ∤ m.
    pub fn frobenius(&self, a: &AlgEl) -> AlgEl {
        match self.kind {
            Kind::Field { .. } => {}
            Kind::Cyclotomic { m, .. } => {
                assert!(m % self.p != 0, "frobenius substitution needs p ∤ m");
                return self.galois(a, self.p % m);
            }
        }
        // Substitute x ↦ x^p by Horner over the coefficient vector.
        let xp = self.pow(&self.zeta_pow(1), &BigUint::from(self.p));
        let mut acc = self.zero();
        acc.prec = a.prec;
        for i in (0..a.coeffs.len()).rev() {
            acc = self.mul(&acc, &xp);
            let mut c = self.zero();
            c.coeffs[0] = a.coeffs[i].clone();
            acc = self.add(&acc, &c);
        }
        acc.scale += a.scale;
        acc.prec = a.prec;
        acc
    }

    /// The residue parameters for the logarithm: f with every component's
    /// residue field inside F_{p^f}, and the p-power ramification depth hint.
    fn log_params(&self) -> (u32, u32) {
        match self.kind {
            Kind::Field { f, .. } => (f, 0),
            Kind::Cyclotomic { m_prime, a, .. } => {
                let f = if m_prime == 1 { 1 } else { mult_order(self.p % m_prime, m_prime) };
                (f, if a == 0 { 0 } else { a + 1 })
            }
        }
    }

    fn is_one_mod_p(&self, a: &AlgEl) -> bool {
        if a.scale != 0 {
            return false;
        }
        for (i, c) in a.coeffs.iter().enumerate() {
            let r = c % self.p;
            let want = if i == 0 { BigUint::one() } else { BigUint::zero() };
            if r != want {
                return false;
            }
        }
        true
    }

    /// Iwasawa logarithm of a unit u (coefficients invertible mod p, scale
    /// 0): log(u^e)/e for e = (p^f - 1) p^t, with t raised until u^e is
    /// congruent to 1 mod p coefficient-wise. The division by p^t moves the
    /// scale, so the reported precision honestly reflects the digits lost
    /// in ramified components.
    pub fn iwasawa_log(&self, u: &AlgEl) -> Result<AlgEl> {
        if u.scale != 0 {
            return Err(Error::Domain("algebra log requires scale 0".into()));
        }
        let (f, t0) = self.log_params();
        let q = p_pow(self.p, f) - BigUint::one();
        let pb = BigUint::from(self.p);
        let mut w = self.pow(u, &q);
        for _ in 0..t0 {
            w = self.pow(&w, &pb);
        }
        let mut t = t0;
        while !self.is_one_mod_p(&w) {
            w = self.pow(&w, &pb);
            t += 1;
            if t > t0 + 8 + self.prec {
                return Err(Error::Domain(
                    "unit does not become principal within the expected exponent range".into(),
                ));
            }
        }
        // log(w) = -Σ (1-w)^k / k, each term's coefficients gaining p-adic
        // valuation at least k - v_p(k).
        let z = self.sub(&self.one_with_prec(w.prec), &w);
        let mut acc = self.zero();
        acc.prec = w.prec;
        let mut zk = z.clone();
        let kmax = 2 * self.prec as i64 + 24;
        for k in 1..=kmax {
            let term = self.div_int(&zk, k);
            acc = self.sub(&acc, &term);
            if k < kmax {
                zk = self.mul(&zk, &z);
            }
        }
        // Divide by e = (p^f - 1) p^t.
        let qinum = BigInt::from(q);
        let acc = self.mul_ratio(&acc, &BigInt::one(), &qinum);
        Ok(self.shift_scale(&acc, -(t as i64)))
    }

    fn one_with_prec(&self, prec: u32) -> AlgEl {
        let mut e = self.one();
        e.prec = prec;
        e
    }

    /// Carry an element of a smaller cyclotomic arena into this one along
    /// the canonical map ζ_src ↦ ζ_self^(m/m_src). Both contexts must share
    /// p; the source root order must divide this one's.
    pub fn embed_from(&self, src: &AlgCtx, a: &AlgEl) -> AlgEl {
        assert_eq!(src.p, self.p, "embeddings must stay over one prime");
        let m_src = src.zeta_order();
        let m = self.zeta_order();
        assert_eq!(
            m % m_src,
            0,
            "no canonical map from order {} into order {}",
            m_src,
            m
        );
        let z = self.zeta_pow((m / m_src) as i64);
        let prec = a.prec.min(self.prec);
        let mut acc = self.zero();
        acc.prec = prec;
        for c in a.coeffs.iter().rev() {
            acc = self.mul(&acc, &z);
            let mut t = self.zero();
            t.coeffs[0] = c % &self.pm;
            acc = self.add(&acc, &t);
        }
        acc.scale += a.scale;
        acc.prec = prec;
        acc
    }

    /// Horner evaluation of a polynomial with coefficients in this context.
    pub fn eval_poly(&self, poly: &[AlgEl], x: &AlgEl) -> AlgEl {
        let mut acc = self.zero();
        for c in poly.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    /// Roots of a polynomial over an unramified field context: exhaustive
    /// search in the residue field, then Newton lifting. Only simple roots
    /// (derivative a unit) are returned, in a deterministic order.
    pub fn roots_in_field(&self, poly: &[AlgEl]) -> Result<Vec<AlgEl>> {
        if !matches!(self.kind, Kind::Field { .. }) {
            return Err(Error::Domain(
                "root search requires an unramified field context".into(),
            ));
        }
        for c in poly {
            if c.scale != 0 {
                return Err(Error::Domain(
                    "root search needs integral coefficients at scale 0".into(),
                ));
            }
        }
        let to_fp = |coeffs: &[BigUint]| -> Vec<u64> {
            let mut v: Vec<u64> = coeffs.iter().map(|c| (c % self.p).to_u64().unwrap()).collect();
            while v.last() == Some(&0) {
                v.pop();
            }
            v
        };
        let h = to_fp(&self.modulus);
        let poly0: Vec<Vec<u64>> = poly.iter().map(|c| to_fp(&c.coeffs)).collect();
        let deriv: Vec<AlgEl> = poly
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.mul_u64(c, i as u64))
            .collect();
        let mut out = Vec::new();
        for r0 in super::hensel::gf_roots(self.p, &h, &poly0) {
            let mut r = self.zero();
            for (i, &c) in r0.iter().enumerate() {
                r.coeffs[i] = BigUint::from(c);
            }
            if self.inv(&self.eval_poly(&deriv, &r)).is_err() {
                continue; // multiple root mod p: not liftable this way
            }
            // Newton: r <- r - f(r)/f'(r), quadratic convergence.
            let mut prec_reached = 1u32;
            while prec_reached < self.prec {
                let fr = self.eval_poly(poly, &r);
                let dr = self.eval_poly(&deriv, &r);
                r = self.sub(&r, &self.mul(&fr, &self.inv(&dr)?));
                r.prec = self.prec;
                prec_reached = prec_reached.saturating_mul(2);
            }
            let check = self.eval_poly(poly, &r);
            debug_assert!(self.depth_vs_zero(&check).saturated);
            out.push(r);
        }
        Ok(out)
    }

    /// If the element is a scalar (all higher coefficients vanish to working
    /// precision), return it as a p-adic number.
    pub fn to_padic(&self, a: &AlgEl) -> Option<Padic> {
        for c in a.coeffs.iter().skip(1) {
            if !(c % p_pow(self.p, a.prec)).is_zero() {
                return None;
            }
        }
        let u = &a.coeffs[0] % p_pow(self.p, a.prec);
        Some(
            Padic::from_bigint(self.p, &BigInt::from(u), a.prec)
                .shift(a.scale)
                .truncate_abs(a.scale + a.prec as i64),
        )
    }

    /// Minimum p-adic valuation across coefficients, plus the scale; capped
    /// by the element's precision (saturated means "zero as far as we can
    /// see").
    pub fn depth_vs_zero(&self, a: &AlgEl) -> Depth {
        let cap = a.prec;
        let mut best: Option<u32> = None;
        for c in &a.coeffs {
            let r = c % p_pow(self.p, cap);
            if r.is_zero() {
                continue;
            }
            let mut v = 0u32;
            let mut x = r;
            let pb = BigUint::from(self.p);
            while (&x % &pb).is_zero() {
                x /= &pb;
                v += 1;
            }
            best = Some(match best {
                None => v,
                Some(b) => b.min(v),
            });
            if best == Some(0) {
                break;
            }
        }
        match best {
            None => Depth { depth: a.scale + cap as i64, saturated: true },
            Some(v) => Depth { depth: a.scale + v as i64, saturated: false },
        }
    }

    pub fn agreement_depth(&self, a: &AlgEl, b: &AlgEl) -> Depth {
        self.depth_vs_zero(&self.sub(a, b))
    }

    /// Canonical report serialization: scale out front, then the nonzero
    /// coefficients as residues mod p^prec in powers of the generator z.
    pub fn display_el(&self, a: &AlgEl) -> String {
        let window = p_pow(self.p, a.prec.min(self.prec));
        let mut terms = Vec::new();
        for (i, c) in a.coeffs.iter().enumerate() {
            let c = c % &window;
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("{}", c),
                1 => format!("{}*z", c),
                _ => format!("{}*z^{}", c, i),
            });
        }
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        let tail = format!("{} + O({}^{})", body, self.p, a.prec.min(self.prec));
        if a.scale == 0 {
            format!("({})", tail)
        } else {
            format!("{}^{} * ({})", self.p, a.scale, tail)
        }
    }
}

impl AlgEl {
    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }
}

/// The canonical embedding Q(ζ_m) → Q_p, defined when m divides p-1:
/// ζ_m goes to the Teichmüller lift of g^((p-1)/m) for the smallest
/// primitive root g mod p. Values of characters built on the same
/// discrete-logarithm convention land on their honest Teichmüller images.
pub fn cyc_into_qp(p: u64, prec: u32, v: &CycNum) -> Result<Padic> {
    let m = v.modulus();
    if (p - 1) % m != 0 {
        return Err(Error::Domain(format!(
            "no canonical {}th root of unity in Q_{}",
            m, p
        )));
    }
    let g = (2..p)
        .find(|&g| mult_order(g, p) as u64 == p - 1)
        .expect("p has a primitive root");
    let r0 = BigUint::from(g)
        .modpow(&BigUint::from((p - 1) / m), &BigUint::from(p))
        .to_u64()
        .unwrap();
    let root = Padic::from_i64(p, r0 as i64, prec).teichmuller()?;
    let mut acc = Padic::exact_zero(p);
    for q in v.coeff_vector().iter().rev() {
        acc = acc.mul(&root).add(&Padic::from_ratio(p, q, prec));
    }
    Ok(acc)
}

impl fmt::Debug for AlgEl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p^{} * {:?} (prec {})", self.scale, self.coeffs, self.prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_relations_in_full_algebra() {
        let ctx = AlgCtx::cyclotomic(7, 5, 8);
        let z = ctx.zeta_pow(1);
        let z5 = ctx.pow(&z, &BigUint::from(5u32));
        let d = ctx.agreement_depth(&z5, &ctx.one());
        assert!(d.saturated, "ζ_5^5 = 1: {:?}", d);
        // 1 + z + z^2 + z^3 + z^4 = 0
        let mut s = ctx.one();
        for k in 1..5 {
            s = ctx.add(&s, &ctx.zeta_pow(k));
        }
        let d = ctx.depth_vs_zero(&s);
        assert!(d.saturated);
    }

    #[test]
    fn scale_tracks_exact_p_division() {
        let ctx = AlgCtx::cyclotomic(5, 3, 6);
        let a = ctx.from_u64(35); // 5 * 7
        let b = ctx.div_int(&a, 5);
        let d = ctx.agreement_depth(&b, &ctx.from_u64(7));
        assert!(d.saturated, "{:?}", d);
        // 1/5 has scale -1 but still full digits of precision.
        let c = ctx.div_int(&ctx.one(), 5);
        assert_eq!(c.scale, -1);
        assert_eq!(c.prec, 6);
    }

    #[test]
    fn inverse_in_algebra() {
        let ctx = AlgCtx::cyclotomic(7, 12, 9);
        // 2 + ζ_12 is a unit in every component.
        let a = ctx.add(&ctx.from_u64(2), &ctx.zeta_pow(1));
        let ai = ctx.inv(&a).unwrap();
        let prod = ctx.mul(&a, &ai);
        let d = ctx.agreement_depth(&prod, &ctx.one());
        assert!(d.saturated, "{:?} * inv = {:?}", a, prod);
    }

    #[test]
    fn galois_respects_multiplication() {
        let ctx = AlgCtx::cyclotomic(5, 12, 7);
        let a = ctx.add(&ctx.from_u64(3), &ctx.zeta_pow(1));
        let b = ctx.sub(&ctx.zeta_pow(5), &ctx.from_u64(1));
        let lhs = ctx.galois(&ctx.mul(&a, &b), 7);
        let rhs = ctx.mul(&ctx.galois(&a, 7), &ctx.galois(&b, 7));
        let d = ctx.agreement_depth(&lhs, &rhs);
        assert!(d.saturated);
    }

    #[test]
    fn log_is_homomorphic_etale() {
        // p = 7, m = 5: étale, f = 4.
        let ctx = AlgCtx::cyclotomic(7, 5, 8);
        let a = ctx.add(&ctx.from_u64(2), &ctx.zeta_pow(1));
        let b = ctx.add(&ctx.from_u64(1), &ctx.zeta_pow(3));
        let la = ctx.iwasawa_log(&a).unwrap();
        let lb = ctx.iwasawa_log(&b).unwrap();
        let lab = ctx.iwasawa_log(&ctx.mul(&a, &b)).unwrap();
        let d = ctx.agreement_depth(&lab, &ctx.add(&la, &lb));
        assert!(d.depth >= 7, "{:?}", d);
    }

    #[test]
    fn log_kills_roots_of_unity() {
        let ctx = AlgCtx::cyclotomic(7, 5, 8);
        let z = ctx.zeta_pow(2);
        let lz = ctx.iwasawa_log(&z).unwrap();
        let d = ctx.depth_vs_zero(&lz);
        assert!(d.depth >= 7, "{:?}", d);
    }

    #[test]
    fn log_in_ramified_algebra() {
        // p = 3, m = 9: fully ramified part present.
        let ctx = AlgCtx::cyclotomic(3, 9, 12);
        let a = ctx.add(&ctx.from_u64(1), &ctx.mul_u64(&ctx.zeta_pow(1), 3));
        let b = ctx.add(&ctx.from_u64(1), &ctx.mul_u64(&ctx.zeta_pow(5), 3));
        let la = ctx.iwasawa_log(&a).unwrap();
        let lb = ctx.iwasawa_log(&b).unwrap();
        let lab = ctx.iwasawa_log(&ctx.mul(&a, &b)).unwrap();
        let d = ctx.agreement_depth(&lab, &ctx.add(&la, &lb));
        // Ramified components cost digits; still expect solid depth.
        assert!(d.depth >= 6, "{:?}", d);
    }

    #[test]
    fn embed_exact_cyclotomic() {
        use crate::exact::rational::rat;
        let ctx = AlgCtx::cyclotomic(7, 12, 8);
        let c = CycNum::zeta(12).scale(&rat(2, 3)); // (2/3) ζ_12
        let e = ctx.embed_cyc(&c);
        let want = ctx.mul_ratio(&ctx.zeta_pow(1), &BigInt::from(2), &BigInt::from(3));
        let d = ctx.agreement_depth(&e, &want);
        assert!(d.saturated);
    }

    #[test]
    fn unramified_field_roots_and_frobenius() {
        // Degree-4 unramified field over Q_7 containing μ_5.
        let ctx = AlgCtx::unramified_factor(7, 5, 8).unwrap();
        assert_eq!(ctx.degree(), 4);
        let zeta = ctx.zeta_pow(1);
        // ζ_5 has the two square roots ±ζ_10 here (μ_2400 contains μ_10).
        let poly = [ctx.neg(&zeta), ctx.zero(), ctx.one()];
        let roots = ctx.roots_in_field(&poly).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            let sq = ctx.mul(r, r);
            assert!(ctx.agreement_depth(&sq, &zeta).saturated);
        }
        // Frobenius has exact order f = 4 on the generator.
        let mut x = ctx.zeta_pow(1);
        for _ in 0..4 {
            x = ctx.frobenius(&x);
        }
        assert!(ctx.agreement_depth(&x, &ctx.zeta_pow(1)).saturated);
        let once = ctx.frobenius(&ctx.zeta_pow(1));
        assert!(!ctx.agreement_depth(&once, &ctx.zeta_pow(1)).saturated);
    }

    #[test]
    fn embedding_between_arenas() {
        // ζ_4 ↦ ζ_12^3: sums, products, and scales must commute with the map.
        let small = AlgCtx::cyclotomic(7, 4, 8);
        let big = AlgCtx::cyclotomic(7, 12, 8);
        let a = small.add(&small.zeta_pow(1), &small.div_int(&small.from_u64(3), 7));
        let img = big.embed_from(&small, &a);
        let want = big.add(&big.zeta_pow(3), &big.div_int(&big.from_u64(3), 7));
        assert!(big.agreement_depth(&img, &want).saturated);
        let b = small.sub(&small.from_u64(2), &small.zeta_pow(3));
        let lhs = big.embed_from(&small, &small.mul(&a, &b));
        let rhs = big.mul(&img, &big.embed_from(&small, &b));
        assert!(big.agreement_depth(&lhs, &rhs).saturated);
    }

    #[test]
    fn padic_round_trip() {
        let ctx = AlgCtx::cyclotomic(5, 4, 8);
        let x = Padic::from_ratio(
            5,
            &num_rational::BigRational::new(BigInt::from(7), BigInt::from(50)),
            8,
        );
        let e = ctx.from_padic(&x);
        let back = ctx.to_padic(&e).unwrap();
        let d = back.agreement_depth(&x);
        assert!(d.depth >= 5, "{:?} vs {:?}", back, x);
    }

    #[test]
    fn scalar_embedding_of_roots_of_unity() {
        // ζ_6 in Q_7 is the Teichmüller lift of 3 (the smallest primitive
        // root), so it reduces to 3 mod 7 and has exact order 6.
        let z = cyc_into_qp(7, 10, &CycNum::zeta(6)).unwrap();
        assert_eq!(z.digits().unwrap().1[0], 3);
        let z6 = z.pow(6).unwrap();
        assert!(z6.agreement_depth(&Padic::one(7, 10)).depth >= 10);
        let z3 = z.pow(3).unwrap();
        assert!(z3.agreement_depth(&Padic::from_i64(7, -1, 10)).depth >= 10);

        // Compatibility with powers: ζ_3 = ζ_6² under both embeddings.
        let w = cyc_into_qp(7, 10, &CycNum::zeta(3)).unwrap();
        assert!(w.agreement_depth(&z.mul(&z)).depth >= 10);

        // Rational elements come through untouched.
        let r = CycNum::from_rational(6, num_rational::BigRational::new(
            BigInt::from(3),
            BigInt::from(14),
        ));
        let back = cyc_into_qp(7, 10, &r).unwrap();
        let direct = Padic::from_ratio(
            7,
            &num_rational::BigRational::new(BigInt::from(3), BigInt::from(14)),
            10,
        );
        assert!(back.agreement_depth(&direct).depth >= 9);

        // No canonical 5th root inside Q_7.
        assert!(cyc_into_qp(7, 10, &CycNum::zeta(5)).is_err());
    }
}
