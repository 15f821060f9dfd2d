//! Formal products of cyclotomic generators 1 - zeta_m^a with exact
//! exponents in a cyclotomic field. Circular units, their norm maps down
//! the tower, the trivializing-subgroup norms, and the derivative operator
//! are all index bookkeeping here; nothing is evaluated numerically.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::chars::dirichlet::DirichletChar;
use crate::error::{Error, Result};
use crate::exact::bigfloat::BigComplex;
use crate::exact::cyclotomic::CycNum;
use crate::padic::{inv_mod, mult_order};

/// The residue x mod m1*m2 with x = a mod m1 and x = b mod m2. Moduli must
/// be coprime and small enough that their product fits comfortably in u64.
pub fn crt_pair(a: u64, m1: u64, b: u64, m2: u64) -> u64 {
    assert_eq!(num_integer::gcd(m1, m2), 1, "crt moduli must be coprime");
    if m2 == 1 {
        return a % m1.max(1);
    }
    let inv = inv_mod(&BigUint::from(m1 % m2), &BigUint::from(m2))
        .expect("coprime moduli are invertible")
        .to_u64()
        .expect("modulus fits u64");
    let a = a % m1;
    let diff = (b % m2 + m2 - a % m2) % m2;
    let t = ((diff as u128 * inv as u128) % m2 as u128) as u64;
    a + m1 * t
}

fn least_prime_factor(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 1;
    }
    n
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// A formal product prod_a (1 - zeta_m^a)^{e_a}, exponents in Q(zeta_w).
///
/// Indices live in 1..m; index 0 is rejected because its generator would
/// vanish. Multiplication adds exponent vectors, so equality of two formal
/// units is exact equality of the vectors, independent of any embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalUnit {
    m: u64,
    w: u64,
    terms: BTreeMap<u64, CycNum>,
}

impl FormalUnit {
    /// The empty product at level m with exponents in Q(zeta_w).
    pub fn one(m: u64, w: u64) -> FormalUnit {
        assert!(m >= 2, "cyclotomic level must be at least 2");
        assert!(w >= 1);
        FormalUnit { m, w, terms: BTreeMap::new() }
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn exponent_order(&self) -> u64 {
        self.w
    }

    pub fn is_one(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u64, &CycNum)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Multiply in (1 - zeta_m^a)^e. Zero exponents are dropped so the
    /// representation stays canonical.
    pub fn add_term(&mut self, a: u64, e: &CycNum) {
        assert_eq!(e.modulus(), self.w, "exponent order mismatch");
        let a = a % self.m;
        assert!(a != 0, "index 0 would make the generator vanish");
        if e.is_zero() {
            return;
        }
        let entry = self.terms.entry(a).or_insert_with(|| CycNum::zero(self.w));
        *entry = entry.add(e);
        if entry.is_zero() {
            self.terms.remove(&a);
        }
    }

    pub fn mul(&self, rhs: &FormalUnit) -> FormalUnit {
        assert_eq!(self.m, rhs.m, "levels must match");
        assert_eq!(self.w, rhs.w, "exponent orders must match");
        let mut out = self.clone();
        for (&a, e) in &rhs.terms {
            out.add_term(a, e);
        }
        out
    }

    pub fn inv(&self) -> FormalUnit {
        let terms = self.terms.iter().map(|(&a, e)| (a, e.neg())).collect();
        FormalUnit { m: self.m, w: self.w, terms }
    }

    /// Raise the whole unit to a cyclotomic exponent.
    pub fn scale_cyc(&self, c: &CycNum) -> FormalUnit {
        assert_eq!(c.modulus(), self.w, "exponent order mismatch");
        let mut out = FormalUnit::one(self.m, self.w);
        for (&a, e) in &self.terms {
            out.add_term(a, &e.mul(c));
        }
        out
    }

    pub fn scale_int(&self, k: i64) -> FormalUnit {
        self.scale_cyc(&CycNum::from_int(self.w, k))
    }

    /// The Galois twist sigma_t, acting on indices by multiplication.
    pub fn galois(&self, t: u64) -> FormalUnit {
        let t = t % self.m;
        assert_eq!(num_integer::gcd(t, self.m), 1, "galois index not coprime to level");
        let terms = self.terms.iter().map(|(&a, e)| (mul_mod(a, t, self.m), e.clone())).collect();
        FormalUnit { m: self.m, w: self.w, terms }
    }

    /// Evaluate under zeta_m -> exp(2 pi i / m). Defined only when every
    /// exponent is a rational integer; character-weighted units should be
    /// checked on their exponent vectors instead.
    pub fn eval_complex(&self, bits: u32) -> Result<BigComplex> {
        let mut num = BigComplex::one(bits);
        let mut den = BigComplex::one(bits);
        for (&a, e) in &self.terms {
            let r = e
                .as_rational()
                .filter(|r| r.is_integer())
                .ok_or_else(|| Error::Domain("complex evaluation needs integer exponents".into()))?;
            let k = r
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::Domain("exponent too large for evaluation".into()))?;
            let gen = BigComplex::one(bits).sub(&BigComplex::root_of_unity(self.m, a as i64, bits));
            let pw = gen.powi(k.unsigned_abs());
            if k >= 0 {
                num = num.mul(&pw);
            } else {
                den = den.mul(&pw);
            }
        }
        Ok(num.div(&den))
    }
}

impl fmt::Display for FormalUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (&a, e) in self.terms.iter().take(12) {
            let exp = match e.as_rational() {
                Some(r) => r.to_string(),
                None => format!("{:?}", e.poly().coeffs()),
            };
            parts.push(format!("(1-z{}^{})^({})", self.m, a, exp));
        }
        if self.terms.len() > 12 {
            parts.push(format!("... {} terms total", self.terms.len()));
        }
        write!(f, "{}", parts.join(" * "))
    }
}

fn require_even_prime_to_p(chi: &DirichletChar, p: u64) -> Result<DirichletChar> {
    let chi = chi.primitive();
    if chi.is_trivial() {
        return Err(Error::Domain("circular units need a nontrivial character".into()));
    }
    if chi.exponent_signed(-1) != Some(0) {
        return Err(Error::Domain("circular units need an even character".into()));
    }
    if chi.modulus() % p == 0 {
        return Err(Error::Domain("conductor must be prime to p".into()));
    }
    Ok(chi)
}

/// The level-n circular unit: the chi^{-1}-weighted product of generators
/// 1 - zeta_{N p^n}^{c(a)}, where c(a) lifts a in (Z/N)^* with trivial
/// p-part. Lifting with trivial p-part (rather than literally) is what
/// makes the tower norm-compatible: the p-descent law fixes exactly those
/// generators whose index is a unit at p.
pub fn circular_unit(chi: &DirichletChar, p: u64, n: u32) -> Result<FormalUnit> {
    let chi = require_even_prime_to_p(chi, p)?;
    let nn = chi.modulus();
    let q = p.pow(n);
    let inv = chi.inverse();
    let mut u = FormalUnit::one(nn * q, chi.order());
    for a in 1..nn {
        if chi.exponent(a).is_none() {
            continue;
        }
        let c = if n == 0 { a } else { crt_pair(a, nn, 1, q) };
        u.add_term(c, &inv.eval_cyc(a));
    }
    Ok(u)
}

/// Field norm down the cyclotomic tower, one prime of the index at a time.
///
/// For a single step from level m*q to level m, the generator law is: when
/// q divides the index the generator already lives downstairs and the norm
/// raises it to the relative degree (q if q still divides m, else q-1);
/// when q is invertible and survives in m the conjugates collapse onto the
/// same generator; otherwise Frobenius at q splits the norm into
/// (1 - zeta_m^c) / (1 - zeta_m^{c/q}). An index that lands on 0 at the
/// target level means the norm left the multiplicative lattice of
/// generators (it degenerates to a rational) and is reported as an error.
pub fn norm_map(u: &FormalUnit, m_target: u64) -> Result<FormalUnit> {
    if m_target < 2 || u.modulus() % m_target != 0 {
        return Err(Error::Domain(format!(
            "norm target {} must divide the level {}",
            m_target,
            u.modulus()
        )));
    }
    let mut cur = u.clone();
    while cur.modulus() != m_target {
        let q = least_prime_factor(cur.modulus() / m_target);
        cur = norm_step(&cur, q)?;
    }
    Ok(cur)
}

fn norm_step(u: &FormalUnit, q: u64) -> Result<FormalUnit> {
    let m_src = u.modulus();
    let m = m_src / q;
    let mut out = FormalUnit::one(m, u.exponent_order());
    for (&c, e) in u.terms() {
        if c % q == 0 {
            let deg = if m % q == 0 { q } else { q - 1 };
            out.add_term(c / q, &e.scale(&BigRational::from(BigInt::from(deg))));
        } else if m % q == 0 {
            out.add_term(c % m, e);
        } else {
            if c % m == 0 {
                return Err(Error::Domain(format!(
                    "norm of 1 - zeta_{}^{} to level {} degenerates to a rational",
                    m_src, c, m
                )));
            }
            let qi = inv_mod(&BigUint::from(q % m), &BigUint::from(m))
                .expect("step prime is invertible at the target level")
                .to_u64()
                .expect("modulus fits u64");
            out.add_term(c % m, e);
            out.add_term(mul_mod(qi, c % m, m), &e.neg());
        }
    }
    Ok(out)
}

/// The norm of 1 - zeta_{N p^{n+1}} down to the layer fixed by
/// {t : chi(t) = 1, t = 1 mod p^n}: a plain (exponent-one) product over
/// that subgroup's orbit. Projecting with `chi_project` and norming to the
/// conductor recovers the circular unit up to the Frobenius factor.
pub fn xi_unit(chi: &DirichletChar, p: u64, n: u32) -> Result<FormalUnit> {
    let chi = require_even_prime_to_p(chi, p)?;
    let nn = chi.modulus();
    let q = p.pow(n + 1);
    let w = chi.order();
    let one_exp = CycNum::one(w);
    let mut u = FormalUnit::one(nn * q, w);
    for b in 1..nn {
        if chi.exponent(b) != Some(0) {
            continue;
        }
        for j in 0..p {
            let tp = 1 + p.pow(n) * j;
            if tp % p == 0 {
                // only at n = 0, where the p-part subgroup is all of (Z/p)^*
                continue;
            }
            u.add_term(crt_pair(b, nn, tp, q), &one_exp);
        }
    }
    Ok(u)
}

/// The numerator of the chi-eigenprojector, sum_a chi^{-1}(a) sigma_a, with
/// sigma_a acting through the prime-to-p component of the Galois group.
/// The 1/|G| normalization is deliberately omitted so exponents stay in
/// Z[chi]; identities are checked with matching normalizations on both
/// sides.
pub fn chi_project(u: &FormalUnit, chi: &DirichletChar) -> Result<FormalUnit> {
    let chi = chi.primitive();
    let nn = chi.modulus();
    let m = u.modulus();
    if nn < 2 || m % nn != 0 || num_integer::gcd(nn, m / nn) != 1 {
        return Err(Error::Domain(
            "projection needs the conductor as the prime-to-p part of the level".into(),
        ));
    }
    assert_eq!(u.exponent_order() % chi.order(), 0, "exponent order must absorb the character");
    let inv = chi.inverse();
    let mut acc = FormalUnit::one(m, u.exponent_order());
    for a in 1..nn {
        if chi.exponent(a).is_none() {
            continue;
        }
        let t = crt_pair(a, nn, 1, m / nn);
        let weight = inv.eval_cyc(a).lift(u.exponent_order());
        acc = acc.mul(&u.galois(t).scale_cyc(&weight));
    }
    Ok(acc)
}

/// A derived unit at a finite layer: the derivative operator
/// D = sum_{i < |C|} i * gamma^i over the cyclic p-part C applied to the
/// level-n circular unit.
///
/// The naive equation (gamma - 1) x = xi has no solution in the formal
/// calculus at a fixed layer: along each gamma-orbit the augmentation of
/// xi is a nonzero multiple of p, and (gamma - 1) kills augmentations. The
/// operator D inverts (gamma - 1) exactly up to the norm element, which is
/// the content of the certificate exposed by `defining_identity_sides`;
/// callers assert that identity instead of pretending to divide.
#[derive(Clone, Debug)]
pub struct DerivedUnit {
    pub unit: FormalUnit,
    pub base: FormalUnit,
    pub level: u32,
    pub gamma: u64,
    pub p: u64,
}

/// Derived unit for the standard topological generator 1 + p.
pub fn solomon_derived(chi: &DirichletChar, p: u64, n: u32) -> Result<DerivedUnit> {
    solomon_derived_with(chi, p, n, 1 + p)
}

/// Derived unit for a caller-chosen generator of the principal units mod
/// p^n. The normalized boundary values do not depend on the choice, which
/// `verify_solomon` checks numerically.
pub fn solomon_derived_with(
    chi: &DirichletChar,
    p: u64,
    n: u32,
    gamma_ppart: u64,
) -> Result<DerivedUnit> {
    let chi = require_even_prime_to_p(chi, p)?;
    if chi.exponent(p) != Some(0) {
        return Err(Error::Domain(
            "derived units are defined in the split case chi(p) = 1".into(),
        ));
    }
    if n == 0 {
        return Err(Error::Domain("derived units start at layer 1".into()));
    }
    let q = p.pow(n);
    let g = gamma_ppart % q;
    if g % p != 1 || (n >= 2 && (g - 1) % (p * p) == 0) {
        return Err(Error::Domain(
            "gamma must generate the principal units at this layer".into(),
        ));
    }
    let base = circular_unit(&chi, p, n)?;
    let m = base.modulus();
    let gamma = crt_pair(1, chi.modulus(), g, q);
    let ord = mult_order(g, q) as u64;
    let mut unit = FormalUnit::one(m, base.exponent_order());
    let mut t = 1u64;
    for i in 0..ord {
        if i > 0 {
            unit = unit.mul(&base.galois(t).scale_int(i as i64));
        }
        t = mul_mod(t, gamma, m);
    }
    Ok(DerivedUnit { unit, base, level: n, gamma, p })
}

impl DerivedUnit {
    /// Orbit length of gamma, i.e. |C| = p^{level - 1}.
    pub fn orbit_len(&self) -> u64 {
        mult_order(self.gamma, self.base.modulus()) as u64
    }

    /// Both sides of the exact certificate
    /// (gamma - 1) D Xi = |C| Xi - Norm_C Xi, as formal units.
    pub fn defining_identity_sides(&self) -> (FormalUnit, FormalUnit) {
        let lhs = self.unit.galois(self.gamma).mul(&self.unit.inv());
        let ord = self.orbit_len();
        let mut norm_c = FormalUnit::one(self.base.modulus(), self.base.exponent_order());
        let mut t = 1u64;
        for _ in 0..ord {
            norm_c = norm_c.mul(&self.base.galois(t));
            t = mul_mod(t, self.gamma, self.base.modulus());
        }
        let rhs = self.base.scale_int(ord as i64).mul(&norm_c.inv());
        (lhs, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi13() -> DirichletChar {
        DirichletChar::kronecker(13).unwrap()
    }

    #[test]
    fn crt_pair_selects_both_residues() {
        let x = crt_pair(5, 13, 1, 27);
        assert_eq!(x % 13, 5);
        assert_eq!(x % 27, 1);
        assert!(x < 13 * 27);
        assert_eq!(crt_pair(3, 4, 0, 1), 3);
    }

    #[test]
    fn tower_norms_telescope_exactly() {
        let chi = chi13();
        for p in [3u64, 5] {
            for n in 1..3u32 {
                let hi = circular_unit(&chi, p, n + 1).unwrap();
                let lo = circular_unit(&chi, p, n).unwrap();
                assert_eq!(norm_map(&hi, 13 * p.pow(n)).unwrap(), lo);
            }
        }
    }

    #[test]
    fn bottom_norm_picks_up_the_frobenius_factor() {
        let chi = chi13();
        // 3 is split for this character: the factor 1 - chi^{-1}(3) vanishes
        // and every exponent cancels exactly.
        let down3 = norm_map(&circular_unit(&chi, 3, 1).unwrap(), 13).unwrap();
        assert!(down3.is_one());
        // chi(5) = -1: the factor is 2.
        let down5 = norm_map(&circular_unit(&chi, 5, 1).unwrap(), 13).unwrap();
        assert_eq!(down5, circular_unit(&chi, 5, 0).unwrap().scale_int(2));
    }

    #[test]
    fn norm_is_linear_in_exponents() {
        let mut u = FormalUnit::one(36, 1);
        u.add_term(1, &CycNum::from_int(1, 2));
        u.add_term(3, &CycNum::from_int(1, -1));
        u.add_term(10, &CycNum::from_int(1, 5));
        let mut v = FormalUnit::one(36, 1);
        v.add_term(5, &CycNum::from_int(1, 1));
        v.add_term(9, &CycNum::from_int(1, 3));
        let nu = norm_map(&u, 12).unwrap();
        let nv = norm_map(&v, 12).unwrap();
        assert_eq!(norm_map(&u.mul(&v), 12).unwrap(), nu.mul(&nv));
        assert_eq!(norm_map(&u.scale_int(-3), 12).unwrap(), nu.scale_int(-3));
    }

    #[test]
    fn empty_unit_norms_to_empty() {
        assert!(norm_map(&FormalUnit::one(36, 2), 12).unwrap().is_one());
    }

    #[test]
    fn degenerate_norm_is_rejected() {
        // The norm of 1 - zeta_12^4 down to level 4 is the rational 3 and
        // leaves the lattice of formal generators.
        let mut u = FormalUnit::one(12, 1);
        u.add_term(4, &CycNum::one(1));
        assert!(matches!(norm_map(&u, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn galois_twist_is_a_character_scale_on_weighted_units() {
        let chi = chi13();
        let u = circular_unit(&chi, 3, 1).unwrap();
        let t = crt_pair(2, 13, 1, 3);
        assert_eq!(u.galois(t), u.scale_cyc(&chi.eval_cyc(2)));
    }

    #[test]
    fn circular_unit_rejects_bad_characters() {
        assert!(circular_unit(&DirichletChar::trivial(13), 3, 0).is_err());
        assert!(circular_unit(&DirichletChar::kronecker(-4).unwrap(), 3, 0).is_err());
        assert!(circular_unit(&chi13(), 13, 0).is_err());
    }

    #[test]
    fn xi_bottom_norm_is_trivial_exactly_in_the_split_case() {
        let chi = chi13();
        let xi3 = chi_project(&xi_unit(&chi, 3, 0).unwrap(), &chi).unwrap();
        assert!(norm_map(&xi3, 13).unwrap().is_one());
        let xi5 = chi_project(&xi_unit(&chi, 5, 0).unwrap(), &chi).unwrap();
        assert!(!norm_map(&xi5, 13).unwrap().is_one());
    }

    #[test]
    fn derived_unit_certificate_holds_exactly() {
        let chi = chi13();
        for n in [2u32, 3] {
            let z = solomon_derived(&chi, 3, n).unwrap();
            assert_eq!(z.orbit_len(), 3u64.pow(n - 1));
            let (lhs, rhs) = z.defining_identity_sides();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn derived_unit_preconditions() {
        let chi = chi13();
        assert!(solomon_derived(&chi, 5, 2).is_err());
        assert!(solomon_derived(&chi, 3, 0).is_err());
        assert!(solomon_derived_with(&chi, 3, 2, 1 + 9).is_err());
        // layer 1 has trivial p-part: the derivative operator is zero
        assert!(solomon_derived(&chi, 3, 1).unwrap().unit.is_one());
    }

    #[test]
    fn complex_evaluation_needs_integer_exponents() {
        let mut u = FormalUnit::one(12, 4);
        u.add_term(1, &CycNum::zeta_pow(4, 1));
        assert!(u.eval_complex(128).is_err());
    }
}
