//! Branch conventions for the p-adic L-function at integer points.
//!
//! Analytically there is one function per pair (character, residue class of
//! s mod p-1), but two normalizations of "the value at an integer n ≤ 0"
//! coexist in the literature and this crate checks identities written in
//! both. We name them by tag:
//!
//! * TEICH: the function s ↦ L_p(s, χ) itself, which at n ≤ 0 recovers
//!   (1 - χω^{n-1}(p) p^{-n}) L(χω^{n-1}, n). The Teichmüller correction
//!   rotates with n, and one analytic function covers every n.
//!
//! * PR: the branch through a chosen congruence class s₀ mod (p-1), namely
//!   s ↦ L_p(s, χ ω^{1-s₀}), which at n ≡ s₀ recovers the ω-free datum
//!   (1 - χ(p) p^{-n}) L(χ, n). Different classes give genuinely different
//!   analytic functions; within a class the branch does not depend on the
//!   expansion center.
//!
//! The two agree wherever n ≡ 1 mod (p-1). Characters with a tame p-part
//! are accepted by first splitting off their Teichmüller component, so the
//! working arena is always sized by the prime-to-p character alone.

use std::sync::Arc;

use crate::chars::DirichletChar;
use crate::error::{Error, Result};
use crate::exact::cyclotomic::CycNum;
use crate::kl::washington::{euler_bernoulli_in, euler_bernoulli_value, series_twisted, teich_twist};
use crate::padic::algebra::{AlgCtx, AlgEl};
use crate::padic::number::Padic;

/// Which interpolation normalization a computation follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// Interpolates (1 - χ(p) p^{-n}) L(χ, n) on one class n mod (p-1).
    PerrinRiou,
    /// Interpolates (1 - χω^{n-1}(p) p^{-n}) L(χω^{n-1}, n) at every n ≤ 0.
    Teichmuller,
}

impl Branch {
    /// Short tag used in reports and check identifiers.
    pub fn tag(&self) -> &'static str {
        match self {
            Branch::PerrinRiou => "PR",
            Branch::Teichmuller => "TEICH",
        }
    }
}

/// Split χ = χ' · ω^j with χ' of conductor prime to p. Characters whose
/// conductor is divisible by p² have a wild p-part that is not a power of
/// ω and are refused.
pub fn split_omega(chi: &DirichletChar, p: u64) -> Result<(DirichletChar, i64)> {
    let chi = chi.primitive();
    if chi.conductor() % (p * p) == 0 {
        return Err(Error::Domain(format!(
            "conductor {} is divisible by {}^2: the p-part is wild, not a Teichmüller power",
            chi.conductor(),
            p
        )));
    }
    if chi.conductor() % p != 0 {
        return Ok((chi, 0));
    }
    for j in 1..p as i64 - 1 {
        let stripped = teich_twist(&chi, p, -j);
        if stripped.conductor() % p != 0 {
            return Ok((stripped, j));
        }
    }
    Err(Error::Domain(format!(
        "no Teichmüller power strips the p-part of the character mod {}",
        chi.conductor()
    )))
}

/// A truncated Taylor expansion of one branch around an integer center,
/// with coefficients in a cyclotomic arena carrying all conjugates of the
/// prime-to-p part of the character.
pub struct LSeries {
    pub branch: Branch,
    pub center: i64,
    coeffs: Vec<AlgEl>,
    ctx: Arc<AlgCtx>,
}

impl LSeries {
    /// The value at the center (the constant Taylor coefficient).
    pub fn value(&self) -> &AlgEl {
        &self.coeffs[0]
    }

    /// d/ds at the center (the linear Taylor coefficient).
    pub fn derivative(&self) -> &AlgEl {
        assert!(self.coeffs.len() >= 2, "expansion was requested without a linear term");
        &self.coeffs[1]
    }

    pub fn coeffs(&self) -> &[AlgEl] {
        &self.coeffs
    }

    /// Evaluate at s = center + t. The truncated tail is only negligible
    /// well inside the disk, so t must have positive valuation.
    pub fn eval(&self, t: &Padic) -> Result<AlgEl> {
        if !t.is_zero_like() && t.valuation().unwrap_or(0) < 1 {
            return Err(Error::Domain(
                "evaluation point is not in the interior of the expansion disk; re-center instead"
                    .into(),
            ));
        }
        let te = self.ctx.from_padic(t);
        let mut acc = self.ctx.zero();
        for c in self.coeffs.iter().rev() {
            acc = self.ctx.add(&self.ctx.mul(&acc, &te), c);
        }
        Ok(acc)
    }
}

/// Expand the requested branch for χ around an integer center. The arena
/// must contain the values of the prime-to-p part of χ.
pub fn kl_series(
    chi: &DirichletChar,
    p: u64,
    branch: Branch,
    center: i64,
    ncoeffs: usize,
    ctx: &Arc<AlgCtx>,
) -> Result<LSeries> {
    let (base, j) = split_omega(chi, p)?;
    let tw = match branch {
        Branch::Teichmuller => j,
        Branch::PerrinRiou => j + 1 - center,
    };
    let coeffs = series_twisted(&base, p, tw, center, ncoeffs, ctx)?;
    Ok(LSeries { branch, center, coeffs, ctx: Arc::clone(ctx) })
}

/// The branch value at an integer point, computed through the analytic
/// route (one-term expansion centered there).
pub fn kl_value(
    chi: &DirichletChar,
    p: u64,
    branch: Branch,
    s0: i64,
    ctx: &Arc<AlgCtx>,
) -> Result<AlgEl> {
    Ok(kl_series(chi, p, branch, s0, 1, ctx)?.coeffs.remove(0))
}

/// The branch derivative d/ds at an integer point.
pub fn kl_derivative(
    chi: &DirichletChar,
    p: u64,
    branch: Branch,
    s0: i64,
    ctx: &Arc<AlgCtx>,
) -> Result<AlgEl> {
    Ok(kl_series(chi, p, branch, s0, 2, ctx)?.coeffs.remove(1))
}

/// The exact interpolated value at n ≤ 0 as a cyclotomic number: the
/// independent oracle every analytic evaluation is judged against.
pub fn interpolated_value(chi: &DirichletChar, p: u64, branch: Branch, n: i64) -> Result<CycNum> {
    if n > 0 {
        return Err(Error::Domain(format!("interpolation points are the integers n ≤ 0, got {}", n)));
    }
    let k = (1 - n) as u32;
    Ok(match branch {
        Branch::Teichmuller => euler_bernoulli_value(chi, p, k),
        Branch::PerrinRiou => euler_bernoulli_value(&teich_twist(chi, p, k as i64), p, k),
    })
}

/// The exact interpolated value at n ≤ 0 pushed into an arena sized for the
/// prime-to-p part of χ, for comparisons where the full value field has no
/// scalar embedding.
pub fn interpolated_in(
    chi: &DirichletChar,
    p: u64,
    branch: Branch,
    n: i64,
    ctx: &Arc<AlgCtx>,
) -> Result<AlgEl> {
    if n > 0 {
        return Err(Error::Domain(format!("interpolation points are the integers n ≤ 0, got {}", n)));
    }
    let k = (1 - n) as u32;
    let (base, j) = split_omega(chi, p)?;
    let tw = match branch {
        Branch::Teichmuller => j,
        Branch::PerrinRiou => j + k as i64,
    };
    euler_bernoulli_in(&base, p, tw, k, ctx)
}

/// The pair of Euler-type factors attached to an interpolation point:
/// numerator 1 - v p^{-k} and denominator 1 - v^{-1} p^{k-1}, for v the
/// relevant character value at p (a root of unity, or zero when p divides
/// the conductor, in which case both factors are 1).
pub struct EulerFactorPair {
    pub numerator: AlgEl,
    pub denominator: AlgEl,
    /// Exact statement that the numerator vanishes (v = 1 and k = 0); this
    /// is the trivial-zero trigger and is decided symbolically.
    pub numerator_vanishes: bool,
    /// Exact statement that the denominator vanishes (v = 1 and k = 1).
    pub denominator_vanishes: bool,
}

/// Build the Euler factor pair for exponent k and character value v. The
/// arena must contain the value field of v.
pub fn pr_euler_factor(k: i64, v: &CycNum, ctx: &Arc<AlgCtx>) -> EulerFactorPair {
    if v.is_zero() {
        return EulerFactorPair {
            numerator: ctx.one(),
            denominator: ctx.one(),
            numerator_vanishes: false,
            denominator_vanishes: false,
        };
    }
    let is_one = v.sub(&CycNum::one(v.modulus())).is_zero();
    let numerator = ctx.sub(&ctx.one(), &ctx.shift_scale(&ctx.embed_cyc(v), -k));
    let denominator = ctx.sub(&ctx.one(), &ctx.shift_scale(&ctx.embed_cyc(&v.inv()), k - 1));
    EulerFactorPair {
        numerator,
        denominator,
        numerator_vanishes: k == 0 && is_one,
        denominator_vanishes: k == 1 && is_one,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::algebra::cyc_into_qp;

    #[test]
    fn branch_values_match_exact_oracles() {
        // Both normalizations at n ∈ {0, -1, -2}, analytic route vs the
        // exact cyclotomic oracle through the canonical scalar embedding.
        let p = 7u64;
        let chi = DirichletChar::kronecker(5).unwrap();
        let ctx = AlgCtx::cyclotomic(p, 2, 8);
        for branch in [Branch::Teichmuller, Branch::PerrinRiou] {
            for n in [0i64, -1, -2] {
                let lhs = kl_value(&chi, p, branch, n, &ctx).unwrap();
                let exact = interpolated_value(&chi, p, branch, n).unwrap();
                let expect = cyc_into_qp(p, 12, &exact).unwrap();
                let d = ctx.agreement_depth(&lhs, &ctx.from_padic(&expect));
                assert!(
                    d.saturated || d.depth >= 7,
                    "{} at n = {}: {:?}",
                    branch.tag(),
                    n,
                    d
                );
            }
        }
    }

    #[test]
    fn arena_oracle_agrees_with_cyclotomic_oracle() {
        // interpolated_in and interpolated_value describe the same number.
        let p = 7u64;
        let chi = DirichletChar::kronecker(5).unwrap();
        let ctx = AlgCtx::cyclotomic(p, 2, 8);
        for branch in [Branch::Teichmuller, Branch::PerrinRiou] {
            let lhs = interpolated_in(&chi, p, branch, -2, &ctx).unwrap();
            let exact = interpolated_value(&chi, p, branch, -2).unwrap();
            let expect = cyc_into_qp(p, 12, &exact).unwrap();
            let d = ctx.agreement_depth(&lhs, &ctx.from_padic(&expect));
            assert!(d.saturated || d.depth >= 7, "{}: {:?}", branch.tag(), d);
        }
    }

    #[test]
    fn branches_differ_off_the_common_class() {
        // At n = -1 (so n ≢ 1 mod 4 at p = 5) the two normalizations carry
        // different Euler data and must not agree deeply.
        let p = 5u64;
        let chi = DirichletChar::kronecker(13).unwrap();
        let ctx = AlgCtx::cyclotomic(p, 2, 8);
        let a = kl_value(&chi, p, Branch::Teichmuller, -1, &ctx).unwrap();
        let b = kl_value(&chi, p, Branch::PerrinRiou, -1, &ctx).unwrap();
        let d = ctx.agreement_depth(&a, &b);
        assert!(!d.saturated && d.depth <= 3, "{:?}", d);
    }

    #[test]
    fn branches_coincide_on_the_common_class() {
        // n ≡ 1 mod (p-1): the Teichmüller correction ω^{n-1} disappears
        // and both normalizations name the same number.
        let p = 5u64;
        let chi = DirichletChar::kronecker(13).unwrap();
        let a = interpolated_value(&chi, p, Branch::Teichmuller, -3).unwrap();
        let b = interpolated_value(&chi, p, Branch::PerrinRiou, -3).unwrap();
        assert_eq!(a.lift(num_integer::lcm(a.modulus(), b.modulus())),
                   b.lift(num_integer::lcm(a.modulus(), b.modulus())));
    }

    #[test]
    fn tame_p_part_is_split_and_recovered() {
        let p = 7u64;
        let psi = DirichletChar::kronecker(5).unwrap();
        let chi = teich_twist(&psi, p, 3);
        assert_eq!(chi.conductor(), 35);
        let (base, j) = split_omega(&chi, p).unwrap();
        assert_eq!((base.conductor(), base.order(), j), (5, 2, 3));
        // Wild p-part refused.
        let cubic = DirichletChar::all_mod(9).into_iter().find(|c| c.order() == 3).unwrap();
        assert!(split_omega(&cubic, 3).is_err());
    }

    #[test]
    fn exceptional_class_vanishes_at_zero() {
        // χ = ψω with ψ = kronecker(-11) and p = 3: then ψ(3) = 1, the
        // TEICH value at 0 is -(1 - ψ(3)) B_{1,ψ} = 0 exactly, and the
        // analytic route must find that zero to full depth.
        let p = 3u64;
        let psi = DirichletChar::kronecker(-11).unwrap();
        let chi = teich_twist(&psi, p, 1);
        assert_eq!(chi.conductor(), 33);
        let exact = interpolated_value(&chi, p, Branch::Teichmuller, 0).unwrap();
        assert!(exact.is_zero());
        let ctx = AlgCtx::cyclotomic(p, 2, 10);
        let v = kl_value(&chi, p, Branch::Teichmuller, 0, &ctx).unwrap();
        let d = ctx.depth_vs_zero(&v);
        assert!(d.saturated, "{:?}", d);
        // The PR branch through the even class is L_p(s, χω) with χω odd,
        // hence identically zero by parity: B_{k,χ} = 0 whenever k and χ
        // have mismatched parity, at every point of the class.
        let pr = interpolated_value(&chi, p, Branch::PerrinRiou, -2).unwrap();
        assert!(pr.is_zero());
        // The odd class carries the nonzero values.
        let pr = interpolated_value(&chi, p, Branch::PerrinRiou, -1).unwrap();
        assert!(!pr.is_zero());
    }

    #[test]
    fn taylor_transport_matches_recentered_value() {
        // Evaluate the TEICH branch at 125 twice: through the Taylor
        // expansion at 0 and through a fresh expansion centered at 125.
        let p = 5u64;
        let chi = DirichletChar::kronecker(13).unwrap();
        let ctx = AlgCtx::cyclotomic(p, 2, 8);
        let s = kl_series(&chi, p, Branch::Teichmuller, 0, 11, &ctx).unwrap();
        let via = s.eval(&Padic::from_i64(p, 125, 12)).unwrap();
        let direct = kl_value(&chi, p, Branch::Teichmuller, 125, &ctx).unwrap();
        let d = ctx.agreement_depth(&via, &direct);
        assert!(d.saturated || d.depth >= 7, "{:?}", d);
        // Points on the boundary of the disk are refused.
        assert!(s.eval(&Padic::from_i64(p, 3, 12)).is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        // Independent cross-check of d/ds: two separate expansions at the
        // integer centers 0 and 125 give a difference quotient that must
        // agree with the linear Taylor coefficient at 0 through O(125).
        let p = 5u64;
        let chi = DirichletChar::kronecker(13).unwrap();
        let ctx = AlgCtx::cyclotomic(p, 2, 8);
        let d1 = kl_derivative(&chi, p, Branch::Teichmuller, 0, &ctx).unwrap();
        let v0 = kl_value(&chi, p, Branch::Teichmuller, 0, &ctx).unwrap();
        let v1 = kl_value(&chi, p, Branch::Teichmuller, 125, &ctx).unwrap();
        let fd = ctx.shift_scale(&ctx.sub(&v1, &v0), -3);
        let d = ctx.agreement_depth(&d1, &fd);
        assert!(d.depth >= 3, "{:?}", d);
    }

    #[test]
    fn constant_series_has_zero_derivative() {
        // Degenerate expansion: a constant function must report a zero
        // linear coefficient and evaluate to its constant everywhere in
        // the disk.
        let p = 5u64;
        let ctx = AlgCtx::cyclotomic(p, 2, 8);
        let s = LSeries {
            branch: Branch::Teichmuller,
            center: 0,
            coeffs: vec![ctx.one(), ctx.zero(), ctx.zero()],
            ctx: Arc::clone(&ctx),
        };
        assert!(ctx.depth_vs_zero(s.derivative()).saturated);
        let v = s.eval(&Padic::from_i64(p, 25, 8)).unwrap();
        assert!(ctx.agreement_depth(&v, &ctx.one()).saturated);
    }

    #[test]
    fn euler_factor_vanishing_is_symbolic() {
        let p = 5u64;
        let ctx = AlgCtx::cyclotomic(p, 4, 8);
        let one = CycNum::one(1);
        let ef = pr_euler_factor(1, &one, &ctx);
        assert!(ef.denominator_vanishes && !ef.numerator_vanishes);
        assert!(ctx.depth_vs_zero(&ef.denominator).saturated);
        let ef = pr_euler_factor(0, &one, &ctx);
        assert!(ef.numerator_vanishes && !ef.denominator_vanishes);
        assert!(ctx.depth_vs_zero(&ef.numerator).saturated);
        // A genuine fourth root of unity kills neither side.
        let i = CycNum::zeta(4);
        let ef = pr_euler_factor(1, &i, &ctx);
        assert!(!ef.numerator_vanishes && !ef.denominator_vanishes);
        assert!(!ctx.depth_vs_zero(&ef.numerator).saturated);
        assert!(!ctx.depth_vs_zero(&ef.denominator).saturated);
        // Zero value (p divides the conductor): both factors are plain 1.
        let ef = pr_euler_factor(3, &CycNum::zero(1), &ctx);
        let d = ctx.agreement_depth(&ef.numerator, &ctx.one());
        assert!(d.saturated);
    }
}
