//! Lattice algorithms: exact-rational LLL reduction, Hermite normal form,
//! and the recognition helpers built on them (integer relations among real
//! or complex values, rational recognition of fixed-point numbers).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::bigfloat::{BigComplex, BigFixed};

/// LLL-reduce an integer basis in place. Rows are basis vectors; they must
/// be linearly independent. `delta` is the Lovász parameter in (1/4, 1).
///
/// Cohen's exact-rational formulation: Gram-Schmidt data is maintained
/// incrementally through size reductions and swaps, so the cost stays
/// polynomial even though everything is exact.
pub fn lll_reduce(basis: &mut [Vec<BigInt>], delta: &BigRational) {
    let n = basis.len();
    if n <= 1 {
        return;
    }
    // mu[i][j] for j < i, and bstar_norm[i] = |b*_i|^2 (rationals).
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut bnorm = vec![BigRational::zero(); n];

    // Full Gram-Schmidt pass over rows 0..=upto, refreshing mu and bnorm.
    // Runs once at the start; afterwards the incremental updates take over.
    let mut bstar: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut v: Vec<BigRational> = basis[i]
            .iter()
            .map(|x| BigRational::from(x.clone()))
            .collect();
        for j in 0..i {
            let num: BigRational = basis[i]
                .iter()
                .zip(&bstar[j])
                .map(|(x, y)| BigRational::from(x.clone()) * y)
                .sum();
            let m = num / &bnorm[j];
            for (vk, bk) in v.iter_mut().zip(&bstar[j]) {
                *vk -= &m * bk;
            }
            mu[i][j] = m;
        }
        bnorm[i] = v.iter().map(|x| x * x).sum();
        assert!(!bnorm[i].is_zero(), "LLL input rows must be independent");
        bstar.push(v);
    }
    drop(bstar);

    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut k = 1usize;
    while k < n {
        // Size-reduce row k against rows k-1 .. 0.
        for j in (0..k).rev() {
            if mu[k][j].abs() > half {
                let q = (&mu[k][j] + &half).floor().to_integer();
                let row_j = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&row_j) {
                    *x -= &q * y;
                }
                let qr = BigRational::from(q);
                for i in 0..j {
                    let t = &qr * &mu[j][i];
                    mu[k][i] -= t;
                }
                mu[k][j] -= qr;
            }
        }
        // Lovász condition: B_k >= (delta - mu_{k,k-1}^2) B_{k-1}.
        let m2 = &mu[k][k - 1] * &mu[k][k - 1];
        if bnorm[k] >= (delta - &m2) * &bnorm[k - 1] {
            k += 1;
            continue;
        }
        // Swap rows k-1 and k, updating the Gram-Schmidt data in place.
        basis.swap(k - 1, k);
        let mu_k = mu[k][k - 1].clone();
        let b_new = &bnorm[k] + &m2 * &bnorm[k - 1];
        let mu_new = &mu_k * &bnorm[k - 1] / &b_new;
        bnorm[k] = &bnorm[k - 1] * &bnorm[k] / &b_new;
        bnorm[k - 1] = b_new;
        for i in 0..k - 1 {
            let t = mu[k - 1][i].clone();
            mu[k - 1][i] = mu[k][i].clone();
            mu[k][i] = t;
        }
        for j in k + 1..n {
            let t = mu[j][k].clone();
            mu[j][k] = &mu[j][k - 1] - &mu_k * &t;
            mu[j][k - 1] = &t + &mu_new * &mu[j][k];
        }
        mu[k][k - 1] = mu_new;
        k = k.max(2) - 1;
    }
}

/// Convenience wrapper with the delta used throughout this crate.
pub fn lll_reduce_default(basis: &mut [Vec<BigInt>]) {
    lll_reduce(basis, &BigRational::new(BigInt::from(99), BigInt::from(100)));
}

/// Row-style Hermite normal form of the lattice spanned by `rows` (rows may
/// be dependent or zero). Output rows are the nonzero HNF rows: pivots
/// positive, entries above each pivot reduced to [0, pivot).
pub fn hnf(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return vec![];
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut pivot_row = 0usize;
    for col in 0..ncols {
        // Euclidean elimination in this column below pivot_row.
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..m.len() {
                if !m[r][col].is_zero() {
                    best = match best {
                        None => Some(r),
                        Some(b) => {
                            if m[r][col].abs() < m[b][col].abs() {
                                Some(r)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
            }
            let Some(b) = best else { break };
            m.swap(pivot_row, b);
            let mut any = false;
            for r in pivot_row + 1..m.len() {
                if m[r][col].is_zero() {
                    continue;
                }
                let q = div_round(&m[r][col], &m[pivot_row][col]);
                if !q.is_zero() {
                    let pivot = m[pivot_row].clone();
                    for (x, y) in m[r].iter_mut().zip(&pivot) {
                        *x -= &q * y;
                    }
                }
                if !m[r][col].is_zero() {
                    any = true;
                }
            }
            if !any {
                // Column clean below the pivot.
                if m[pivot_row][col].is_negative() {
                    for x in m[pivot_row].iter_mut() {
                        *x = -&*x;
                    }
                }
                // Reduce the rows above.
                let pivot = m[pivot_row].clone();
                for r in 0..pivot_row {
                    let q = num_integer::Integer::div_floor(&m[r][col], &pivot[col]);
                    if !q.is_zero() {
                        for (x, y) in m[r].iter_mut().zip(&pivot) {
                            *x -= &q * y;
                        }
                    }
                }
                pivot_row += 1;
                break;
            }
        }
        if pivot_row == m.len() {
            break;
        }
    }
    m.truncate(pivot_row);
    m
}

/// Round a/b to a nearby integer q so that |a - qb| <= |b|/2.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    let (q, r) = a.div_mod_floor(b);
    if r.abs() * BigInt::from(2) > b.abs() {
        q + 1
    } else {
        q
    }
}

/// Integer relation candidates for the given real values: rows (c_0..c_{n-1})
/// with Σ c_i x_i ≈ 0. The values are scaled by 2^scale_bits and joined to an
/// identity block; LLL then trades residual size against coefficient size.
/// Rows are returned in the reduced order, best candidates first; callers
/// must verify any candidate independently.
pub fn integer_relation_candidates(
    values: &[BigFixed],
    scale_bits: u32,
) -> Vec<(Vec<BigInt>, BigInt)> {
    let n = values.len();
    assert!(n >= 2);
    let bits = values[0].bits();
    let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for (i, v) in values.iter().enumerate() {
        assert_eq!(v.bits(), bits);
        let mut row = vec![BigInt::zero(); n + 1];
        row[i] = BigInt::one();
        // v * 2^scale = mant * 2^(scale - bits)
        let scaled = if scale_bits >= bits {
            v.mant() << (scale_bits - bits)
        } else {
            v.mant() >> (bits - scale_bits)
        };
        row[n] = scaled;
        basis.push(row);
    }
    lll_reduce_default(&mut basis);
    basis
        .into_iter()
        .map(|mut row| {
            let resid = row.pop().unwrap();
            (row, resid)
        })
        .collect()
}

/// Recognize z as a root of an integer polynomial of the given degree bound.
/// Returns candidate coefficient vectors (constant term first), best first.
pub fn algebraic_candidates(
    z: &BigComplex,
    degree: usize,
    scale_bits: u32,
) -> Vec<Vec<BigInt>> {
    let bits = z.bits();
    let n = degree + 1;
    let mut pows = Vec::with_capacity(n);
    let mut cur = BigComplex::one(bits);
    for _ in 0..n {
        pows.push(cur.clone());
        cur = cur.mul(z);
    }
    let scale = |f: &BigFixed| -> BigInt {
        if scale_bits >= bits {
            f.mant() << (scale_bits - bits)
        } else {
            f.mant() >> (bits - scale_bits)
        }
    };
    let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for (i, p) in pows.iter().enumerate() {
        let mut row = vec![BigInt::zero(); n + 2];
        row[i] = BigInt::one();
        row[n] = scale(&p.re);
        row[n + 1] = scale(&p.im);
        basis.push(row);
    }
    lll_reduce_default(&mut basis);
    basis
        .into_iter()
        .map(|row| row[..n].to_vec())
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .collect()
}

/// Recognize a fixed-point real as a rational of bounded height, requiring
/// agreement to within 2^-(bits - slack_bits). Continued-fraction based.
pub fn recognize_rational(
    x: &BigFixed,
    max_height: &BigInt,
    slack_bits: u32,
) -> Option<BigRational> {
    let bits = x.bits();
    assert!(slack_bits < bits);
    let target = BigRational::new(x.mant().clone(), BigInt::one() << bits);
    let tol = BigRational::new(BigInt::one(), BigInt::one() << (bits - slack_bits));
    // Walk the continued fraction of the fixed-point value.
    let mut p0 = BigInt::one();
    let mut q0 = BigInt::zero();
    let mut p1 = target.floor().to_integer();
    let mut q1 = BigInt::one();
    let mut frac = &target - BigRational::from(p1.clone());
    loop {
        let cand = BigRational::new(p1.clone(), q1.clone());
        if (&cand - &target).abs() <= tol {
            return if q1.abs() <= *max_height && p1.abs() <= *max_height {
                Some(cand)
            } else {
                None
            };
        }
        if frac.is_zero() {
            return None;
        }
        let inv = frac.recip();
        let a = inv.floor().to_integer();
        frac = inv - BigRational::from(a.clone());
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        if q1 > max_height.abs() * 4 {
            return None;
        }
    }
}
