//! Exact counting: integers with a fixed kernel, the Legendre-type function
//! `L^(e)(x, n)`, exponentially coprime pairs, and the weighted-simplex sums
//! the asymptotic estimates are built from.
//!
//! Integer-domain counters decide `∏ p_i^{k_i} <= x` with exact integer
//! products and never look at logarithms. The simplex counters take real
//! weights and use floating point with a fixed rule: a point `k` is inside iff
//! the left-to-right sum `k_1 t_1 + ... + k_r t_r` is `<= z`, with no tolerance.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{self, Factorization, KernelSpec};
use crate::error::{Error, Result};
use crate::sieve::TotientSieve;

/// Largest `x` accepted by [`oracle_scan_pairs`].
pub const ORACLE_SCAN_LIMIT: u64 = 1_000_000;

/// Largest `⌊z⌋` accepted by the sieve-backed sums.
pub const SIEVE_SUM_LIMIT: u64 = 100_000_000;

/// Region `k_1 t_1 + ... + k_r t_r <= z` with every `k_i >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplexConstraint {
    weights: Vec<f64>,
    bound: f64,
}

impl SimplexConstraint {
    pub fn new(weights: Vec<f64>, bound: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if let Some(&t) = weights.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(Error::InvalidWeight(t));
        }
        if !bound.is_finite() {
            return Err(Error::InvalidBound);
        }
        Ok(Self { weights, bound })
    }

    /// Weights `t_i = log p_i` and bound `z = log x`, the substitution that
    /// turns a simplex count into a count of integers.
    pub fn logarithmic(kernel: &KernelSpec, x: f64) -> Result<Self> {
        Self::new(
            kernel.primes().iter().map(|&p| (p as f64).ln()).collect(),
            x.ln(),
        )
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: len,
            });
        }
        Ok(())
    }
}

/// Exponent tuple `(k_1, ..., k_r)` of an integer with a fixed kernel; all entries `>= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exps: Vec<u32>) -> Result<Self> {
        if exps.contains(&0) {
            return Err(Error::InvalidFactorization(
                "exponent vectors need every entry >= 1".into(),
            ));
        }
        Ok(Self(exps))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_factorization(&self, kernel: &KernelSpec) -> Result<Factorization> {
        Factorization::from_kernel(kernel, &self.0)
    }
}

// ---------------------------------------------------------------------------
// Integer domain

/// Visits every exponent vector `k` accepted by `allowed` with `∏ p_i^{k_i} <= x`.
///
/// Coordinates are enumerated outermost first, each bounded by the exact
/// residual budget. Products stay below `2^128` because the running product is
/// at most `x < 2^64` before each multiplication by a prime `< 2^64`.
fn walk_members<A, V>(primes: &[u64], x: u64, allowed: &A, visit: &mut V)
where
    A: Fn(usize, u32) -> bool,
    V: FnMut(&[u32]),
{
    let x = u128::from(x);
    let Some(base) = primes
        .iter()
        .try_fold(1u128, |acc, &p| acc.checked_mul(u128::from(p)))
    else {
        return;
    };
    if base > x {
        return;
    }
    let mut exps = vec![1u32; primes.len()];
    walk_from(primes, x, 0, base, &mut exps, allowed, visit);
}

fn walk_from<A, V>(
    primes: &[u64],
    x: u128,
    i: usize,
    product: u128,
    exps: &mut [u32],
    allowed: &A,
    visit: &mut V,
) where
    A: Fn(usize, u32) -> bool,
    V: FnMut(&[u32]),
{
    if i == primes.len() {
        visit(exps);
        return;
    }
    let p = u128::from(primes[i]);
    let mut prod = product;
    let mut k = 1u32;
    loop {
        if allowed(i, k) {
            exps[i] = k;
            walk_from(primes, x, i + 1, prod, exps, allowed, visit);
        }
        prod *= p;
        if prod > x {
            break;
        }
        k += 1;
    }
    exps[i] = 1;
}

/// Exponent vectors of all `n <= x` with kernel exactly `∏ p_i`, in
/// lexicographic order of exponents.
pub fn kernel_members(kernel: &KernelSpec, x: u64) -> Vec<ExponentVector> {
    let mut out = Vec::new();
    walk_members(kernel.primes(), x, &|_, _| true, &mut |e| {
        out.push(ExponentVector(e.to_vec()))
    });
    out
}

/// `N(p_1, ..., p_r; x)`: how many `n <= x` have kernel exactly `p_1 ⋯ p_r`.
pub fn count_fixed_kernel(kernel: &KernelSpec, x: u64) -> u64 {
    let mut count = 0u64;
    walk_members(kernel.primes(), x, &|_, _| true, &mut |_| count += 1);
    count
}

/// `L^(e)(x, n)`: how many `k <= x` are exponentially coprime to `n`.
///
/// For `n = 1` only `k = 1` qualifies, so the value is 1 whenever `x >= 1`.
pub fn legendre_e(x: u64, n: &Factorization) -> u64 {
    if n.is_one() {
        return u64::from(x >= 1);
    }
    let primes: Vec<u64> = n.primes().collect();
    let exps: Vec<u32> = n.exponents().collect();
    let mut count = 0u64;
    walk_members(&primes, x, &|i, k| k.gcd(&exps[i]) == 1, &mut |_| {
        count += 1
    });
    count
}

/// `coprime[a][b]` for `0 <= a, b <= max`.
fn coprime_table(max: u32) -> Vec<Vec<bool>> {
    (0..=max)
        .map(|a| (0..=max).map(|b| a.gcd(&b) == 1).collect())
        .collect()
}

/// Number of ordered pairs `(u, v)` of rows of `flat` (row length `dim`) with
/// `coprime(u_i, v_i)` for every coordinate.
fn count_coprime_pairs<T, F>(flat: &[T], dim: usize, coprime: F) -> u64
where
    T: Copy + Sync,
    F: Fn(T, T) -> bool + Sync,
{
    if flat.is_empty() {
        return 0;
    }
    let row_count = |u: &[T]| -> u64 {
        flat.chunks_exact(dim)
            .filter(|v| u.iter().zip(v.iter()).all(|(&a, &b)| coprime(a, b)))
            .count() as u64
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        flat.par_chunks_exact(dim).map(row_count).sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        flat.chunks_exact(dim).map(row_count).sum()
    }
}

/// `P^(e)(p_1, ..., p_r; x)`: ordered pairs `<n, m>` of exponentially coprime
/// integers `n, m <= x` whose kernel is `p_1 ⋯ p_r`. Pairs `<n, n>` count when
/// `n` is squarefree.
pub fn count_exp_coprime_pairs(kernel: &KernelSpec, x: u64) -> u64 {
    let mut flat = Vec::new();
    let mut max_exp = 1u32;
    walk_members(kernel.primes(), x, &|_, _| true, &mut |e| {
        max_exp = e.iter().copied().fold(max_exp, u32::max);
        flat.extend_from_slice(e);
    });
    let table = coprime_table(max_exp);
    count_coprime_pairs(&flat, kernel.len(), |a: u32, b: u32| {
        table[a as usize][b as usize]
    })
}

/// Brute-force `P^(e)`: factor every integer up to `x`, keep those whose prime
/// set is the kernel, and test all ordered pairs with [`arith::is_exp_coprime`].
pub fn oracle_scan_pairs(kernel: &KernelSpec, x: u64) -> Result<u64> {
    if x > ORACLE_SCAN_LIMIT {
        return Err(Error::GuardExceeded {
            what: "x",
            value: x,
            limit: ORACLE_SCAN_LIMIT,
        });
    }
    let mut members = Vec::new();
    for n in 1..=x {
        let f = arith::factorize(n)?;
        if f.len() == kernel.len() && f.primes().eq(kernel.primes().iter().copied()) {
            members.push(f);
        }
    }
    Ok(members
        .iter()
        .map(|f| {
            members
                .iter()
                .filter(|g| arith::is_exp_coprime(f, g))
                .count() as u64
        })
        .sum())
}

// ---------------------------------------------------------------------------
// Real domain

fn walk_simplex<A, V>(c: &SimplexConstraint, allowed: &A, visit: &mut V)
where
    A: Fn(usize, u64) -> bool,
    V: FnMut(&[u64]),
{
    let mut k = vec![1u64; c.dim()];
    simplex_from(&c.weights, c.bound, 0, 0.0, &mut k, allowed, visit);
}

fn simplex_from<A, V>(
    weights: &[f64],
    bound: f64,
    i: usize,
    partial: f64,
    k: &mut [u64],
    allowed: &A,
    visit: &mut V,
) where
    A: Fn(usize, u64) -> bool,
    V: FnMut(&[u64]),
{
    let t = weights[i];
    let mut ki = 1u64;
    loop {
        let s = partial + ki as f64 * t;
        // smallest reachable full sum: remaining coordinates all at 1;
        // floating-point addition is monotone, so nothing beyond this fits
        let floor_sum = weights[i + 1..].iter().fold(s, |acc, &w| acc + w);
        if floor_sum.is_nan() || floor_sum > bound {
            break;
        }
        if allowed(i, ki) {
            k[i] = ki;
            if i + 1 == weights.len() {
                visit(k);
            } else {
                simplex_from(weights, bound, i + 1, s, k, allowed, visit);
            }
        }
        ki += 1;
    }
    k[i] = 1;
}

/// All lattice points of the simplex, as a flat vector of rows of length `r`.
pub fn simplex_points(c: &SimplexConstraint) -> Vec<u64> {
    let mut flat = Vec::new();
    walk_simplex(c, &|_, _| true, &mut |k| flat.extend_from_slice(k));
    flat
}

/// Left side of the coprime simplex estimate: vectors `k` in the simplex with
/// `gcd(k_i, a_i) = 1` for every `i`.
pub fn lemma1_count(c: &SimplexConstraint, a: &[u64]) -> Result<u64> {
    c.check_dim(a.len())?;
    if a.contains(&0) {
        return Err(Error::Zero);
    }
    let mut count = 0u64;
    walk_simplex(c, &|i, k| k.gcd(&a[i]) == 1, &mut |_| count += 1);
    Ok(count)
}

/// `Σ ∏ φ(k_i)/k_i` over the simplex, exactly.
pub fn lemma2_sum(c: &SimplexConstraint) -> Result<BigRational> {
    let flat = simplex_points(c);
    let max = flat.iter().copied().max().unwrap_or(1);
    let max = u32::try_from(max)
        .ok()
        .filter(|&m| u64::from(m) <= SIEVE_SUM_LIMIT)
        .ok_or(Error::GuardExceeded {
            what: "simplex coordinate",
            value: max,
            limit: SIEVE_SUM_LIMIT,
        })?;
    let sieve = TotientSieve::new(max);
    let mut total = BigRational::zero();
    for k in flat.chunks_exact(c.dim()) {
        let (num, den) = k
            .iter()
            .fold((BigInt::from(1u32), BigInt::from(1u32)), |(n, d), &ki| {
                (n * sieve.phi(ki as u32), d * ki)
            });
        total += BigRational::new(num, den);
    }
    Ok(total)
}

/// [`lemma2_sum`] as a double.
pub fn lemma2_sum_f64(c: &SimplexConstraint) -> Result<f64> {
    Ok(lemma2_sum(c)?.to_f64().unwrap_or(f64::NAN))
}

/// Ordered pairs `(k, j)` of simplex points with `gcd(k_i, j_i) = 1` for every `i`.
pub fn lemma3_count(c: &SimplexConstraint) -> u64 {
    let flat = simplex_points(c);
    count_coprime_pairs(&flat, c.dim(), |a: u64, b: u64| a.gcd(&b) == 1)
}

fn sieve_bound(z: f64) -> Result<u32> {
    if z.is_nan() || z < 1.0 {
        return Ok(0);
    }
    let n = z.floor();
    if n > SIEVE_SUM_LIMIT as f64 {
        return Err(Error::GuardExceeded {
            what: "floor(z)",
            value: n as u64,
            limit: SIEVE_SUM_LIMIT,
        });
    }
    Ok(n as u32)
}

/// `φ_s(z, a) = Σ_{n <= z, gcd(n, a) = 1} n^s`, exactly.
pub fn phi_s_sum(z: f64, s: u32, a: u64) -> Result<BigUint> {
    if a == 0 {
        return Err(Error::Zero);
    }
    let n = sieve_bound(z)? as usize;
    let mut coprime = vec![true; n + 1];
    for p in arith::factorize(a)?.primes() {
        let Ok(p) = usize::try_from(p) else { continue };
        for m in (p..=n).step_by(p) {
            coprime[m] = false;
        }
    }
    let hits = (1..=n).filter(|&m| coprime[m]);
    Ok(if s == 0 {
        BigUint::from(hits.count())
    } else {
        hits.map(|m| BigUint::from(m).pow(s)).sum()
    })
}

/// `Σ_{n <= z} φ(n) n^s` for integer `s >= -1`, exactly.
///
/// The `s = -1` case accumulates reduced fractions and is meant for moderate `z`.
pub fn totient_power_sum(z: f64, s: i32) -> Result<BigRational> {
    if s < -1 {
        return Err(Error::InvalidFactorization(format!(
            "totient power sums need s >= -1, got {s}"
        )));
    }
    let n = sieve_bound(z)?;
    let sieve = TotientSieve::new(n);
    let phis = &sieve.phis()[1..];
    let value = match s {
        -1 => phis
            .iter()
            .zip(1u32..)
            .map(|(&phi, m)| {
                let g = phi.gcd(&m);
                BigRational::new(BigInt::from(phi / g), BigInt::from(m / g))
            })
            .sum(),
        0 => BigRational::from_integer(BigInt::from(
            phis.iter().map(|&phi| u128::from(phi)).sum::<u128>(),
        )),
        _ => BigRational::from_integer(BigInt::from(
            phis.iter()
                .zip(1u32..)
                .map(|(&phi, m)| BigUint::from(phi) * BigUint::from(m).pow(s as u32))
                .sum::<BigUint>(),
        )),
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn ks(p: &[u64]) -> KernelSpec {
        KernelSpec::new(p.to_vec()).unwrap()
    }

    fn simplex(t: &[f64], z: f64) -> SimplexConstraint {
        SimplexConstraint::new(t.to_vec(), z).unwrap()
    }

    #[test]
    fn fixed_kernel_examples() {
        assert_eq!(count_fixed_kernel(&ks(&[2]), 100), 6);
        assert_eq!(count_fixed_kernel(&ks(&[2, 3]), 100), 9);
        assert_eq!(count_fixed_kernel(&ks(&[2]), 1), 0);
        let members: Vec<u64> = kernel_members(&ks(&[2, 3]), 100)
            .iter()
            .map(|e| e.to_factorization(&ks(&[2, 3])).unwrap().to_u64().unwrap())
            .collect();
        let mut sorted = members.clone();
        sorted.sort();
        assert_eq!(sorted, vec![6, 12, 18, 24, 36, 48, 54, 72, 96]);
    }

    #[test]
    fn huge_primes_do_not_overflow() {
        let k = ks(&[4294967311]);
        assert_eq!(count_fixed_kernel(&k, u64::MAX), 1);
        assert_eq!(
            count_fixed_kernel(&ks(&[4294967291, 4294967311]), u64::MAX),
            0
        );
        assert_eq!(count_fixed_kernel(&ks(&[2]), u64::MAX), 63);
    }

    #[test]
    fn legendre_examples() {
        let f = |n| arith::factorize(n).unwrap();
        assert_eq!(legendre_e(100, &f(4)), 3);
        assert_eq!(legendre_e(100, &f(2)), 6);
        assert_eq!(legendre_e(1, &f(2)), 0);
        assert_eq!(legendre_e(1, &f(1)), 1);
        assert_eq!(legendre_e(0, &f(1)), 0);
    }

    #[test]
    fn pair_examples() {
        assert_eq!(count_exp_coprime_pairs(&ks(&[2]), 100), 23);
        assert_eq!(count_exp_coprime_pairs(&ks(&[2]), 3), 1);
        assert_eq!(count_exp_coprime_pairs(&ks(&[2]), 1), 0);
        assert_eq!(
            count_exp_coprime_pairs(&ks(&[2, 3]), 36),
            oracle_scan_pairs(&ks(&[2, 3]), 36).unwrap()
        );
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_scan_pairs(&ks(&[2]), 100).unwrap(), 23);
        assert_eq!(oracle_scan_pairs(&ks(&[2]), 1).unwrap(), 0);
        assert_eq!(oracle_scan_pairs(&ks(&[5]), 4).unwrap(), 0);
        assert!(matches!(
            oracle_scan_pairs(&ks(&[2]), ORACLE_SCAN_LIMIT + 1),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn phi_s_examples() {
        assert_eq!(phi_s_sum(10.0, 0, 6).unwrap(), BigUint::from(3u32));
        assert_eq!(phi_s_sum(10.0, 0, 1).unwrap(), BigUint::from(10u32));
        assert_eq!(phi_s_sum(10.0, 1, 6).unwrap(), BigUint::from(13u32));
        assert_eq!(phi_s_sum(10.9, 1, 6).unwrap(), BigUint::from(13u32));
        assert_eq!(phi_s_sum(0.5, 0, 6).unwrap(), BigUint::zero());
        assert!(phi_s_sum(10.0, 0, 0).is_err());
    }

    #[test]
    fn totient_power_examples() {
        let int = |v: i64| BigRational::from_integer(BigInt::from(v));
        assert_eq!(totient_power_sum(10.0, 0).unwrap(), int(32));
        assert_eq!(totient_power_sum(1.0, 0).unwrap(), int(1));
        // direct rational accumulation of φ(n)/n for n = 1..10
        let phi = [1, 1, 2, 2, 4, 2, 6, 4, 6, 4];
        let expected: BigRational = phi
            .iter()
            .zip(1..)
            .map(|(&p, n)| BigRational::new(BigInt::from(p), BigInt::from(n)))
            .sum();
        let got = totient_power_sum(10.0, -1).unwrap();
        assert_eq!(got, expected);
        assert!((got.to_f64().unwrap() - 6.2238).abs() < 1e-4);
        assert_eq!(totient_power_sum(3.0, 1).unwrap(), int(1 + 2 + 6));
        assert!(totient_power_sum(10.0, -2).is_err());
    }

    #[test]
    fn lemma1_examples() {
        assert_eq!(lemma1_count(&simplex(&[1.0], 10.0), &[1]).unwrap(), 10);
        assert_eq!(lemma1_count(&simplex(&[1.0], 10.0), &[2]).unwrap(), 5);
        assert_eq!(
            lemma1_count(&simplex(&[1.0, 1.0], 4.0), &[1, 1]).unwrap(),
            6
        );
        assert_eq!(lemma1_count(&simplex(&[1.0], 0.5), &[1]).unwrap(), 0);
        assert!(matches!(
            lemma1_count(&simplex(&[1.0], 10.0), &[1, 1]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn lemma2_examples() {
        assert_eq!(
            lemma2_sum(&simplex(&[1.0], 1.0)).unwrap(),
            BigRational::one()
        );
        assert_eq!(
            lemma2_sum(&simplex(&[1.0], 10.0)).unwrap(),
            totient_power_sum(10.0, -1).unwrap()
        );
        assert_eq!(
            lemma2_sum(&simplex(&[1.0, 1.0], 3.0)).unwrap(),
            BigRational::from_integer(BigInt::from(2))
        );
        assert_eq!(
            lemma2_sum(&simplex(&[1.0, 1.0], 1.5)).unwrap(),
            BigRational::zero()
        );
    }

    #[test]
    fn lemma3_examples() {
        assert_eq!(lemma3_count(&simplex(&[1.0], 1.0)), 1);
        assert_eq!(lemma3_count(&simplex(&[1.0], 3.0)), 7);
        assert_eq!(lemma3_count(&simplex(&[1.0], 6.0)), 23);
    }

    #[test]
    fn simplex_rejects_bad_input() {
        assert!(SimplexConstraint::new(vec![], 1.0).is_err());
        assert!(SimplexConstraint::new(vec![0.0], 1.0).is_err());
        assert!(SimplexConstraint::new(vec![-1.0], 1.0).is_err());
        assert!(SimplexConstraint::new(vec![f64::NAN], 1.0).is_err());
        assert!(SimplexConstraint::new(vec![1.0], f64::INFINITY).is_err());
        assert!(SimplexConstraint::new(vec![1.0], f64::NAN).is_err());
    }

    #[test]
    fn simplex_boundary_is_inclusive() {
        // 0.5 and 0.25 are exact in binary, so 2*0.5 + 2*0.25 = 1.5 exactly
        let c = simplex(&[0.5, 0.25], 1.5);
        let pts = simplex_points(&c);
        assert!(pts.chunks_exact(2).any(|k| k == [2, 2]));
        assert!(pts
            .chunks_exact(2)
            .all(|k| k[0] as f64 * 0.5 + k[1] as f64 * 0.25 <= 1.5));
    }
}
