//! Integer arithmetic around exponential divisors.
//!
//! An integer `d = ∏ p_i^{c_i}` is an exponential divisor of `n = ∏ p_i^{a_i}`
//! when `c_i | a_i` for every `i`. Two integers with the same prime factors are
//! exponentially coprime when their corresponding exponents are coprime.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};

/// Canonical prime-power decomposition `∏ p_i^{a_i}`, primes strictly increasing.
///
/// The empty decomposition is the integer 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Self { pairs: Vec::new() }
    }

    /// Builds a factorization from `(prime, exponent)` pairs, checking the canonical form.
    pub fn from_pairs(pairs: Vec<(u64, u32)>) -> Result<Self> {
        for (i, &(p, a)) in pairs.iter().enumerate() {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if a == 0 {
                return Err(Error::InvalidFactorization(format!(
                    "exponent of {p} must be at least 1"
                )));
            }
            if i > 0 && pairs[i - 1].0 >= p {
                return Err(Error::NotIncreasing {
                    prev: pairs[i - 1].0,
                    next: p,
                });
            }
        }
        Ok(Self { pairs })
    }

    /// Pairs the primes of `kernel` with `exponents`.
    pub fn from_kernel(kernel: &KernelSpec, exponents: &[u32]) -> Result<Self> {
        if kernel.len() != exponents.len() {
            return Err(Error::DimensionMismatch {
                expected: kernel.len(),
                found: exponents.len(),
            });
        }
        if let Some(&p) = kernel
            .primes()
            .iter()
            .zip(exponents)
            .find(|(_, &a)| a == 0)
            .map(|(p, _)| p)
        {
            return Err(Error::InvalidFactorization(format!(
                "exponent of {p} must be at least 1"
            )));
        }
        Ok(Self {
            pairs: kernel
                .primes()
                .iter()
                .copied()
                .zip(exponents.iter().copied())
                .collect(),
        })
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn primes(&self) -> impl ExactSizeIterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    pub fn exponents(&self) -> impl ExactSizeIterator<Item = u32> + '_ {
        self.pairs.iter().map(|&(_, a)| a)
    }

    /// Number of distinct primes, `r`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn value(&self) -> BigUint {
        self.pairs
            .iter()
            .fold(BigUint::one(), |acc, &(p, a)| acc * BigUint::from(p).pow(a))
    }

    /// The value when it fits in 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        self.pairs.iter().try_fold(1u64, |acc, &(p, a)| {
            p.checked_pow(a).and_then(|q| acc.checked_mul(q))
        })
    }

    /// `true` when both decompositions use exactly the same primes.
    pub fn same_primes(&self, other: &Self) -> bool {
        self.len() == other.len() && self.primes().eq(other.primes())
    }

    /// The prime set as a [`KernelSpec`], or `None` for 1.
    pub fn kernel_spec(&self) -> Option<KernelSpec> {
        if self.is_one() {
            None
        } else {
            Some(KernelSpec {
                primes: self.primes().collect(),
            })
        }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return f.write_str("1");
        }
        for (i, &(p, a)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if a == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{a}")?;
            }
        }
        Ok(())
    }
}

/// The distinct primes `p_1 < ... < p_r` fixing a squarefree kernel.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct KernelSpec {
    primes: Vec<u64>,
}

impl KernelSpec {
    pub fn new(primes: Vec<u64>) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::EmptyKernel);
        }
        for (i, &p) in primes.iter().enumerate() {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if i > 0 && primes[i - 1] >= p {
                return Err(Error::NotIncreasing {
                    prev: primes[i - 1],
                    next: p,
                });
            }
        }
        Ok(Self { primes })
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Number of primes, `r`.
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// `∏ p_i`.
    pub fn product(&self) -> BigUint {
        self.primes.iter().map(|&p| BigUint::from(p)).product()
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.primes.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= n) {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Canonical factorization by trial division up to `√n`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let mut pairs = Vec::new();
    let mut rest = n;
    let mut push = |rest: &mut u64, p: u64| {
        let mut a = 0u32;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            a += 1;
        }
        if a > 0 {
            pairs.push((p, a));
        }
    };
    push(&mut rest, 2);
    push(&mut rest, 3);
    let mut d = 5u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= rest) {
        push(&mut rest, d);
        push(&mut rest, d + 2);
        d += 6;
    }
    if rest > 1 {
        pairs.push((rest, 1));
    }
    Ok(Factorization { pairs })
}

/// Squarefree kernel `κ(n) = ∏ p_i`; `κ(1) = 1`.
pub fn kernel(f: &Factorization) -> BigUint {
    f.primes().map(BigUint::from).product()
}

/// Euler's totient.
pub fn euler_phi(a: u64) -> Result<u64> {
    let f = factorize(a)?;
    Ok(f.pairs.iter().fold(a, |acc, &(p, _)| acc / p * (p - 1)))
}

/// Number of squarefree divisors of `a`, i.e. `2^ω(a)`.
pub fn theta(a: u64) -> Result<u64> {
    Ok(1u64 << factorize(a)?.len())
}

/// Positive divisors of `a` in increasing order.
pub fn divisors(a: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= a) {
        if a.is_multiple_of(d) {
            small.push(d);
            if d != a / d {
                large.push(a / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// All exponential divisors of `f`, in increasing numeric order.
///
/// `1` has the single exponential divisor `1`.
pub fn exponential_divisors(f: &Factorization) -> Vec<Factorization> {
    let mut out = vec![Factorization::one()];
    for &(p, a) in &f.pairs {
        let choices = divisors(u64::from(a));
        out = out
            .iter()
            .flat_map(|d| {
                choices.iter().map(move |&c| {
                    let mut pairs = d.pairs.clone();
                    pairs.push((p, c as u32));
                    Factorization { pairs }
                })
            })
            .collect();
    }
    let mut keyed: Vec<(BigUint, Factorization)> =
        out.into_iter().map(|d| (d.value(), d)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, d)| d).collect()
}

/// Number of exponential divisors, `∏ τ(a_i)`.
pub fn tau_e(f: &Factorization) -> u64 {
    f.exponents()
        .map(|a| divisors(u64::from(a)).len() as u64)
        .product()
}

/// Sum of exponential divisors, `∏_i Σ_{c | a_i} p_i^c`.
pub fn sigma_e(f: &Factorization) -> BigUint {
    f.pairs
        .iter()
        .map(|&(p, a)| {
            divisors(u64::from(a))
                .into_iter()
                .map(|c| BigUint::from(p).pow(c as u32))
                .sum::<BigUint>()
        })
        .product()
}

/// Greatest common exponential divisor `∏ p_i^{gcd(a_i, b_i)}`.
///
/// Fails with [`Error::DifferentKernels`] unless both arguments have the same
/// prime factors; `gcd_e(1, 1) = 1`.
pub fn gcd_e(f: &Factorization, g: &Factorization) -> Result<Factorization> {
    if !f.same_primes(g) {
        return Err(Error::DifferentKernels(f.to_string(), g.to_string()));
    }
    Ok(Factorization {
        pairs: f
            .pairs
            .iter()
            .zip(&g.pairs)
            .map(|(&(p, a), &(_, b))| (p, a.gcd(&b)))
            .collect(),
    })
}

/// Exponential coprimality. Total: integers with different prime factors are
/// simply not exponentially coprime, and `(1, 1)` is.
pub fn is_exp_coprime(f: &Factorization, g: &Factorization) -> bool {
    f.same_primes(g)
        && f.exponents()
            .zip(g.exponents())
            .all(|(a, b)| a.gcd(&b) == 1)
}
