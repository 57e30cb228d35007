//! Main terms of the counting estimates and exact-vs-main-term reports.
//!
//! The error-scale functions give the shape of each O-term without its
//! (unknown) constant.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::arith::{self, Factorization, KernelSpec};
use crate::counts::SimplexConstraint;
use crate::error::{Error, Result};

const MAX_R: usize = 20;

/// `ζ(2) = π²/6`.
pub fn zeta2() -> f64 {
    PI * PI / 6.0
}

/// `ζ(2)^(-r)`, the limiting density of exponentially coprime pairs with `r`
/// fixed prime factors.
pub fn density_limit(r: u32) -> f64 {
    zeta2().powi(-(r as i32))
}

fn factorial(r: usize) -> Result<f64> {
    if r > MAX_R {
        return Err(Error::TooManyPrimes(r));
    }
    Ok((1..=r as u64).product::<u64>() as f64)
}

fn check_x(x: f64) -> Result<()> {
    if x >= 3.0 {
        Ok(())
    } else {
        Err(Error::XTooSmall(x))
    }
}

fn phi_ratio(a: u64) -> Result<f64> {
    Ok(arith::euler_phi(a)? as f64 / a as f64)
}

/// Main term of the coprime simplex count: `(1/r!) ∏ φ(a_i)/(a_i t_i) · z^r`.
pub fn lemma1_main(c: &SimplexConstraint, a: &[u64]) -> Result<f64> {
    if a.len() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            found: a.len(),
        });
    }
    let r = c.dim();
    let mut prod = 1.0;
    for (&t, &ai) in c.weights().iter().zip(a) {
        prod *= phi_ratio(ai)? / t;
    }
    Ok(prod * c.bound().powi(r as i32) / factorial(r)?)
}

/// Main term of the totient-ratio simplex sum: `(1/(r! ζ(2)^r)) ∏ 1/t_i · z^r`.
pub fn lemma2_main(c: &SimplexConstraint) -> Result<f64> {
    let r = c.dim();
    let prod: f64 = c.weights().iter().fold(1.0, |acc, &t| acc * (1.0 / t));
    Ok(prod * c.bound().powi(r as i32) / (factorial(r)? * zeta2().powi(r as i32)))
}

/// Main term of the coprime pair simplex count:
/// `(1/((r!)² ζ(2)^r)) ∏ 1/t_i² · z^(2r)`.
pub fn lemma3_main(c: &SimplexConstraint) -> Result<f64> {
    let r = c.dim();
    let prod: f64 = c.weights().iter().fold(1.0, |acc, &t| acc * (1.0 / t));
    let f = factorial(r)?;
    Ok(prod * prod * c.bound().powi(2 * r as i32) / (f * f * zeta2().powi(r as i32)))
}

/// Main term of `L^(e)(x, n)`: `(1/r!) ∏ φ(a_i)/(a_i log p_i) · (log x)^r`.
pub fn thm1_main(x: f64, n: &Factorization) -> Result<f64> {
    check_x(x)?;
    if n.is_one() {
        return Err(Error::UnitNotAllowed);
    }
    let r = n.len();
    let mut prod = 1.0;
    for &(p, a) in n.pairs() {
        prod *= phi_ratio(u64::from(a))? / (p as f64).ln();
    }
    Ok(prod * x.ln().powi(r as i32) / factorial(r)?)
}

/// `(log x)^(r-1) Σ θ(a_i)`.
pub fn thm1_error_scale(x: f64, n: &Factorization) -> Result<f64> {
    check_x(x)?;
    if n.is_one() {
        return Err(Error::UnitNotAllowed);
    }
    let mut theta_sum = 0u64;
    for a in n.exponents() {
        theta_sum += arith::theta(u64::from(a))?;
    }
    Ok(x.ln().powi(n.len() as i32 - 1) * theta_sum as f64)
}

/// Main term of `N(p_1, ..., p_r; x)`: `(1/r!) ∏ 1/log p_i · (log x)^r`.
pub fn cor1_main(x: f64, kernel: &KernelSpec) -> Result<f64> {
    check_x(x)?;
    let r = kernel.len();
    let mut prod = 1.0;
    for &p in kernel.primes() {
        prod *= 1.0 / (p as f64).ln();
    }
    Ok(prod * x.ln().powi(r as i32) / factorial(r)?)
}

/// `(log x)^(r-1)`.
pub fn cor1_error_scale(x: f64, kernel: &KernelSpec) -> Result<f64> {
    check_x(x)?;
    Ok(x.ln().powi(kernel.len() as i32 - 1))
}

/// Main term of `P^(e)(p_1, ..., p_r; x)`:
/// `(1/((r!)² ζ(2)^r)) ∏ 1/(log p_i)² · (log x)^(2r)`.
pub fn thm2_main(x: f64, kernel: &KernelSpec) -> Result<f64> {
    check_x(x)?;
    let r = kernel.len();
    let prod: f64 = kernel
        .primes()
        .iter()
        .fold(1.0, |acc, &p| acc * (1.0 / (p as f64).ln()));
    let f = factorial(r)?;
    Ok(prod * prod * x.ln().powi(2 * r as i32) / (f * f * zeta2().powi(r as i32)))
}

/// `(log x)^(2r-1) log log x`.
pub fn thm2_error_scale(x: f64, kernel: &KernelSpec) -> Result<f64> {
    check_x(x)?;
    let lx = x.ln();
    Ok(lx.powi(2 * kernel.len() as i32 - 1) * lx.ln())
}

/// Main term of `φ_s(z, a)`: `z^(s+1) φ(a) / ((s+1) a)`.
pub fn eq5_main(z: f64, s: u32, a: u64) -> Result<f64> {
    Ok(z.powi(s as i32 + 1) * phi_ratio(a)? / f64::from(s + 1))
}

/// `z^s θ(a)`.
pub fn eq5_error_scale(z: f64, s: u32, a: u64) -> Result<f64> {
    Ok(z.powi(s as i32) * arith::theta(a)? as f64)
}

/// Main term of `Σ_{n <= z} φ(n) n^s`: `z^(s+2) / ((s+2) ζ(2))`, real `s >= -1`.
pub fn eq7_main(z: f64, s: f64) -> f64 {
    z.powf(s + 2.0) / ((s + 2.0) * zeta2())
}

/// `z^(s+1) log z`.
pub fn eq7_error_scale(z: f64, s: f64) -> f64 {
    z.powf(s + 1.0) * z.ln()
}

/// An exact left-hand side: an integer count or a rational sum.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactValue {
    Integer(BigUint),
    Rational(BigRational),
}

impl ExactValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            Self::Integer(n) => n.to_f64().unwrap_or(f64::INFINITY),
            Self::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl std::fmt::Display for ExactValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Integer(n) => write!(f, "{n}"),
            Self::Rational(q) => write!(f, "{q}"),
        }
    }
}

impl Serialize for ExactValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Integer(n) => match n.to_u64() {
                Some(v) => s.serialize_u64(v),
                None => s.serialize_str(&n.to_string()),
            },
            Self::Rational(q) => s.serialize_str(&q.to_string()),
        }
    }
}

impl From<u64> for ExactValue {
    fn from(n: u64) -> Self {
        Self::Integer(BigUint::from(n))
    }
}

impl From<BigUint> for ExactValue {
    fn from(n: BigUint) -> Self {
        Self::Integer(n)
    }
}

impl From<BigRational> for ExactValue {
    fn from(q: BigRational) -> Self {
        Self::Rational(q)
    }
}

/// An exact count paired with its main term.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub exact: ExactValue,
    pub main_term: f64,
    /// `|exact - main_term| / main_term`.
    pub relative_error: f64,
    pub error_scale: f64,
}

pub fn compare(
    exact: impl Into<ExactValue>,
    main: f64,
    error_scale: f64,
) -> Result<AsymptoticReport> {
    if main.is_nan() || main <= 0.0 {
        return Err(Error::NonPositiveMain(main));
    }
    let exact = exact.into();
    let relative_error = (exact.to_f64() - main).abs() / main;
    Ok(AsymptoticReport {
        exact,
        main_term: main,
        relative_error,
        error_scale: error_scale.max(0.0),
    })
}
