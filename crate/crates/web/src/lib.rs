//! Browser bindings for the demo page in `www/`.
//!
//! Every export returns a JSON string; the page parses it and draws the plots.

use ecoprime_core::arith::{self, KernelSpec};
use ecoprime_core::{counts, experiments};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest exponent accepted for the `2^k` grids.
const MAX_EXPONENT: u32 = 63;

#[derive(Serialize)]
struct IntegerReport {
    n: u64,
    factorization: String,
    kernel: String,
    tau_e: u64,
    sigma_e: String,
    exponential_divisors: Vec<String>,
    /// `k <= n` exponentially coprime to `n`.
    legendre: u64,
}

#[derive(Serialize)]
struct CurvePoint {
    log2_x: u32,
    exact: f64,
    main: f64,
    ratio: f64,
    target: f64,
}

fn parse_u64(s: &str) -> Result<u64, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a positive integer"))
}

fn parse_kernel(s: &str) -> Result<KernelSpec, String> {
    let primes = s.split(',').map(parse_u64).collect::<Result<Vec<_>, _>>()?;
    KernelSpec::new(primes).map_err(|e| e.to_string())
}

fn check_exponent(max_exponent: u32) -> Result<(), String> {
    if max_exponent > MAX_EXPONENT {
        return Err(format!("max exponent is {MAX_EXPONENT}"));
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

pub fn explore_integer_json(n: &str) -> Result<String, String> {
    let value = parse_u64(n)?;
    let f = arith::factorize(value).map_err(|e| e.to_string())?;
    to_json(&IntegerReport {
        n: value,
        factorization: f.to_string(),
        kernel: arith::kernel(&f).to_string(),
        tau_e: arith::tau_e(&f),
        sigma_e: arith::sigma_e(&f).to_string(),
        exponential_divisors: arith::exponential_divisors(&f)
            .iter()
            .map(|d| d.value().to_string())
            .collect(),
        legendre: counts::legendre_e(value, &f),
    })
}

/// `P/N²` at `x = 2^k` for every `k` up to `max_exponent` where the row is defined.
pub fn density_curve_json(primes: &str, max_exponent: u32) -> Result<String, String> {
    check_exponent(max_exponent)?;
    let kernel = parse_kernel(primes)?;
    let grid: Vec<u64> = experiments::geometric_grid(2, 2, max_exponent)
        .into_iter()
        .filter(|&x| counts::count_fixed_kernel(&kernel, x) > 0)
        .collect();
    let rows = experiments::density_convergence(&kernel, &grid).map_err(|e| e.to_string())?;
    let points: Vec<CurvePoint> = rows
        .iter()
        .map(|r| CurvePoint {
            log2_x: r.x.trailing_zeros(),
            exact: r.exact_p as f64,
            main: r.main_p,
            ratio: r.ratio,
            target: r.target,
        })
        .collect();
    to_json(&points)
}

/// `L^(e)(2^k, n)` against its main term for `k = 2..=max_exponent`.
pub fn legendre_curve_json(n: &str, max_exponent: u32) -> Result<String, String> {
    check_exponent(max_exponent)?;
    let f = arith::factorize(parse_u64(n)?).map_err(|e| e.to_string())?;
    let grid = experiments::geometric_grid(2, 2, max_exponent);
    let rows = experiments::theorem1_convergence(&f, &grid).map_err(|e| e.to_string())?;
    let points: Vec<CurvePoint> = rows
        .iter()
        .map(|r| CurvePoint {
            log2_x: r.x.trailing_zeros(),
            exact: r.report.exact.to_f64(),
            main: r.report.main_term,
            ratio: r.report.relative_error,
            target: 0.0,
        })
        .collect();
    to_json(&points)
}

#[wasm_bindgen]
pub fn explore_integer(n: &str) -> Result<String, JsError> {
    explore_integer_json(n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn density_curve(primes: &str, max_exponent: u32) -> Result<String, JsError> {
    density_curve_json(primes, max_exponent).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn legendre_curve(n: &str, max_exponent: u32) -> Result<String, JsError> {
    legendre_curve_json(n, max_exponent).map_err(|e| JsError::new(&e))
}
