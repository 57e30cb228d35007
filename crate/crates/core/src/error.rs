use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("expected a positive integer, got 0")]
    Zero,

    #[error("invalid factorization: {0}")]
    InvalidFactorization(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("a kernel needs at least one prime")]
    EmptyKernel,

    #[error("primes must be strictly increasing, got {prev} before {next}")]
    NotIncreasing { prev: u64, next: u64 },

    /// `(n, m)_e` only exists when `n` and `m` share their prime factors.
    #[error("gcd_e({0}, {1}) does not exist: the arguments have different prime factors")]
    DifferentKernels(String, String),

    #[error("dimension mismatch: expected {expected} entries, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("simplex weights must be finite and positive, got {0}")]
    InvalidWeight(f64),

    #[error("simplex bound must not be NaN")]
    InvalidBound,

    #[error("the main term needs x >= 3, got {0}")]
    XTooSmall(f64),

    #[error("the asymptotic formulas need r >= 1 primes (n = 1 has none)")]
    UnitNotAllowed,

    #[error("r = {0} is above the supported maximum of 20 primes")]
    TooManyPrimes(usize),

    #[error("main term must be positive, got {0}")]
    NonPositiveMain(f64),

    #[error("{what} = {value} exceeds the limit {limit}")]
    GuardExceeded {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("failed to write table to {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
