//! Exponential divisors and exponentially coprime integers.
//!
//! [`arith`] covers the pointwise functions (`κ`, `τ^(e)`, `σ^(e)`, `gcd_e`),
//! [`counts`] the exact counting functions, [`asymptotics`] their main terms,
//! and [`experiments`] the convergence studies that tie the two together.

pub mod arith;
pub mod asymptotics;
pub mod counts;
pub mod error;
pub mod experiments;
pub mod sieve;
pub mod table;

pub use arith::{Factorization, KernelSpec};
pub use asymptotics::AsymptoticReport;
pub use counts::{ExponentVector, SimplexConstraint};
pub use error::{Error, Result};
pub use experiments::{ConvergenceRow, DensityScanRow, Theorem1Row};
pub use table::{emit_table, Destination, TableFormat, TableRow};
