//! Convergence and density studies built on the exact counters.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;

use crate::arith::{Factorization, KernelSpec};
use crate::asymptotics::{self, AsymptoticReport};
use crate::counts;
use crate::error::{Error, Result};
use crate::sieve::TotientSieve;
use crate::table::{format_real, TableRow};

/// Largest `x` accepted by [`open_problem_scan`].
pub const OPEN_SCAN_LIMIT: u64 = 100_000;

/// One grid point of a density experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub x: u64,
    #[serde(rename = "exact_N")]
    pub exact_n: u64,
    #[serde(rename = "exact_P")]
    pub exact_p: u64,
    #[serde(rename = "main_N")]
    pub main_n: f64,
    #[serde(rename = "main_P")]
    pub main_p: f64,
    /// `P / N²`.
    pub ratio: f64,
    /// `ζ(2)^(-r)`.
    pub target: f64,
    #[serde(rename = "rel_err_N")]
    pub rel_err_n: f64,
    #[serde(rename = "rel_err_P")]
    pub rel_err_p: f64,
}

impl TableRow for ConvergenceRow {
    const COLUMNS: &'static [&'static str] = &[
        "x",
        "exact_N",
        "exact_P",
        "main_N",
        "main_P",
        "ratio",
        "target",
        "rel_err_N",
        "rel_err_P",
    ];

    fn csv_record(&self) -> Vec<String> {
        vec![
            self.x.to_string(),
            self.exact_n.to_string(),
            self.exact_p.to_string(),
            format_real(self.main_n),
            format_real(self.main_p),
            format_real(self.ratio),
            format_real(self.target),
            format_real(self.rel_err_n),
            format_real(self.rel_err_p),
        ]
    }
}

/// `L^(e)(x, n)` against its main term at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem1Row {
    pub x: u64,
    #[serde(flatten)]
    pub report: AsymptoticReport,
}

impl TableRow for Theorem1Row {
    const COLUMNS: &'static [&'static str] =
        &["x", "exact", "main_term", "relative_error", "error_scale"];

    fn csv_record(&self) -> Vec<String> {
        vec![
            self.x.to_string(),
            self.report.exact.to_string(),
            format_real(self.report.main_term),
            format_real(self.report.relative_error),
            format_real(self.report.error_scale),
        ]
    }
}

/// Exponentially coprime pairs among all same-kernel pairs up to `x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityScanRow {
    pub x: u64,
    pub same_kernel_pairs: u64,
    pub exp_coprime_pairs: u64,
    /// `exp_coprime_pairs / same_kernel_pairs`.
    pub empirical_density: f64,
    /// `exp_coprime_pairs / x²`; JSON only.
    pub all_pairs_density: f64,
}

impl TableRow for DensityScanRow {
    const COLUMNS: &'static [&'static str] = &[
        "x",
        "same_kernel_pairs",
        "exp_coprime_pairs",
        "empirical_density",
    ];

    fn csv_record(&self) -> Vec<String> {
        vec![
            self.x.to_string(),
            self.same_kernel_pairs.to_string(),
            self.exp_coprime_pairs.to_string(),
            format_real(self.empirical_density),
        ]
    }
}

fn check_increasing(grid: &[u64]) -> Result<()> {
    if let Some(w) = grid.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid(format!(
            "grid must be strictly increasing, got {} before {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

#[cfg(feature = "parallel")]
fn map_grid<T, F>(grid: &[u64], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    use rayon::prelude::*;
    grid.par_iter().map(|&x| f(x)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_grid<T, F>(grid: &[u64], f: F) -> Result<Vec<T>>
where
    F: Fn(u64) -> Result<T>,
{
    grid.iter().map(|&x| f(x)).collect()
}

/// `P/N²` against `ζ(2)^(-r)` along `grid`, with both counts compared to their main terms.
pub fn density_convergence(kernel: &KernelSpec, grid: &[u64]) -> Result<Vec<ConvergenceRow>> {
    check_increasing(grid)?;
    if let Some(&first) = grid.first() {
        if BigUint::from(first) < kernel.product() {
            return Err(Error::InvalidGrid(format!(
                "grid starts at {first}, below the kernel {}",
                kernel.product()
            )));
        }
    }
    let target = asymptotics::density_limit(kernel.len() as u32);
    map_grid(grid, |x| {
        let exact_n = counts::count_fixed_kernel(kernel, x);
        let exact_p = counts::count_exp_coprime_pairs(kernel, x);
        let xf = x as f64;
        let n_report = asymptotics::compare(
            exact_n,
            asymptotics::cor1_main(xf, kernel)?,
            asymptotics::cor1_error_scale(xf, kernel)?,
        )?;
        let p_report = asymptotics::compare(
            exact_p,
            asymptotics::thm2_main(xf, kernel)?,
            asymptotics::thm2_error_scale(xf, kernel)?,
        )?;
        let n2 = exact_n as f64 * exact_n as f64;
        Ok(ConvergenceRow {
            x,
            exact_n,
            exact_p,
            main_n: n_report.main_term,
            main_p: p_report.main_term,
            ratio: if exact_n == 0 {
                0.0
            } else {
                exact_p as f64 / n2
            },
            target,
            rel_err_n: n_report.relative_error,
            rel_err_p: p_report.relative_error,
        })
    })
}

/// `L^(e)(x, n)` against its main term along `grid`.
pub fn theorem1_convergence(n: &Factorization, grid: &[u64]) -> Result<Vec<Theorem1Row>> {
    if n.is_one() {
        return Err(Error::UnitNotAllowed);
    }
    check_increasing(grid)?;
    map_grid(grid, |x| {
        let xf = x as f64;
        let report = asymptotics::compare(
            counts::legendre_e(x, n),
            asymptotics::thm1_main(xf, n)?,
            asymptotics::thm1_error_scale(xf, n)?,
        )?;
        Ok(Theorem1Row { x, report })
    })
}

/// Exploratory scan with unrestricted prime factors: every `1 <= n <= x` is
/// grouped by kernel and ordered pairs are counted within each group. `<1, 1>`
/// is included and counts as exponentially coprime.
pub fn open_problem_scan(grid: &[u64]) -> Result<Vec<DensityScanRow>> {
    let Some(&max) = grid.iter().max() else {
        return Ok(Vec::new());
    };
    if max > OPEN_SCAN_LIMIT {
        return Err(Error::GuardExceeded {
            what: "x",
            value: max,
            limit: OPEN_SCAN_LIMIT,
        });
    }
    if grid.contains(&0) {
        return Err(Error::InvalidGrid("grid values must be positive".into()));
    }
    let sieve = TotientSieve::new(max as u32);
    // (kernel, exponents) for n = 1..=max
    let shapes: Vec<(u32, Vec<u32>)> = (1..=max as u32)
        .map(|n| {
            let f = sieve.factor(n);
            (
                f.iter().map(|&(p, _)| p).product(),
                f.iter().map(|&(_, a)| a).collect(),
            )
        })
        .collect();
    map_grid(grid, |x| {
        let mut groups: HashMap<u32, Vec<&[u32]>> = HashMap::new();
        for (kernel, exps) in &shapes[..x as usize] {
            groups.entry(*kernel).or_default().push(exps);
        }
        let mut same = 0u64;
        let mut coprime = 0u64;
        for members in groups.values() {
            let g = members.len() as u64;
            same += g * g;
            for a in members {
                coprime += members
                    .iter()
                    .filter(|b| a.iter().zip(b.iter()).all(|(u, v)| u.gcd(v) == 1))
                    .count() as u64;
            }
        }
        Ok(DensityScanRow {
            x,
            same_kernel_pairs: same,
            exp_coprime_pairs: coprime,
            empirical_density: coprime as f64 / same as f64,
            all_pairs_density: coprime as f64 / (x as f64 * x as f64),
        })
    })
}

/// `[base^lo, ..., base^hi]`, stopping early on overflow.
pub fn geometric_grid(base: u64, lo: u32, hi: u32) -> Vec<u64> {
    (lo..=hi).map_while(|e| base.checked_pow(e)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::{write_table, TableFormat};

    fn ks(p: &[u64]) -> KernelSpec {
        KernelSpec::new(p.to_vec()).unwrap()
    }

    #[test]
    fn convergence_small_rows() {
        let rows = density_convergence(&ks(&[2]), &[100]).unwrap();
        let row = &rows[0];
        assert_eq!((row.exact_n, row.exact_p), (6, 23));
        assert!((row.ratio - 23.0 / 36.0).abs() < 1e-15);
        assert!((row.target - 0.6079271019).abs() < 1e-10);

        let rows = density_convergence(&ks(&[2]), &[3]).unwrap();
        assert_eq!(
            (rows[0].exact_n, rows[0].exact_p, rows[0].ratio),
            (1, 1, 1.0)
        );
    }

    #[test]
    fn convergence_rejects_bad_grids() {
        assert!(matches!(
            density_convergence(&ks(&[2]), &[100, 10]),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(
            density_convergence(&ks(&[2]), &[100, 100]),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(
            density_convergence(&ks(&[2, 3]), &[5, 100]),
            Err(Error::InvalidGrid(_))
        ));
        // x = 2 is a member but below the x >= 3 domain of the main terms
        assert!(matches!(
            density_convergence(&ks(&[2]), &[2]),
            Err(Error::XTooSmall(_))
        ));
    }

    #[test]
    fn theorem1_rejects_unit() {
        assert!(matches!(
            theorem1_convergence(&Factorization::one(), &[100]),
            Err(Error::UnitNotAllowed)
        ));
    }

    #[test]
    fn scan_small_values() {
        let rows = open_problem_scan(&[1, 2, 10]).unwrap();
        assert_eq!(
            (rows[0].same_kernel_pairs, rows[0].exp_coprime_pairs),
            (1, 1)
        );
        assert_eq!(
            (rows[1].same_kernel_pairs, rows[1].exp_coprime_pairs),
            (2, 2)
        );
        // groups up to 10: {1} {2,4,8} {3,9} {5} {6} {7} {10}
        // same-kernel pairs 1+9+4+1+1+1+1 = 18, coprime 1+7+3+4 = 15
        assert_eq!(
            (rows[2].same_kernel_pairs, rows[2].exp_coprime_pairs),
            (18, 15)
        );
        assert!((rows[2].empirical_density - 15.0 / 18.0).abs() < 1e-15);
        assert!((rows[2].all_pairs_density - 0.15).abs() < 1e-15);
        assert!(matches!(
            open_problem_scan(&[OPEN_SCAN_LIMIT + 1]),
            Err(Error::GuardExceeded { .. })
        ));
        assert!(open_problem_scan(&[]).unwrap().is_empty());
    }

    #[test]
    fn csv_and_json_shapes() {
        let rows = density_convergence(&ks(&[2]), &[100]).unwrap();
        let mut buf = Vec::new();
        write_table(&rows, TableFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "x,exact_N,exact_P,main_N,main_P,ratio,target,rel_err_N,rel_err_P"
        );
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1].split(',').count(), 9);
        assert!(lines[1].starts_with("100,6,23,"));

        let mut buf = Vec::new();
        write_table::<ConvergenceRow, _>(&[], TableFormat::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);

        let mut buf = Vec::new();
        write_table(&rows, TableFormat::Json, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let obj = v.as_array().unwrap()[0].as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        let mut expected = ConvergenceRow::COLUMNS.to_vec();
        keys.sort();
        expected.sort();
        assert_eq!(keys, expected);
        assert_eq!(obj["exact_P"], 23);
    }

    #[test]
    fn scan_json_has_extra_column() {
        let rows = open_problem_scan(&[10]).unwrap();
        let mut buf = Vec::new();
        write_table(&rows, TableFormat::Json, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert!(v[0].get("all_pairs_density").is_some());
        let mut buf = Vec::new();
        write_table(&rows, TableFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "x,same_kernel_pairs,exp_coprime_pairs,empirical_density"
        );
    }

    #[test]
    fn theorem1_row_table() {
        let n = Factorization::from_pairs(vec![(2, 2)]).unwrap();
        let rows = theorem1_convergence(&n, &[1000, 1_000_000]).unwrap();
        assert_eq!(rows[1].report.exact, 10u64.into());
        let mut buf = Vec::new();
        write_table(&rows, TableFormat::Json, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v[1]["exact"], 10);
        assert_eq!(v[1]["x"], 1_000_000);
    }

    #[test]
    fn geometric_grids() {
        assert_eq!(geometric_grid(10, 1, 3), vec![10, 100, 1000]);
        assert_eq!(geometric_grid(2, 62, 70), vec![1 << 62, 1 << 63]);
    }
}
