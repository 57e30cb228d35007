//! Acceptance criteria, one line per criterion. Run with
//! `cargo test -p ecoprime-core --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use ecoprime_core::arith::{self, Factorization, KernelSpec};
use ecoprime_core::asymptotics;
use ecoprime_core::counts::{self, SimplexConstraint};
use ecoprime_core::experiments;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ks(p: &[u64]) -> KernelSpec {
    KernelSpec::new(p.to_vec()).unwrap()
}

/// Plain trial division, kept separate from the library's factorizer.
fn naive_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut a = 0;
        while n.is_multiple_of(p) {
            n /= p;
            a += 1;
        }
        if a > 0 {
            out.push((p, a));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mobius(n: u64) -> i64 {
    let f = naive_factor(n);
    if f.iter().any(|&(_, a)| a > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn criterion_1() -> Outcome {
    let limit = 2000u64;
    let naive: Vec<Vec<(u64, u32)>> = (0..=limit)
        .map(|n| if n == 0 { vec![] } else { naive_factor(n) })
        .collect();
    let lib: Vec<Factorization> = (1..=limit).map(|n| arith::factorize(n).unwrap()).collect();
    let mut pairs = 0u64;
    for n in 1..=limit {
        for m in 1..=limit {
            let (a, b) = (&naive[n as usize], &naive[m as usize]);
            let expected = a.len() == b.len()
                && a.iter()
                    .zip(b)
                    .all(|(&(p, x), &(q, y))| p == q && x.gcd(&y) == 1);
            let got = arith::is_exp_coprime(&lib[n as usize - 1], &lib[m as usize - 1]);
            ensure(got == expected, || {
                format!("is_exp_coprime({n}, {m}) = {got}")
            })?;
            pairs += 1;
        }
    }
    for n in 1..=10_000u64 {
        let f = naive_factor(n);
        // every ordinary divisor with the same prime support and c_i | a_i
        let mut count = 0u64;
        let mut sum = BigUint::from(0u32);
        for d in 1..=n {
            if n % d != 0 {
                continue;
            }
            let g = naive_factor(d);
            let is_exp_div = g.len() == f.len()
                && g.iter()
                    .zip(&f)
                    .all(|(&(q, c), &(p, a))| p == q && a % c == 0);
            if is_exp_div || (n == 1 && d == 1) {
                count += 1;
                sum += d;
            }
        }
        let lf = arith::factorize(n).unwrap();
        ensure(arith::tau_e(&lf) == count, || format!("tau_e({n})"))?;
        ensure(arith::sigma_e(&lf) == sum, || format!("sigma_e({n})"))?;
    }
    Ok(format!(
        "{pairs} pairs and 10000 tau_e/sigma_e values agree"
    ))
}

fn criterion_2() -> Outcome {
    let four = arith::factorize(4).unwrap();
    let unit = SimplexConstraint::new(vec![1.0], 6.0).unwrap();
    let table = [
        ("N([2],100)", counts::count_fixed_kernel(&ks(&[2]), 100), 6),
        (
            "N([2,3],100)",
            counts::count_fixed_kernel(&ks(&[2, 3]), 100),
            9,
        ),
        ("L(100,2^2)", counts::legendre_e(100, &four), 3),
        (
            "P([2],100)",
            counts::count_exp_coprime_pairs(&ks(&[2]), 100),
            23,
        ),
        ("lemma3(t=[1],z=6)", counts::lemma3_count(&unit), 23),
    ];
    for (name, got, want) in table {
        ensure(got == want, || format!("{name} = {got}, expected {want}"))?;
    }
    Ok("N=6, N=9, L=3, P=23, lemma3=23".into())
}

fn criterion_3() -> Outcome {
    let k = ks(&[2, 3]);
    let mut detail = Vec::new();
    for x in [1_000u64, 10_000, 100_000] {
        let pairs = counts::count_exp_coprime_pairs(&k, x);
        let summed: u64 = counts::kernel_members(&k, x)
            .iter()
            .map(|e| counts::legendre_e(x, &e.to_factorization(&k).unwrap()))
            .sum();
        ensure(pairs == summed, || {
            format!("x={x}: P={pairs}, sum L={summed}")
        })?;
        detail.push(format!("x={x}: {pairs}"));
    }
    Ok(detail.join(", "))
}

fn criterion_4() -> Outcome {
    let k = ks(&[2]);
    let x = 1u64 << 60;
    let rows = experiments::density_convergence(&k, &[x]).map_err(|e| e.to_string())?;
    let row = &rows[0];
    ensure(row.exact_n == 60, || format!("N = {}", row.exact_n))?;
    let mobius_pairs: i64 = (1..=60).map(|d| mobius(d) * (60 / d as i64).pow(2)).sum();
    ensure(row.exact_p as i64 == mobius_pairs, || {
        format!(
            "P = {} but the Möbius sum gives {mobius_pairs}",
            row.exact_p
        )
    })?;
    let gap = (row.ratio - 0.607927).abs();
    ensure(gap <= 0.02, || {
        format!("ratio {} is {gap} from 0.607927", row.ratio)
    })?;
    Ok(format!(
        "P = {} = Möbius sum, ratio {:.6}, gap {gap:.4} <= 0.02",
        row.exact_p, row.ratio
    ))
}

fn criterion_5() -> Outcome {
    let rows = experiments::density_convergence(&ks(&[2, 3]), &[10_000, 1_000_000_000_000])
        .map_err(|e| e.to_string())?;
    let target = 0.369575;
    let near = (rows[0].ratio - target).abs();
    let far = (rows[1].ratio - target).abs();
    ensure(far <= 0.05, || {
        format!("ratio at 1e12 = {} (gap {far})", rows[1].ratio)
    })?;
    ensure(far < near, || {
        format!("gap at 1e12 {far} is not below gap at 1e4 {near}")
    })?;
    Ok(format!(
        "ratio {:.6} at 1e4 (gap {near:.4}), {:.6} at 1e12 (gap {far:.4} <= 0.05)",
        rows[0].ratio, rows[1].ratio
    ))
}

fn criterion_6() -> Outcome {
    let n = Factorization::from_pairs(vec![(2, 2), (3, 3)]).unwrap();
    let grid = experiments::geometric_grid(10, 3, 9);
    let rows = experiments::theorem1_convergence(&n, &grid).map_err(|e| e.to_string())?;
    let first = rows.first().unwrap().report.relative_error;
    let last = rows.last().unwrap().report.relative_error;
    ensure(last < first, || {
        format!("rel_err at 1e9 {last} >= at 1e3 {first}")
    })?;
    ensure(last < 0.35, || format!("rel_err at 1e9 = {last}"))?;
    let worst = rows
        .iter()
        .map(|r| r.report.relative_error * (r.x as f64).ln())
        .fold(0.0, f64::max);
    ensure(worst <= 10.0, || format!("max rel_err * log x = {worst}"))?;
    Ok(format!(
        "rel_err {first:.4} -> {last:.4}, max rel_err*log x = {worst:.3} <= 10"
    ))
}

fn criterion_7() -> Outcome {
    let z = 1e6;
    let mut detail = Vec::new();
    for a in [2u64, 6, 30] {
        let exact = counts::phi_s_sum(z, 0, a)
            .map_err(|e| e.to_string())?
            .to_f64()
            .unwrap();
        let main = asymptotics::eq5_main(z, 0, a).map_err(|e| e.to_string())?;
        let rel = (exact - main).abs() / main;
        ensure(rel <= 1e-3, || format!("phi_0(1e6, {a}): rel {rel}"))?;
        detail.push(format!("a={a}: {rel:.2e}"));
    }
    let exact = counts::totient_power_sum(z, 0)
        .map_err(|e| e.to_string())?
        .to_f64()
        .unwrap();
    let main = asymptotics::eq7_main(z, 0.0);
    let rel = (exact - main).abs() / main;
    ensure(rel <= 1e-4, || format!("totient sum rel {rel}"))?;
    detail.push(format!("sum phi: {rel:.2e}"));
    Ok(detail.join(", "))
}

fn ulp_distance(a: f64, b: f64) -> u64 {
    assert!(a > 0.0 && b > 0.0);
    (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
}

fn criterion_8() -> Outcome {
    const PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];
    let mut rng = StdRng::seed_from_u64(0x5eed_2004);
    let mut worst = 0u64;
    for case in 0..100 {
        let r = rng.gen_range(1..=4);
        let mut primes: Vec<u64> = PRIMES.to_vec();
        while primes.len() > r {
            primes.remove(rng.gen_range(0..primes.len()));
        }
        let k = KernelSpec::new(primes.clone()).unwrap();
        let exps: Vec<u32> = (0..r).map(|_| rng.gen_range(1..=30)).collect();
        let x = 10f64.powf(rng.gen_range(0.5..30.0));
        let n = Factorization::from_kernel(&k, &exps).unwrap();
        let c = SimplexConstraint::logarithmic(&k, x).unwrap();
        let a: Vec<u64> = exps.iter().map(|&e| u64::from(e)).collect();
        let pairs = [
            (
                asymptotics::lemma1_main(&c, &a),
                asymptotics::thm1_main(x, &n),
            ),
            (asymptotics::lemma3_main(&c), asymptotics::thm2_main(x, &k)),
        ];
        for (lemma, theorem) in pairs {
            let (lemma, theorem) = (
                lemma.map_err(|e| e.to_string())?,
                theorem.map_err(|e| e.to_string())?,
            );
            let d = ulp_distance(lemma, theorem);
            worst = worst.max(d);
            ensure(d <= 4, || {
                format!("case {case}: {lemma} vs {theorem} ({d} ulp)")
            })?;
        }
    }
    Ok(format!("100 instances, worst distance {worst} ulp <= 4"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 oracle equivalence of the definitions", criterion_1),
        ("2 exact small-case table", criterion_2),
        ("3 aggregation identity", criterion_3),
        ("4 density convergence r=1", criterion_4),
        ("5 density convergence r=2", criterion_5),
        ("6 L^(e) error decay", criterion_6),
        ("7 auxiliary estimates", criterion_7),
        ("8 main-term substitution", criterion_8),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} [{secs:.2}s]");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
