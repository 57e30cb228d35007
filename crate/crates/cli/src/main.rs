use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ecoprime_core::arith::{self, Factorization, KernelSpec};
use ecoprime_core::asymptotics;
use ecoprime_core::counts::{self, SimplexConstraint};
use ecoprime_core::experiments;
use ecoprime_core::table::{emit_table, format_real, Destination, TableFormat, TableRow};

/// Exponential divisors, exponentially coprime integers and their counting functions.
#[derive(Debug, Parser)]
#[command(name = "ecoprime", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate an arithmetic function at n (or at the pair n, m).
    Arith {
        #[arg(value_enum)]
        function: ArithFn,
        n: String,
        m: Option<String>,
    },
    /// Exact value of a counting function or sum.
    Count {
        #[arg(value_enum)]
        which: Which,
        #[command(flatten)]
        args: CountArgs,
    },
    /// Main term of the matching asymptotic formula.
    Main {
        #[arg(value_enum)]
        which: Which,
        #[command(flatten)]
        args: CountArgs,
    },
    /// Exact counts against main terms along a grid of x values.
    Converge {
        /// Kernel primes; ignored when --n is given.
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        /// Compare L^(e)(x, n) instead of the pair density.
        #[arg(long)]
        n: Option<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exponentially coprime pairs when the prime factors are not fixed.
    DensityScan {
        /// Scan x = 10, 100, ... up to and including this value.
        #[arg(long, required_unless_present = "grid")]
        max: Option<String>,
        #[arg(long, value_delimiter = ',', conflicts_with = "max")]
        grid: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ArithFn {
    #[value(name = "tau_e")]
    TauE,
    #[value(name = "sigma_e")]
    SigmaE,
    Kernel,
    Theta,
    Phi,
    Expdivisors,
    Gcde,
    Expcoprime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    /// Integers <= x with kernel p_1...p_r.
    #[value(name = "N")]
    N,
    /// k <= x exponentially coprime to n.
    #[value(name = "L")]
    L,
    /// Exponentially coprime pairs <= x with kernel p_1...p_r.
    #[value(name = "P")]
    P,
    /// Simplex points with gcd(k_i, a_i) = 1.
    Lemma1,
    /// Sum of prod phi(k_i)/k_i over the simplex.
    Lemma2,
    /// Componentwise coprime pairs of simplex points.
    Lemma3,
    /// Sum of n^s over n <= z coprime to a.
    Eq5,
    /// Sum of phi(n) n^s over n <= z.
    Eq7,
    /// P / N^2 (count) or zeta(2)^-r (main).
    Density,
}

#[derive(Debug, Args)]
struct CountArgs {
    /// Kernel primes p_1 < ... < p_r, comma separated.
    #[arg(long, value_delimiter = ',')]
    primes: Vec<u64>,
    /// The fixed n for L.
    #[arg(long)]
    n: Option<String>,
    /// Upper bound: digits, b^e or mantissa-exponent such as 1e12.
    #[arg(short = 'x')]
    x: Option<String>,
    /// Simplex weights t_i.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    weights: Vec<f64>,
    /// Simplex bound, or the summation limit for eq5/eq7.
    #[arg(short = 'z', allow_negative_numbers = true)]
    z: Option<f64>,
    /// Coprimality moduli a_i (lemma1) or the single a (eq5).
    #[arg(short = 'a', long = "moduli", value_delimiter = ',')]
    moduli: Vec<u64>,
    /// Power s for eq5/eq7.
    #[arg(
        short = 's',
        long = "power",
        default_value_t = 0,
        allow_negative_numbers = true
    )]
    power: i32,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl OutputArgs {
    fn emit<R: TableRow>(&self, rows: &[R]) -> Result<(), CliError> {
        let format = match self.format {
            Format::Csv => TableFormat::Csv,
            Format::Json => TableFormat::Json,
        };
        let dest = self
            .out
            .clone()
            .map_or(Destination::Stdout, Destination::File);
        Ok(emit_table(rows, format, &dest)?)
    }
}

#[derive(Debug)]
enum CliError {
    /// Bad invocation: exit 2.
    Usage(String),
    /// Domain or guard violation: exit 1.
    Failure(String),
}

impl From<ecoprime_core::Error> for CliError {
    fn from(e: ecoprime_core::Error) -> Self {
        Self::Failure(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Largest accepted integer input, `2^63 - 1`.
const MAX_INPUT: u64 = i64::MAX as u64;

/// Parses a positive integer written as digits, `b^e` or `me` (e.g. `1e12`).
fn parse_int(s: &str) -> CliResult<u64> {
    let bad = || CliError::Usage(format!("'{s}' is not an integer"));
    let value: Option<u128> = if let Some((b, e)) = s.split_once('^') {
        let b: u128 = b.trim().parse().map_err(|_| bad())?;
        let e: u32 = e.trim().parse().map_err(|_| bad())?;
        b.checked_pow(e)
    } else if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m: u128 = m.trim().parse().map_err(|_| bad())?;
        let e: u32 = e.trim().parse().map_err(|_| bad())?;
        10u128.checked_pow(e).and_then(|p| p.checked_mul(m))
    } else {
        Some(s.trim().parse().map_err(|_| bad())?)
    };
    match value {
        Some(v) if v <= u128::from(MAX_INPUT) => Ok(v as u64),
        _ => Err(CliError::Failure(format!(
            "{s} is above the largest accepted input 2^63-1 = {MAX_INPUT}"
        ))),
    }
}

fn parse_positive(s: &str) -> CliResult<u64> {
    match parse_int(s)? {
        0 => Err(CliError::Usage(format!("'{s}' must be positive"))),
        v => Ok(v),
    }
}

fn factor_arg(s: &str) -> CliResult<Factorization> {
    Ok(arith::factorize(parse_positive(s)?)?)
}

fn kernel_arg(primes: &[u64]) -> CliResult<KernelSpec> {
    if primes.is_empty() {
        return Err(CliError::Usage("--primes is required".into()));
    }
    KernelSpec::new(primes.to_vec()).map_err(|e| CliError::Usage(format!("--primes: {e}")))
}

fn print<T: Display>(v: T) -> CliResult<()> {
    println!("{v}");
    Ok(())
}

fn run_arith(function: ArithFn, n: &str, m: Option<&str>) -> CliResult<()> {
    let needs_pair = matches!(function, ArithFn::Gcde | ArithFn::Expcoprime);
    match (needs_pair, m) {
        (true, None) => return Err(CliError::Usage("this function takes two arguments".into())),
        (false, Some(_)) => return Err(CliError::Usage("this function takes one argument".into())),
        _ => {}
    }
    let f = factor_arg(n)?;
    match function {
        ArithFn::TauE => print(arith::tau_e(&f)),
        ArithFn::SigmaE => print(arith::sigma_e(&f)),
        ArithFn::Kernel => print(arith::kernel(&f)),
        ArithFn::Theta => print(arith::theta(parse_positive(n)?)?),
        ArithFn::Phi => print(arith::euler_phi(parse_positive(n)?)?),
        ArithFn::Expdivisors => {
            let divs: Vec<String> = arith::exponential_divisors(&f)
                .iter()
                .map(|d| d.value().to_string())
                .collect();
            print(divs.join(" "))
        }
        ArithFn::Gcde => {
            let g = factor_arg(m.unwrap())?;
            print(arith::gcd_e(&f, &g)?.value())
        }
        ArithFn::Expcoprime => {
            let g = factor_arg(m.unwrap())?;
            print(arith::is_exp_coprime(&f, &g))
        }
    }
}

impl CountArgs {
    fn x(&self) -> CliResult<u64> {
        self.x
            .as_deref()
            .ok_or_else(|| CliError::Usage("-x is required".into()))
            .and_then(parse_int)
    }

    fn z(&self) -> CliResult<f64> {
        self.z
            .ok_or_else(|| CliError::Usage("-z is required".into()))
    }

    fn kernel(&self) -> CliResult<KernelSpec> {
        kernel_arg(&self.primes)
    }

    /// `n` for L; when --primes is also given it has to match n's prime factors.
    fn n(&self) -> CliResult<Factorization> {
        let n = self
            .n
            .as_deref()
            .ok_or_else(|| CliError::Usage("--n is required".into()))
            .and_then(factor_arg)?;
        if !self.primes.is_empty() && !n.primes().eq(self.primes.iter().copied()) {
            return Err(CliError::Usage(format!(
                "--n {n} does not have the prime factors given by --primes"
            )));
        }
        Ok(n)
    }

    fn simplex(&self) -> CliResult<SimplexConstraint> {
        if self.weights.is_empty() {
            return Err(CliError::Usage("--weights is required".into()));
        }
        SimplexConstraint::new(self.weights.clone(), self.z()?)
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    fn moduli(&self, dim: usize) -> CliResult<Vec<u64>> {
        if self.moduli.is_empty() {
            Ok(vec![1; dim])
        } else {
            Ok(self.moduli.clone())
        }
    }

    fn single_modulus(&self) -> CliResult<u64> {
        match self.moduli.as_slice() {
            [] => Ok(1),
            [a] => Ok(*a),
            _ => Err(CliError::Usage("eq5 takes a single -a value".into())),
        }
    }

    fn nonnegative_power(&self) -> CliResult<u32> {
        u32::try_from(self.power)
            .map_err(|_| CliError::Usage(format!("-s must be >= 0 here, got {}", self.power)))
    }
}

fn run_count(which: Which, args: &CountArgs) -> CliResult<()> {
    match which {
        Which::N => print(counts::count_fixed_kernel(&args.kernel()?, args.x()?)),
        Which::L => print(counts::legendre_e(args.x()?, &args.n()?)),
        Which::P => print(counts::count_exp_coprime_pairs(&args.kernel()?, args.x()?)),
        Which::Lemma1 => {
            let c = args.simplex()?;
            print(counts::lemma1_count(&c, &args.moduli(c.dim())?)?)
        }
        Which::Lemma2 => print(counts::lemma2_sum(&args.simplex()?)?),
        Which::Lemma3 => print(counts::lemma3_count(&args.simplex()?)),
        Which::Eq5 => print(counts::phi_s_sum(
            args.z()?,
            args.nonnegative_power()?,
            args.single_modulus()?,
        )?),
        Which::Eq7 => print(counts::totient_power_sum(args.z()?, args.power)?),
        Which::Density => {
            let k = args.kernel()?;
            let x = args.x()?;
            let n = counts::count_fixed_kernel(&k, x);
            if n == 0 {
                return Err(CliError::Failure(format!(
                    "no integer <= {x} has kernel {k}"
                )));
            }
            let p = counts::count_exp_coprime_pairs(&k, x);
            print(format_real(p as f64 / (n as f64 * n as f64)))
        }
    }
}

fn run_main(which: Which, args: &CountArgs) -> CliResult<()> {
    let value = match which {
        Which::N => asymptotics::cor1_main(args.x()? as f64, &args.kernel()?)?,
        Which::L => asymptotics::thm1_main(args.x()? as f64, &args.n()?)?,
        Which::P => asymptotics::thm2_main(args.x()? as f64, &args.kernel()?)?,
        Which::Lemma1 => {
            let c = args.simplex()?;
            asymptotics::lemma1_main(&c, &args.moduli(c.dim())?)?
        }
        Which::Lemma2 => asymptotics::lemma2_main(&args.simplex()?)?,
        Which::Lemma3 => asymptotics::lemma3_main(&args.simplex()?)?,
        Which::Eq5 => {
            asymptotics::eq5_main(args.z()?, args.nonnegative_power()?, args.single_modulus()?)?
        }
        Which::Eq7 => {
            if args.power < -1 {
                return Err(CliError::Usage("-s must be >= -1".into()));
            }
            asymptotics::eq7_main(args.z()?, f64::from(args.power))
        }
        Which::Density => asymptotics::density_limit(args.kernel()?.len() as u32),
    };
    print(format_real(value))
}

fn parse_grid(values: &[String]) -> CliResult<Vec<u64>> {
    values.iter().map(|s| parse_positive(s)).collect()
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Arith { function, n, m } => run_arith(function, &n, m.as_deref()),
        Command::Count { which, args } => run_count(which, &args),
        Command::Main { which, args } => run_main(which, &args),
        Command::Converge {
            primes,
            n,
            grid,
            output,
        } => {
            let grid = parse_grid(&grid)?;
            match n {
                Some(n) => {
                    let n = factor_arg(&n)?;
                    output.emit(&experiments::theorem1_convergence(&n, &grid)?)
                }
                None => {
                    let k = kernel_arg(&primes)?;
                    output.emit(&experiments::density_convergence(&k, &grid)?)
                }
            }
        }
        Command::DensityScan { max, grid, output } => {
            let grid = match max {
                Some(max) => {
                    let max = parse_positive(&max)?;
                    let mut grid: Vec<u64> = experiments::geometric_grid(10, 1, 19)
                        .into_iter()
                        .take_while(|&x| x < max)
                        .collect();
                    grid.push(max);
                    grid
                }
                None => parse_grid(&grid)?,
            };
            output.emit(&experiments::open_problem_scan(&grid)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run 'ecoprime --help' for usage");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
