//! `asympure` command-line front end.
//!
//! Exit codes: 0 success, 1 verification mismatch (or impure scan),
//! 2 usage error, 3 size cap exceeded.

mod cache;
mod output;
mod request;
mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::asymptotics::{
    asymptotic_product, classify, format_rational, purity_report, AsymptoticVector,
};
use crate::error::Error;
use crate::oracle::{
    choose_primes, oracle_series, special_fiber_operator, ContractionOperator, RankOptions,
    DEFAULT_SIZE_CAP,
};
use crate::proj_cohomology::DivisorClass;
use crate::rep_theory::{kernel_series_rep, pieri_decompose};

pub use cache::{Cache, CacheRecord, CACHE_VERSION};
pub use output::{Format, Output, Table};
pub use request::{Request, Values};
pub use verify::{run_suite, CheckOutcome, Suite};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_SIZE_CAP: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "asympure",
    version,
    about = "Cohomology and asymptotic purity on P^n x P^n"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t, global = true)]
    pub format: Format,
    /// JSON-lines results cache.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Largest basis dimension the oracle will build.
    #[arg(long = "size-cap", default_value_t = DEFAULT_SIZE_CAP, global = true,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub size_cap: u64,
    /// Seed for the oracle's prime selection.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cohomology of O(d) on P^n.
    Bott {
        #[arg(long, value_parser = positive())]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Cohomology of O(a1, a2) on P^n x P^n.
    Product(ProductArgs),
    /// Pieri decomposition of Sym^A (x) Sym^B.
    Decompose {
        #[arg(long, value_parser = positive())]
        n: u32,
        #[arg(long = "A")]
        a: u64,
        #[arg(long = "B")]
        b: u64,
    },
    /// Representation-theoretic kernel/cokernel of multiplication by f.
    Predict(MapArgs),
    /// Brute-force rank of a contraction operator.
    Oracle {
        #[command(flatten)]
        map: OptionalMapArgs,
        #[command(flatten)]
        operator: OperatorArgs,
    },
    /// Kernel/cokernel along m for the special-fiber map.
    Series {
        #[command(flatten)]
        fiber: FiberArgs,
        /// Values of m, e.g. 3..10.
        #[arg(long, value_parser = parse_range)]
        m: RangeInclusive<i64>,
        #[arg(long, value_enum, default_value_t = Engine::Rep)]
        engine: Engine,
        #[command(flatten)]
        operator: OperatorArgs,
    },
    /// Asymptotic cohomology vector of a divisor.
    Asymptotics {
        #[command(flatten)]
        fiber: FiberArgs,
        #[arg(long, value_enum, default_value_t = Space::Fiber)]
        space: Space,
    },
    /// Purity verdicts over a grid of divisors a1 H1 - a2 H2.
    Scan {
        #[arg(long, value_parser = positive())]
        n: u32,
        #[arg(long, value_parser = positive())]
        k: u32,
        #[arg(long, value_parser = parse_range)]
        a1: RangeInclusive<i64>,
        #[arg(long, value_parser = parse_range)]
        a2: RangeInclusive<i64>,
        /// Write the CSV grid here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the two engines and the closed forms.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::Small)]
        suite: Suite,
    },
}

#[derive(Debug, Args)]
pub struct ProductArgs {
    #[arg(long, value_parser = positive())]
    pub n: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub a1: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub a2: i64,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[arg(long, value_parser = positive())]
    pub n: u32,
    #[arg(long, value_parser = positive())]
    pub k: u32,
    #[arg(long = "A")]
    pub a: u64,
    #[arg(long = "B", allow_hyphen_values = true)]
    pub b: i64,
}

#[derive(Debug, Args)]
pub struct OptionalMapArgs {
    #[arg(long, value_parser = positive())]
    pub n: Option<u32>,
    #[arg(long, value_parser = positive())]
    pub k: Option<u32>,
    #[arg(long = "A")]
    pub a: u64,
    #[arg(long = "B", allow_hyphen_values = true)]
    pub b: i64,
}

#[derive(Debug, Args)]
pub struct FiberArgs {
    #[arg(long, value_parser = positive())]
    pub n: u32,
    #[arg(long, value_parser = positive())]
    pub k: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub a1: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub a2: i64,
}

#[derive(Debug, Args)]
pub struct OperatorArgs {
    /// Built-in operator.
    #[arg(long, value_enum, conflicts_with = "operator_file")]
    pub operator: Option<BuiltinOperator>,
    /// JSON operator file: {"n", "k", "terms": [{"coeff", "alpha", "beta"}]}.
    #[arg(long = "operator-file")]
    pub operator_file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuiltinOperator {
    /// (sum_i x_i (x) d_i)^k
    Special,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Rep,
    Oracle,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Space {
    /// Special fiber, D = a1 H1 - a2 H2 with a1, a2 >= 0.
    Fiber,
    /// P^n x P^n, D = a1 H1 + a2 H2.
    Product,
}

fn positive() -> clap::builder::RangedU64ValueParser<u32> {
    clap::builder::RangedU64ValueParser::<u32>::new().range(1..)
}

/// Parses `a..b`, `a..=b` (both inclusive) or a single integer.
pub fn parse_range(text: &str) -> Result<RangeInclusive<i64>, String> {
    let parse = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|e| format!("invalid integer {s:?}: {e}"))
    };
    let range = match text.split_once("..") {
        Some((lo, hi)) => parse(lo)?..=parse(hi.strip_prefix('=').unwrap_or(hi))?,
        None => {
            let v = parse(text)?;
            v..=v
        }
    };
    if range.is_empty() {
        return Err(format!("empty range {text:?}"));
    }
    Ok(range)
}

/// Resolved global options.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub format: Format,
    pub cache_path: Option<PathBuf>,
    pub size_cap: u64,
    pub seed: u64,
}

/// Outcome of a subcommand: its output plus the exit code to report.
struct Completed {
    output: Output,
    code: u8,
}

impl From<Output> for Completed {
    fn from(output: Output) -> Self {
        Self {
            output,
            code: EXIT_OK,
        }
    }
}

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::SizeCap { .. } => EXIT_SIZE_CAP,
        Error::InvalidArgument(_)
        | Error::InvalidOperator(_)
        | Error::EmptyRange
        | Error::Io { .. }
        | Error::Json { .. } => EXIT_USAGE,
        Error::NotStabilized { .. }
        | Error::InsufficientPoints { .. }
        | Error::NonConsecutive(_) => EXIT_MISMATCH,
    }
}

/// Parses `args` (including the program name) and runs one subcommand.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return u8::try_from(code).unwrap_or(EXIT_USAGE);
        }
    };
    let config = RunConfig {
        format: cli.format,
        cache_path: cli.cache.clone(),
        size_cap: cli.size_cap,
        seed: cli.seed,
    };
    match execute(cli.command, &config) {
        Ok(done) => {
            if let Err(e) = done.output.render(config.format, &mut *stdout) {
                let _ = writeln!(stderr, "error: writing output: {e}");
                return EXIT_USAGE;
            }
            done.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn open_cache(config: &RunConfig) -> crate::Result<Option<Cache>> {
    config.cache_path.as_deref().map(Cache::open).transpose()
}

/// Computes `request`, consulting and filling the cache when one is set.
fn cached(
    config: &RunConfig,
    cache: &mut Option<Cache>,
    request: &Request,
) -> crate::Result<Values> {
    let compute = || request.compute(config.size_cap, config.seed);
    match cache {
        Some(c) => c.get_or_compute(request, compute),
        None => compute(),
    }
}

fn resolve_operator(
    args: &OperatorArgs,
    n: Option<u32>,
    k: Option<u32>,
) -> crate::Result<ContractionOperator> {
    match &args.operator_file {
        Some(path) => {
            let op = ContractionOperator::from_file(path)?;
            for (flag, given, actual) in [("n", n, op.n), ("k", k, op.k)] {
                if given.is_some_and(|g| g != actual) {
                    return Err(Error::InvalidArgument(format!(
                        "--{flag} {} does not match the operator file ({actual})",
                        given.unwrap()
                    )));
                }
            }
            Ok(op)
        }
        None => match (n, k) {
            (Some(n), Some(k)) => Ok(special_fiber_operator(n, k)),
            _ => Err(Error::InvalidArgument(
                "--n and --k are required with the special operator".into(),
            )),
        },
    }
}

fn int(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

fn require_k(k: Option<u32>) -> crate::Result<u32> {
    k.ok_or_else(|| Error::InvalidArgument("--k is required".into()))
}

fn vector_fields(v: &AsymptoticVector) -> Vec<(String, Value)> {
    vec![
        (
            "h_hat".into(),
            Value::Array(v.values.iter().map(|x| format_rational(x).into()).collect()),
        ),
        ("dim".into(), v.dim.into()),
        ("verdict".into(), v.purity.to_string().into()),
    ]
}

fn execute(command: Command, config: &RunConfig) -> crate::Result<Completed> {
    let seed = config.seed;
    let mut cache = open_cache(config)?;
    let done = match command {
        Command::Bott { n, d } => {
            let values = cached(config, &mut cache, &Request::Bott { n, d })?;
            Output::new("bott", seed)
                .field("n", n)
                .field("d", int(d))
                .fields(values)
                .into()
        }
        Command::Product(ProductArgs { n, a1, a2 }) => {
            let values = cached(config, &mut cache, &Request::Product { n, a1, a2 })?;
            Output::new("product", seed)
                .field("n", n)
                .field("a1", int(a1))
                .field("a2", int(a2))
                .fields(values)
                .into()
        }
        Command::Decompose { n, a, b } => {
            let d = pieri_decompose(n, a, b);
            let mut table = Table::new(["i", "lambda1", "lambda2", "c1", "c2", "dimension"]);
            for (i, l) in d.components.iter().enumerate() {
                let (c1, c2) = l.fundamental();
                table.push(vec![
                    i.to_string(),
                    l.lambda1.to_string(),
                    l.lambda2.to_string(),
                    c1.to_string(),
                    c2.to_string(),
                    l.dimension().to_string(),
                ]);
            }
            Output::new("decompose", seed)
                .field("n", n)
                .field("A", int(a))
                .field("B", int(b))
                .field("total_dimension", int(d.total_dimension()))
                .field("expected_dimension", int(d.expected_dimension()))
                .with_table(table)
                .into()
        }
        Command::Predict(MapArgs { n, k, a, b }) => {
            let values = cached(config, &mut cache, &Request::Predict { n, k, a, b })?;
            Output::new("predict", seed)
                .field("n", n)
                .field("k", k)
                .field("A", int(a))
                .field("B", int(b))
                .fields(values)
                .into()
        }
        Command::Oracle { map, operator } => {
            let op = resolve_operator(&operator, map.n, map.k)?;
            if map.b < 0 {
                return Err(Error::InvalidArgument(format!("B = {} is negative", map.b)));
            }
            let request = Request::Oracle {
                a: map.a,
                b: map.b,
                operator: op.clone(),
            };
            let values = cached(config, &mut cache, &request)?;
            let primes = choose_primes(seed);
            Output::new("oracle", seed)
                .field("n", op.n)
                .field("k", op.k)
                .field("A", int(map.a))
                .field("B", int(map.b))
                .field("operator", op.canonical_string())
                .field("primes", Value::Array(primes.iter().map(int).collect()))
                .fields(values)
                .into()
        }
        Command::Series {
            fiber,
            m,
            engine,
            operator,
        } => series(config, fiber, m, engine, &operator)?,
        Command::Asymptotics { fiber, space } => match space {
            Space::Product => {
                let d = DivisorClass::new(fiber.a1, fiber.a2);
                let v = asymptotic_product(fiber.n, d);
                Output::new("asymptotics", seed)
                    .field("space", "product")
                    .field("n", fiber.n)
                    .field("a1", int(fiber.a1))
                    .field("a2", int(fiber.a2))
                    .fields(vector_fields(&v))
                    .into()
            }
            Space::Fiber => {
                let k = require_k(fiber.k)?;
                let v =
                    crate::asymptotics::asymptotic_special_fiber(fiber.n, k, fiber.a1, fiber.a2)?;
                let case = classify(fiber.n, DivisorClass::new(fiber.a1, -fiber.a2));
                Output::new("asymptotics", seed)
                    .field("space", "fiber")
                    .field("n", fiber.n)
                    .field("k", k)
                    .field("a1", int(fiber.a1))
                    .field("a2", int(fiber.a2))
                    .field("case", case.kind.to_string())
                    .fields(vector_fields(&v))
                    .into()
            }
        },
        Command::Scan { n, k, a1, a2, out } => scan(config, n, k, a1, a2, out)?,
        Command::Verify { suite } => {
            let outcomes = run_suite(suite, config.seed, config.size_cap, cache.as_ref());
            let mut table = Table::new(["check", "cases", "failures", "status"]);
            let mut report = Vec::new();
            for o in &outcomes {
                table.push(vec![
                    o.name.clone(),
                    o.cases.to_string(),
                    o.failures.len().to_string(),
                    if o.passed() { "pass" } else { "FAIL" }.into(),
                ]);
                report.extend(
                    o.failures
                        .iter()
                        .map(|f| Value::String(format!("{}: {f}", o.name))),
                );
            }
            let passed = outcomes.iter().all(CheckOutcome::passed);
            Completed {
                output: Output::new("verify", seed)
                    .field("suite", suite.to_possible_value().unwrap().get_name())
                    .field("passed", passed)
                    .field("mismatches", Value::Array(report))
                    .with_table(table),
                code: if passed { EXIT_OK } else { EXIT_MISMATCH },
            }
        }
    };
    Ok(done)
}

fn series(
    config: &RunConfig,
    fiber: FiberArgs,
    m: RangeInclusive<i64>,
    engine: Engine,
    operator: &OperatorArgs,
) -> crate::Result<Completed> {
    let FiberArgs { n, k, a1, a2 } = fiber;
    let mut fields = vec![
        ("n".to_string(), Value::from(n)),
        ("a1".to_string(), int(a1)),
        ("a2".to_string(), int(a2)),
        (
            "engine".to_string(),
            Value::from(engine.to_possible_value().unwrap().get_name()),
        ),
    ];
    let rep = match engine {
        Engine::Rep | Engine::Both => {
            let k = require_k(k)?;
            Some(kernel_series_rep(n, k, a1, a2, m.clone())?)
        }
        Engine::Oracle => None,
    };
    let oracle = match engine {
        Engine::Oracle | Engine::Both => {
            let op = resolve_operator(operator, Some(n), k)?;
            fields.push(("operator".into(), op.canonical_string().into()));
            let options = RankOptions {
                seed: config.seed,
                ..RankOptions::default()
            };
            Some(oracle_series(&op, a1, a2, m, config.size_cap, options)?)
        }
        Engine::Rep => None,
    };
    let k_used = k.unwrap_or(1);
    fields.insert(1, ("k".into(), k_used.into()));
    let exps = |m: i64| {
        let k = i64::from(k_used);
        (m * a1 - k, m * a2 + k - (i64::from(n) + 1))
    };

    let mut code = EXIT_OK;
    let table = match (rep, oracle) {
        (Some(rep), None) => {
            let mut t = Table::new(["m", "A", "B", "kernel_dim", "cokernel_dim"]);
            for p in rep {
                let (a, b) = exps(p.m);
                t.push(vec![
                    p.m.to_string(),
                    a.to_string(),
                    b.to_string(),
                    p.kernel_dim.to_string(),
                    p.cokernel_dim.to_string(),
                ]);
            }
            t
        }
        (None, Some(oracle)) => {
            let mut t = Table::new([
                "m",
                "A",
                "B",
                "rank",
                "kernel_dim",
                "cokernel_dim",
                "certified",
            ]);
            for (m, r) in oracle {
                let (a, b) = exps(m);
                t.push(vec![
                    m.to_string(),
                    a.to_string(),
                    b.to_string(),
                    r.rank.to_string(),
                    r.kernel_dim.to_string(),
                    r.cokernel_dim.to_string(),
                    r.certified.to_string(),
                ]);
            }
            t
        }
        (Some(rep), Some(oracle)) => {
            let mut t = Table::new([
                "m",
                "A",
                "B",
                "rep_kernel",
                "rep_cokernel",
                "oracle_kernel",
                "oracle_cokernel",
                "agree",
            ]);
            for p in rep {
                let Some((_, r)) = oracle.iter().find(|(m, _)| *m == p.m) else {
                    continue;
                };
                let agree = r.kernel_dim == p.kernel_dim && r.cokernel_dim == p.cokernel_dim;
                if !agree {
                    code = EXIT_MISMATCH;
                }
                let (a, b) = exps(p.m);
                t.push(vec![
                    p.m.to_string(),
                    a.to_string(),
                    b.to_string(),
                    p.kernel_dim.to_string(),
                    p.cokernel_dim.to_string(),
                    r.kernel_dim.to_string(),
                    r.cokernel_dim.to_string(),
                    agree.to_string(),
                ]);
            }
            t
        }
        (None, None) => unreachable!("at least one engine runs"),
    };
    Ok(Completed {
        output: Output::new("series", config.seed)
            .fields(fields)
            .with_table(table),
        code,
    })
}

/// Column names of the scan grid for `P^n x P^n`.
pub fn scan_columns(n: u32) -> Vec<String> {
    let mut cols: Vec<String> = ["n", "k", "a1", "a2", "case"].map(String::from).to_vec();
    cols.extend((0..2 * n).map(|i| format!("h_hat_{i}")));
    cols.push("verdict".into());
    cols
}

fn scan(
    config: &RunConfig,
    n: u32,
    k: u32,
    a1: RangeInclusive<i64>,
    a2: RangeInclusive<i64>,
    out: Option<PathBuf>,
) -> crate::Result<Completed> {
    if *a1.start() < 0 || *a2.start() < 0 {
        return Err(Error::InvalidArgument(
            "scan ranges must be nonnegative (D = a1 H1 - a2 H2)".into(),
        ));
    }
    let grid: Vec<(i64, i64)> = a1.flat_map(|x| a2.clone().map(move |y| (x, y))).collect();
    let report = purity_report(n, k, &grid)?;
    let mut table = Table::new(scan_columns(n));
    for e in &report.entries {
        let mut row = vec![
            n.to_string(),
            k.to_string(),
            e.divisor.a1.to_string(),
            (-e.divisor.a2).to_string(),
            e.case.kind.to_string(),
        ];
        row.extend(e.vector.values.iter().map(format_rational));
        row.push(e.vector.purity.to_string());
        table.push(row);
    }
    let impure: Vec<Value> = report
        .impure()
        .map(|e| format!("{}", e.divisor).into())
        .collect();
    let code = if impure.is_empty() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    };
    let mut output = Output::new("scan", config.seed)
        .field("n", n)
        .field("k", k)
        .field("rows", report.entries.len())
        .field("all_pure", impure.is_empty())
        .field("impure", Value::Array(impure));
    match out {
        Some(path) => {
            let file = std::fs::File::create(&path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            table.write_csv(file).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            output = output.field("out", path.display().to_string());
        }
        None => output = output.with_table(table),
    }
    Ok(Completed { output, code })
}
