use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use klein_hasse::arith::{factorize_cached, is_prime_u64, FactorCache};
use klein_hasse::certify::{certify, emit, local_report_json, validate, CertStatus};
use klein_hasse::config::{Config, OutputFormat};
use klein_hasse::cubic::{classify_case, MonicCubic};
use klein_hasse::localsolve::{count_points_fp, local_report, LocalOptions, LocalStatus};
use klein_hasse::quartic::{twist_from_cubic, QuarticForm};
use klein_hasse::search::search;
use klein_hasse::tracecheck::trace_sweep;
use klein_hasse::Error;

const EXIT_OK: u8 = 0;
const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "klein-hasse",
    version,
    about = "Twists of the Klein quartic and the Hasse principle"
)]
struct Cli {
    /// Configuration file (`key = value` lines); flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Maximal depth of p-adic lifting trees.
    #[arg(long, global = true)]
    depth_cap: Option<u32>,
    /// Height bound of the rational point search.
    #[arg(long, global = true)]
    height_bound: Option<u64>,
    /// Primes below this bound separate splitting fields.
    #[arg(long, global = true)]
    prime_bound: Option<u64>,
    /// Pollard-rho budget in gcd batches.
    #[arg(long, global = true)]
    factor_budget: Option<u64>,
    /// Factorization cache file.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Reference cubic "A B C" for the sextic comparison, or `none`.
    #[arg(long, global = true)]
    reference_sextic: Option<String>,
    /// both | raw | field_of_definition
    #[arg(long, global = true)]
    condition_v_reading: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CubicArgs {
    #[arg(short = 'B', allow_negative_numbers = true)]
    b: BigInt,
    #[arg(short = 'C', allow_negative_numbers = true)]
    c: BigInt,
}

impl CubicArgs {
    fn cubic(&self) -> MonicCubic {
        MonicCubic::depressed(self.b.clone(), self.c.clone())
    }
}

#[derive(Args, Debug, Clone)]
struct CurveArgs {
    #[arg(
        short = 'B',
        allow_negative_numbers = true,
        requires = "c",
        conflicts_with = "curve"
    )]
    b: Option<BigInt>,
    #[arg(short = 'C', allow_negative_numbers = true, requires = "b")]
    c: Option<BigInt>,
    /// A named curve instead of a twist.
    #[arg(long, value_enum)]
    curve: Option<NamedCurve>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum NamedCurve {
    Klein,
    CZero,
}

impl CurveArgs {
    fn form(&self) -> Result<QuarticForm, Error> {
        match (&self.curve, &self.b, &self.c) {
            (Some(NamedCurve::Klein), _, _) => Ok(QuarticForm::klein()),
            (Some(NamedCurve::CZero), _, _) => Ok(QuarticForm::c_zero()),
            (None, Some(b), Some(c)) => {
                twist_from_cubic(&MonicCubic::depressed(b.clone(), c.clone()))
            }
            _ => Err(Error::InvalidArgument("give -B and -C, or --curve".into())),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the twisted quartic of x^3 + Bx + C.
    Twist(CubicArgs),
    /// Count points of the quartic over F_p.
    Count {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(short = 'p')]
        p: u64,
    },
    /// Local solvability at every place.
    Local(CubicArgs),
    /// Frobenius traces against the allowed trace sets.
    Trace {
        #[command(flatten)]
        curve: CurveArgs,
        /// Primes below this bound.
        #[arg(long, default_value_t = 50)]
        below: u64,
    },
    /// Search the family N = 3^(3+6c') + 1 over c' in [from, to).
    Search {
        #[arg(long, default_value_t = 0)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Alias of --factor-budget.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Run the full pipeline and emit a certificate.
    Certify(CubicArgs),
    /// Factor an integer.
    Factor { n: BigUint },
}

struct Outcome {
    code: u8,
    stdout: String,
    stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn with_code(code: u8, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(e: &Error) -> Self {
        let code = match e {
            Error::Internal(_) => EXIT_FAILED,
            _ => EXIT_USAGE,
        };
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

fn build_config(cli: &Cli) -> Result<Config, Error> {
    let mut config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let mut set = |key: &str, value: Option<String>| match value {
        Some(v) => config
            .set(key, &v)
            .map_err(|e| Error::InvalidArgument(format!("--{}: {e}", key.replace('_', "-")))),
        None => Ok(()),
    };
    set("depth_cap", cli.depth_cap.map(|v| v.to_string()))?;
    set("height_bound", cli.height_bound.map(|v| v.to_string()))?;
    set("prime_bound", cli.prime_bound.map(|v| v.to_string()))?;
    set("factor_budget", cli.factor_budget.map(|v| v.to_string()))?;
    set(
        "cache_path",
        cli.cache.as_ref().map(|p| p.display().to_string()),
    )?;
    set("reference_sextic_cubic", cli.reference_sextic.clone())?;
    set("condition_v_reading", cli.condition_v_reading.clone())?;
    set("thread_count", cli.threads.map(|v| v.to_string()))?;
    if cli.json {
        config.output_format = OutputFormat::Json;
    }
    Ok(config)
}

fn render(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value serializes");
    s.push('\n');
    s
}

fn open_cache(config: &Config) -> Result<Option<FactorCache>, Error> {
    config
        .cache_path
        .as_ref()
        .map(|p| {
            FactorCache::open(p)
                .map_err(|e| Error::InvalidArgument(format!("cache {}: {e}", p.display())))
        })
        .transpose()
}

fn cmd_twist(args: &CubicArgs, json: bool) -> Result<Outcome, Error> {
    let f = args.cubic();
    let case = classify_case(&f)?;
    let form = twist_from_cubic(&f)?;
    if json {
        let coeffs: Vec<String> = form.coefficients().iter().map(|c| c.to_string()).collect();
        return Ok(Outcome::ok(render(&json!({
            "cubic": {"A": f.a.to_string(), "B": f.b.to_string(), "C": f.c.to_string()},
            "case": {"tag": case.tag.as_str(), "q": case.q.map(|q| q.to_string()), "delta": case.delta.to_string()},
            "quartic": coeffs,
        }))));
    }
    Ok(Outcome::ok(format!("{}\n", form.to_text())))
}

fn cmd_count(curve: &CurveArgs, p: u64, json: bool) -> Result<Outcome, Error> {
    if !is_prime_u64(p) {
        return Err(Error::InvalidArgument(format!("-p: {p} is not prime")));
    }
    let form = curve.form()?;
    let n = count_points_fp(&form, p);
    Ok(Outcome::ok(if json {
        render(&json!({"p": p, "count": n}))
    } else {
        format!("{n}\n")
    }))
}

fn cmd_local(args: &CubicArgs, config: &Config) -> Result<Outcome, Error> {
    let options = LocalOptions {
        depth_cap: config.depth_cap,
        factor_budget: config.factor_budget,
    };
    let report = local_report(&args.cubic(), &options)?;
    let undecided = report
        .values()
        .any(|v| matches!(v.status, LocalStatus::Inconclusive { .. }));
    let out = match config.output_format {
        OutputFormat::Json => render(&local_report_json(&report)),
        OutputFormat::Text => report.values().map(|v| format!("{v}\n")).collect(),
    };
    Ok(Outcome::with_code(
        if undecided { EXIT_UNKNOWN } else { EXIT_OK },
        out,
    ))
}

fn cmd_trace(curve: &CurveArgs, below: u64, json: bool) -> Result<Outcome, Error> {
    let rows = trace_sweep(&curve.form()?, below)?;
    if json {
        return Ok(Outcome::ok(render(
            &serde_json::to_value(&rows).expect("trace rows serialize"),
        )));
    }
    let mut out = String::from("p\tp mod 7\tt\ts\tallowed\ttrace\tmember\n");
    let opt = |v: Option<i64>| v.map_or("-".to_string(), |v| v.to_string());
    for r in &rows {
        let allowed: Vec<String> = r.set.allowed.iter().map(i64::to_string).collect();
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{{{}}}\t{}\t{}",
            r.p,
            r.set.residue_class,
            opt(r.set.t),
            opt(r.set.s),
            allowed.join(", "),
            r.trace,
            if r.member {
                format!("yes ({})", r.matched.join(", "))
            } else {
                "no".into()
            },
        );
    }
    Ok(Outcome::ok(out))
}

fn cmd_search(from: u64, to: u64, config: &Config) -> Result<Outcome, Error> {
    if from >= to {
        return Err(Error::InvalidArgument(format!(
            "--from {from} must be below --to {to}"
        )));
    }
    let cache = open_cache(config)?;
    let outcome = search(from..to, config.factor_budget, cache.as_ref());
    let out = match config.output_format {
        OutputFormat::Json => {
            let hits: Vec<Value> = outcome.hits.iter().map(|h| h.to_json()).collect();
            let skipped: Vec<Value> = outcome
                .skipped
                .iter()
                .map(|s| json!({"c_prime": s.c_prime, "reason": s.reason.to_string()}))
                .collect();
            render(&json!({"hits": hits, "skipped": skipped}))
        }
        OutputFormat::Text => {
            let mut out = String::new();
            for h in &outcome.hits {
                let _ = writeln!(
                    out,
                    "hit  c'={}  N={}  B={}  C=±{}",
                    h.c_prime, h.factorization, h.b, h.c_abs
                );
            }
            for s in &outcome.skipped {
                let _ = writeln!(out, "skip c'={}  {}", s.c_prime, s.reason);
            }
            out
        }
    };
    Ok(Outcome::ok(out))
}

fn cmd_certify(args: &CubicArgs, config: &Config) -> Result<Outcome, Error> {
    let cert = certify(&args.cubic(), config);
    validate(&cert)?;
    let code = match cert.status {
        CertStatus::CounterexampleCertified => EXIT_OK,
        CertStatus::Failed(_) => EXIT_FAILED,
        CertStatus::Unknown(_) => EXIT_UNKNOWN,
    };
    Ok(Outcome::with_code(code, emit(&cert, config.output_format)))
}

fn cmd_factor(n: &BigUint, config: &Config) -> Result<Outcome, Error> {
    let cache = open_cache(config)?;
    let fact = factorize_cached(n, config.factor_budget, cache.as_ref());
    let code = if fact.is_complete() {
        EXIT_OK
    } else {
        EXIT_UNKNOWN
    };
    let out = match config.output_format {
        OutputFormat::Json => {
            let factors: Vec<Value> = fact
                .factors
                .iter()
                .map(|(p, e)| json!([p.to_string(), e]))
                .collect();
            render(&json!({
                "n": n.to_string(),
                "factors": factors,
                "cofactor": fact.cofactor.to_string(),
                "complete": fact.is_complete(),
            }))
        }
        OutputFormat::Text => format!("{n} = {fact}\n"),
    };
    Ok(Outcome::with_code(code, out))
}

fn dispatch(cli: &Cli) -> Result<Outcome, Error> {
    let mut config = build_config(cli)?;
    if let Command::Search {
        budget: Some(b), ..
    } = &cli.command
    {
        config.set("factor_budget", &b.to_string())?;
    }
    let json = config.output_format == OutputFormat::Json;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.thread_count.unwrap_or(0))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    pool.install(|| match &cli.command {
        Command::Twist(args) => cmd_twist(args, json),
        Command::Count { curve, p } => cmd_count(curve, *p, json),
        Command::Local(args) => cmd_local(args, &config),
        Command::Trace { curve, below } => cmd_trace(curve, *below, json),
        Command::Search { from, to, .. } => cmd_search(*from, *to, &config),
        Command::Certify(args) => cmd_certify(args, &config),
        Command::Factor { n } => cmd_factor(n, &config),
    })
}

fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(text)
            };
        }
    };
    dispatch(&cli).unwrap_or_else(|e| Outcome::error(&e))
}

fn main() -> ExitCode {
    let out = run(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code)
}
