//! Command-line front end.
//!
//! Exit codes: 0 when everything passes, 1 on any failure or disagreement
//! between evaluators, 2 on usage or validation errors. Machine-readable
//! output is JSON lines on stdout; diagnostics go to stderr.

use std::ffi::OsString;
use std::fmt;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use crate::arith;
use crate::congruences::{self, CheckError, CheckReport, Claim, Params, SkipPolicy, Summary, SweepError, SweepGrid};
use crate::exact_eval::{self, EvalError, SumSpec};
use crate::galois_ring::GrContext;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Longest span a single `lo..hi` range may expand to.
const MAX_SPAN: i128 = 1 << 20;

#[derive(Debug, Parser)]
#[command(name = "binsum", version, about = "Binomial coefficient sums modulo prime powers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate S(a, d, r), exactly or modulo p^(k+1).
    Eval(EvalArgs),
    /// Run one congruence check.
    Check(CheckArgs),
    /// Run a congruence check over a parameter grid.
    Sweep(SweepArgs),
    /// Time the evaluators and verify that they agree.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Polypow,
    Multisection,
    Reduced,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::Polypow => "polypow",
            Method::Multisection => "multisection",
            Method::Reduced => "reduced",
        })
    }
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    a: u64,
    #[arg(long)]
    d: u64,
    #[arg(long, allow_hyphen_values = true)]
    r: i64,
    /// Prime p; the residue is taken modulo p^(k+1).
    #[arg(long = "mod-p")]
    mod_p: Option<u64>,
    #[arg(long, requires = "mod_p")]
    k: Option<u32>,
    /// Defaults to brute for exact values and polypow for residues.
    #[arg(long, value_enum)]
    method: Option<Method>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    claim: String,
    #[arg(long)]
    p: Option<i64>,
    #[arg(long)]
    q: Option<i64>,
    #[arg(long)]
    d: Option<i64>,
    #[arg(long)]
    a: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<i64>,
    #[arg(long)]
    k: Option<i64>,
    #[arg(long)]
    h: Option<i64>,
    #[arg(long)]
    s: Option<i64>,
    #[arg(long)]
    t: Option<i64>,
    #[arg(long)]
    k1: Option<i64>,
    #[arg(long)]
    k2: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OnViolation {
    Skip,
    Error,
}

#[derive(Debug, Args)]
struct SweepArgs {
    claim: String,
    #[arg(long, value_parser = parse_primes)]
    p: Option<Axis<u64>>,
    #[arg(long, value_parser = parse_prime_powers)]
    q: Option<Axis<u64>>,
    #[arg(long, value_parser = parse_u64s)]
    d: Option<Axis<u64>>,
    #[arg(long, value_parser = parse_u32s)]
    k: Option<Axis<u32>>,
    #[arg(long, value_parser = parse_u32s)]
    h: Option<Axis<u32>>,
    #[arg(long, value_parser = parse_u32s)]
    t: Option<Axis<u32>>,
    #[arg(long, value_parser = parse_i64s, allow_hyphen_values = true)]
    r: Option<Axis<i64>>,
    #[arg(long, value_parser = parse_u64s)]
    s: Option<Axis<u64>>,
    #[arg(long, value_parser = parse_u64s)]
    a: Option<Axis<u64>>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Also write the output to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OnViolation::Skip)]
    on_violation: OnViolation,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "polypow,reduced")]
    methods: Vec<Method>,
    /// Comma list of exponents; `10^18` notation is accepted.
    #[arg(long, value_parser = parse_exponent, value_delimiter = ',', default_value = "1000")]
    a: Vec<u64>,
    #[arg(long)]
    d: u64,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 0)]
    k: u32,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    /// Largest a evaluated by the brute-force method.
    #[arg(long, default_value_t = 1_000_000)]
    brute_cutoff: u64,
}

/// Values of one grid axis, as parsed from the range grammar.
#[derive(Debug, Clone)]
struct Axis<T>(Vec<T>);

fn parse_span(text: &str) -> Result<Vec<i128>, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        if part.is_empty() {
            return Err(format!("empty item in `{text}`"));
        }
        match part.split_once("..") {
            Some((lo, hi)) => {
                let lo: i128 = lo.trim().parse().map_err(|_| format!("bad range start in `{part}`"))?;
                let hi: i128 = hi.trim().parse().map_err(|_| format!("bad range end in `{part}`"))?;
                if lo > hi {
                    return Err(format!("empty range `{part}`"));
                }
                if hi - lo >= MAX_SPAN {
                    return Err(format!("range `{part}` is too long"));
                }
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().map_err(|_| format!("bad value `{part}`"))?),
        }
    }
    Ok(out)
}

fn parse_typed<T: TryFrom<i128>>(text: &str) -> Result<Axis<T>, String> {
    parse_span(text)?
        .into_iter()
        .map(|v| T::try_from(v).map_err(|_| format!("value {v} out of range")))
        .collect::<Result<_, _>>()
        .map(Axis)
}

fn parse_u64s(text: &str) -> Result<Axis<u64>, String> {
    parse_typed(text)
}

fn parse_u32s(text: &str) -> Result<Axis<u32>, String> {
    parse_typed(text)
}

fn parse_i64s(text: &str) -> Result<Axis<i64>, String> {
    parse_typed(text)
}

fn parse_primes(text: &str) -> Result<Axis<u64>, String> {
    let values: Axis<u64> = parse_typed(text)?;
    match values.0.iter().find(|&&p| !arith::is_prime(p)) {
        Some(p) => Err(format!("p must be prime (got {p})")),
        None => Ok(values),
    }
}

fn parse_prime_powers(text: &str) -> Result<Axis<u64>, String> {
    let values: Axis<u64> = parse_typed(text)?;
    match values.0.iter().find(|&&q| arith::prime_power(q).is_none()) {
        Some(q) => Err(format!("q must be a prime power (got {q})")),
        None => Ok(values),
    }
}

/// `n` or `b^e`.
fn parse_exponent(text: &str) -> Result<u64, String> {
    let text = text.trim();
    match text.split_once('^') {
        Some((b, e)) => {
            let b: u64 = b.parse().map_err(|_| format!("bad base in `{text}`"))?;
            let e: u32 = e.parse().map_err(|_| format!("bad exponent in `{text}`"))?;
            b.checked_pow(e).ok_or_else(|| format!("`{text}` overflows 64 bits"))
        }
        None => text.parse().map_err(|_| format!("bad value `{text}`")),
    }
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum Record<'a> {
    Header {
        version: &'static str,
        command: &'a [String],
    },
    Report(&'a CheckReport),
    Residues(&'a ResidueRecord),
    Timing(&'a TimingRecord),
    Summary(Summary),
}

#[derive(Serialize)]
struct ResidueRecord {
    a: u64,
    d: u64,
    p: u64,
    k: u32,
    modulus: String,
    values: Vec<String>,
    methods: Vec<String>,
    agree: bool,
}

#[derive(Serialize)]
struct TimingRecord {
    method: String,
    a: u64,
    d: u64,
    p: u64,
    k: u32,
    reps: usize,
    median_ns: u128,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn fail(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_FAIL,
            message: message.into(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::fail(format!("write error: {e}"))
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Internal(_) => Failure::fail(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<CheckError> for Failure {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::InexactDivision { .. } | CheckError::CrossCheck(_) => Failure::fail(e.to_string()),
            CheckError::Eval(EvalError::Internal(_)) => Failure::fail(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Malformed(m) => Failure::usage(m),
            SweepError::Check { claim, params, source } => {
                let mut f = Failure::from(source);
                f.message = format!("{claim} at {params:?}: {}", f.message);
                f
            }
        }
    }
}

fn write_record(out: &mut dyn Write, record: &Record<'_>) -> io::Result<()> {
    serde_json::to_writer(&mut *out, record)?;
    out.write_all(b"\n")
}

fn header(out: &mut dyn Write, command: &[String]) -> io::Result<()> {
    write_record(
        out,
        &Record::Header {
            version: env!("CARGO_PKG_VERSION"),
            command,
        },
    )
}

/// Parses `args` (program name first) and runs the selected subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return e.exit_code();
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let result = match cli.command {
        Command::Eval(a) => cmd_eval(&a, out),
        Command::Check(a) => cmd_check(&a, &echo, out),
        Command::Sweep(a) => cmd_sweep(&a, &echo, out),
        Command::Bench(a) => cmd_bench(&a, &echo, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn eval_modular(method: Method, spec: &SumSpec, p: u64, k: u32) -> Result<BigUint, Failure> {
    let (a, d, r) = (spec.a(), spec.d(), spec.r());
    match method {
        Method::Brute => {
            let m = BigUint::from(p).pow(k + 1);
            Ok(exact_eval::sum_brute(spec) % m)
        }
        Method::Polypow => Ok(exact_eval::sum_mod_polypow(a, d, p, k)?.get(r).clone()),
        Method::Multisection => {
            let f = arith::multiplicative_order(p, d)
                .ok_or_else(|| Failure::usage(format!("multisection needs p = {p} prime to d = {d}")))?;
            let ctx = GrContext::new(p, f as usize, k).map_err(|e| Failure::usage(e.to_string()))?;
            Ok(exact_eval::sum_mod_multisection(spec, &ctx)?)
        }
        Method::Reduced => {
            let q = d.checked_add(1).ok_or_else(|| Failure::usage("d is too large"))?;
            match arith::prime_power(q) {
                Some((base, _)) if base == p => Ok(exact_eval::sum_mod_reduced(a, q, r, k)?),
                _ => Err(Failure::usage(format!(
                    "reduced needs d + 1 to be a power of p (d = {d}, p = {p})"
                ))),
            }
        }
    }
}

fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let spec = SumSpec::new(args.a, args.d, args.r)?;
    let Some(p) = args.mod_p else {
        if let Some(m) = args.method.filter(|&m| m != Method::Brute) {
            return Err(Failure::usage(format!("--method {m} needs --mod-p")));
        }
        writeln!(out, "{}", exact_eval::sum_brute(&spec))?;
        return Ok(EXIT_PASS);
    };
    if !arith::is_prime(p) {
        return Err(Failure::usage(format!("p must be prime (got {p})")));
    }
    let k = args.k.unwrap_or(0);
    let method = args.method.unwrap_or(Method::Polypow);
    let value = eval_modular(method, &spec, p, k)?;
    // every evaluator is compared against polypow, which has no preconditions
    if method != Method::Polypow {
        let reference = eval_modular(Method::Polypow, &spec, p, k)?;
        if reference != value {
            return Err(Failure::fail(format!(
                "{method} gives {value} but polypow gives {reference}"
            )));
        }
    }
    writeln!(out, "{value}")?;
    Ok(EXIT_PASS)
}

fn cmd_check(args: &CheckArgs, echo: &[String], out: &mut dyn Write) -> Result<i32, Failure> {
    let claim: Claim = args
        .claim
        .parse()
        .map_err(|e: congruences::UnknownClaim| Failure::usage(e.to_string()))?;
    let given = [
        ("p", args.p),
        ("q", args.q),
        ("d", args.d),
        ("a", args.a),
        ("r", args.r),
        ("k", args.k),
        ("h", args.h),
        ("s", args.s),
        ("t", args.t),
        ("k1", args.k1),
        ("k2", args.k2),
    ];
    let mut pars = Params::new();
    for (name, value) in given {
        let Some(v) = value else { continue };
        if !claim.params().contains(&name) {
            return Err(Failure::usage(format!("{claim} takes no --{name}")));
        }
        pars.insert(name.to_string(), v);
    }
    let report = congruences::run_check(claim, &pars)?;
    header(out, echo)?;
    write_record(out, &Record::Report(&report))?;
    let summary = Summary::of(std::slice::from_ref(&report));
    write_record(out, &Record::Summary(summary))?;
    Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
}

/// Writes to stdout and, optionally, a file.
struct Tee<'a> {
    out: &'a mut dyn Write,
    file: Option<io::BufWriter<File>>,
}

impl Write for Tee<'_> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        self.out.write_all(buf)?;
        if let Some(f) = &mut self.file {
            f.write_all(buf)?;
        }
        Ok(buf.len())
    }

    fn flush(&mut self) -> io::Result<()> {
        self.out.flush()?;
        if let Some(f) = &mut self.file {
            f.flush()?;
        }
        Ok(())
    }
}

fn cmd_sweep(args: &SweepArgs, echo: &[String], out: &mut dyn Write) -> Result<i32, Failure> {
    let claim: Claim = args
        .claim
        .parse()
        .map_err(|e: congruences::UnknownClaim| Failure::usage(e.to_string()))?;
    if args.jobs == 0 {
        return Err(Failure::usage("--jobs must be at least 1"));
    }
    let grid = SweepGrid {
        p: args.p.clone().map(|x| x.0).unwrap_or_default(),
        q: args.q.clone().map(|x| x.0).unwrap_or_default(),
        d: args.d.clone().map(|x| x.0).unwrap_or_default(),
        k: args.k.clone().map(|x| x.0).unwrap_or_default(),
        h: args.h.clone().map(|x| x.0).unwrap_or_default(),
        t: args.t.clone().map(|x| x.0).unwrap_or_default(),
        r: args.r.clone().map(|x| x.0).unwrap_or_default(),
        s: args.s.clone().map(|x| x.0).unwrap_or_default(),
        a: args.a.clone().map(|x| x.0).unwrap_or_default(),
        policy: match args.on_violation {
            OnViolation::Skip => SkipPolicy::Skip,
            OnViolation::Error => SkipPolicy::Error,
        },
    };
    // reject malformed grids before anything is written
    grid.tuples(claim)?;
    let file = match &args.out {
        Some(path) => {
            Some(io::BufWriter::new(File::create(path).map_err(|e| {
                Failure::usage(format!("cannot create {}: {e}", path.display()))
            })?))
        }
        None => None,
    };
    let mut tee = Tee { out, file };
    header(&mut tee, echo)?;
    let mut write_error = None;
    let summary = congruences::run_sweep_with(&grid, claim, args.jobs, |report| {
        if write_error.is_none() {
            if let Err(e) = write_record(&mut tee, &Record::Report(report)) {
                write_error = Some(e);
            }
        }
    });
    if let Some(e) = write_error {
        return Err(e.into());
    }
    let summary = summary?;
    write_record(&mut tee, &Record::Summary(summary))?;
    tee.flush()?;
    Ok(if summary.fail == 0 { EXIT_PASS } else { EXIT_FAIL })
}

fn all_residues(method: Method, a: u64, d: u64, p: u64, k: u32) -> Result<Vec<BigUint>, Failure> {
    match method {
        Method::Polypow => Ok(exact_eval::sum_mod_polypow(a, d, p, k)?.values().to_vec()),
        Method::Brute => {
            let m = BigUint::from(p).pow(k + 1);
            Ok(exact_eval::row_sums_exact(a, d)?.into_iter().map(|v| v % &m).collect())
        }
        _ => (0..d as i64)
            .map(|r| eval_modular(method, &SumSpec::new(a, d, r)?, p, k))
            .collect(),
    }
}

fn median(mut samples: Vec<Duration>) -> Duration {
    samples.sort();
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        (samples[n / 2 - 1] + samples[n / 2]) / 2
    }
}

/// Methods whose preconditions hold at `(a, d, p)`.
fn applicable(method: Method, args: &BenchArgs, a: u64) -> bool {
    match method {
        Method::Brute => a <= args.brute_cutoff,
        Method::Polypow => true,
        Method::Multisection => arith::multiplicative_order(args.p, args.d)
            .is_some_and(|f| GrContext::new(args.p, f as usize, args.k).is_ok()),
        Method::Reduced => args
            .d
            .checked_add(1)
            .and_then(arith::prime_power)
            .is_some_and(|(base, _)| base == args.p),
    }
}

fn cmd_bench(args: &BenchArgs, echo: &[String], out: &mut dyn Write) -> Result<i32, Failure> {
    if args.reps == 0 {
        return Err(Failure::usage("--reps must be at least 1"));
    }
    if args.d == 0 {
        return Err(Failure::usage("--d must be positive"));
    }
    if !arith::is_prime(args.p) {
        return Err(Failure::usage(format!("p must be prime (got {})", args.p)));
    }
    let mut methods = args.methods.clone();
    methods.dedup();
    header(out, echo)?;
    let mut summary = Summary::default();
    for &a in &args.a {
        let mut reference: Option<(Method, Vec<BigUint>)> = None;
        let mut agree = true;
        let mut used = Vec::new();
        for &method in &methods {
            if !applicable(method, args, a) {
                continue;
            }
            let mut samples = Vec::with_capacity(args.reps);
            let mut values = Vec::new();
            for _ in 0..args.reps {
                let start = Instant::now();
                values = all_residues(method, a, args.d, args.p, args.k)?;
                samples.push(start.elapsed());
            }
            let timing = TimingRecord {
                method: method.to_string(),
                a,
                d: args.d,
                p: args.p,
                k: args.k,
                reps: args.reps,
                median_ns: median(samples).as_nanos(),
            };
            write_record(out, &Record::Timing(&timing))?;
            used.push(method.to_string());
            match &reference {
                Some((_, expected)) => agree &= *expected == values,
                None => reference = Some((method, values)),
            }
        }
        let Some((_, values)) = reference else {
            summary.skip += 1;
            continue;
        };
        let record = ResidueRecord {
            a,
            d: args.d,
            p: args.p,
            k: args.k,
            modulus: BigUint::from(args.p).pow(args.k + 1).to_string(),
            values: values.iter().map(ToString::to_string).collect(),
            methods: used,
            agree,
        };
        write_record(out, &Record::Residues(&record))?;
        if agree {
            summary.pass += 1;
        } else {
            summary.fail += 1;
        }
    }
    write_record(out, &Record::Summary(summary))?;
    Ok(if summary.fail == 0 { EXIT_PASS } else { EXIT_FAIL })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("binsum").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_u64s("3,4,5").unwrap().0, vec![3, 4, 5]);
        assert_eq!(parse_u32s("0..3").unwrap().0, vec![0, 1, 2, 3]);
        assert_eq!(parse_i64s("-2..0,7").unwrap().0, vec![-2, -1, 0, 7]);
        assert!(parse_u64s("3..1").is_err());
        assert!(parse_u64s("1,,2").is_err());
        assert!(parse_u64s("-1").is_err());
        assert!(parse_prime_powers("3,6").unwrap_err().contains("prime power"));
        assert!(parse_primes("2,9").is_err());
        assert_eq!(parse_exponent("10^18").unwrap(), 1_000_000_000_000_000_000);
        assert!(parse_exponent("10^20").is_err());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(run_capture(&["eval", "--a", "7", "--d", "4", "--r", "2"]).1, "28\n");
        let (code, out, _) = run_capture(&[
            "eval",
            "--a",
            "7",
            "--d",
            "4",
            "--r",
            "2",
            "--mod-p",
            "5",
            "--k",
            "0",
            "--method",
            "multisection",
        ]);
        assert_eq!((code, out.as_str()), (0, "3\n"));
        assert_eq!(run_capture(&["eval", "--a", "0", "--d", "3", "--r", "0"]).1, "1\n");
        let (code, out, _) = run_capture(&[
            "eval", "--a", "25", "--d", "4", "--r", "1", "--mod-p", "5", "--k", "1", "--method", "reduced",
        ]);
        assert_eq!(code, 0);
        let exact = exact_eval::sum_brute(&SumSpec::new(25, 4, 1).unwrap()) % 25u32;
        assert_eq!(out.trim(), exact.to_string());
        assert_eq!(run_capture(&["eval", "--a", "7", "--d", "0", "--r", "0"]).0, EXIT_USAGE);
        assert_eq!(
            run_capture(&["eval", "--a", "7", "--d", "4", "--r", "0", "--method", "polypow"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_capture(&["eval", "--a", "7", "--d", "5", "--r", "0", "--mod-p", "5", "--method", "reduced"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn check_examples() {
        let (code, out, _) = run_capture(&["check", "carlitz", "--q", "3", "--k", "1", "--s", "1"]);
        assert_eq!(code, EXIT_PASS);
        let lines: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0]["type"], "header");
        assert_eq!(lines[1]["type"], "report");
        assert_eq!(lines[1]["modulus"], "9");
        assert_eq!(lines[2]["pass"], 1);
        assert_eq!(
            run_capture(&["check", "sharper", "--p", "7", "--s", "1", "--k", "1"]).0,
            EXIT_PASS
        );
        let (code, _, err) = run_capture(&["check", "carlitz", "--q", "6", "--k", "1", "--s", "1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("q must be a prime power"));
        assert_eq!(run_capture(&["check", "nonsense"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["check", "carlitz", "--q", "3"]).0, EXIT_USAGE);
        assert_eq!(
            run_capture(&["check", "carlitz", "--q", "3", "--k", "1", "--s", "1", "--h", "2"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn sweep_examples() {
        let (code, out, _) = run_capture(&["sweep", "carlitz", "--q", "3,4,5,7,8,9", "--k", "0..2", "--s", "1..20"]);
        assert_eq!(code, EXIT_PASS);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 362);
        assert!(lines.last().unwrap().contains("\"pass\":360"));
        let (code, out, _) = run_capture(&["sweep", "sharper", "--p", "5", "--k", "0", "--s", "1..4"]);
        assert_eq!(code, EXIT_PASS);
        assert!(out.lines().last().unwrap().contains("\"pass\":0,\"fail\":0,\"skip\":4"));
        assert_eq!(
            run_capture(&["sweep", "carlitz", "--q", "6", "--k", "0", "--s", "1"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_capture(&["sweep", "carlitz", "--q", "3", "--k", "2..1", "--s", "1"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_capture(&[
                "sweep",
                "symmetry",
                "--q",
                "4",
                "--k",
                "0",
                "--h",
                "1",
                "--r",
                "1",
                "--s",
                "1",
                "--on-violation",
                "error"
            ])
            .0,
            EXIT_USAGE
        );
    }

    #[test]
    fn bench_examples() {
        let (code, out, _) = run_capture(&[
            "bench",
            "--methods",
            "brute,polypow",
            "--a",
            "10^5",
            "--d",
            "12",
            "--p",
            "3",
            "--k",
            "2",
            "--reps",
            "1",
        ]);
        assert_eq!(code, EXIT_PASS);
        assert!(out.contains("\"type\":\"timing\""));
        assert!(out.contains("\"agree\":true"));
        assert_eq!(
            run_capture(&["bench", "--d", "4", "--p", "5", "--reps", "0"]).0,
            EXIT_USAGE
        );
    }
}
