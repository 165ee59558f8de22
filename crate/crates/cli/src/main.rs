//! `opuc`: build Jacobi OPUC families, run the identity suites, dump CMV
//! spectra and moments.
//!
//! Exit codes: 0 success, 1 verification or numerical failure, 2 usage or
//! configuration error.

mod suites;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use opuc_core::cmv::{cmv_matrix, truncated_spectrum};
use opuc_core::dunkl::lambda_n;
use opuc_core::moments::{sigma, Moment, Provenance, Weight};
use opuc_core::{parse_rational, report, Family, Rational};

use suites::{Point, Suite, SuiteConfig, SuiteResult};

#[derive(Parser, Debug)]
#[command(name = "opuc", version, about = "Exact checks for Jacobi OPUC and CMV bispectrality")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of n, a_n, h_n, lambda_n, psi_n for n < N.
    Gen(GenArgs),
    /// Run verification suites; exit 1 if any identity fails.
    Verify(VerifyArgs),
    /// Eigenvalues of the N x N truncated CMV matrix.
    Spectrum(SpectrumArgs),
    /// Normalized trigonometric moments of a weight.
    Moments(MomentsArgs),
}

#[derive(Args, Debug, Clone)]
struct ParamArgs {
    /// alpha as `p/q` or an integer.
    #[arg(long, default_value = "1/2", value_parser = parse_rational_arg, allow_hyphen_values = true)]
    alpha: Rational,
    /// beta as `p/q` or an integer.
    #[arg(long, default_value = "-1/2", value_parser = parse_rational_arg, allow_hyphen_values = true)]
    beta: Rational,
}

#[derive(Args, Debug, Clone)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Largest index checked (families are built to this index).
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long, value_enum, num_args = 1.., value_delimiter = ',', default_value = "all")]
    suite: Vec<Suite>,
    /// File of `alpha beta` lines; overrides --alpha/--beta.
    #[arg(long, alias = "grid")]
    grid_file: Option<PathBuf>,
    #[arg(long, default_value_t = 64)]
    quad_order: usize,
    /// Tolerance for numeric checks.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Push a_INDEX by +1/100 inside the recurrence (negative control).
    #[arg(long, value_name = "INDEX")]
    corrupt: Option<usize>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Matrix size.
    #[arg(long, default_value_t = 21, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WeightKind {
    Jacobi,
    SingleMoment,
    Lebesgue,
}

#[derive(Args, Debug)]
struct MomentsArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value_t = WeightKind::Jacobi)]
    weight: WeightKind,
    /// xi of the single-moment weight.
    #[arg(long, default_value = "1", value_parser = parse_rational_arg, allow_hyphen_values = true)]
    xi: Rational,
    /// Largest moment index.
    #[arg(long, default_value_t = 8)]
    n: u64,
    #[arg(long, default_value_t = 64)]
    quad_order: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn usage(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, error: error.into() }
}

fn runtime(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 1, error: error.into() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => gen(args),
        Command::Verify(args) => verify(args),
        Command::Spectrum(args) => spectrum(args),
        Command::Moments(args) => moments(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn emit(out: &OutArgs, body: &str) -> Result<(), Failure> {
    match &out.out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())).map_err(runtime),
        None => io::stdout().write_all(body.as_bytes()).context("writing stdout").map_err(runtime),
    }
}

fn csv_string<R: Serialize>(rows: impl IntoIterator<Item = R>) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn json_string<S: Serialize>(value: &S) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

#[derive(Serialize)]
struct GenRow {
    n: usize,
    a: String,
    h: String,
    lambda: String,
    psi: String,
}

fn gen(args: GenArgs) -> Result<u8, Failure> {
    let point = Point {
        alpha: args.params.alpha,
        beta: args.params.beta,
    };
    let p = point.params().map_err(usage)?;
    let last = args.n as usize - 1;
    let fam = Family::build(&p, last).map_err(runtime)?;
    let rows: Vec<GenRow> = fam
        .table()
        .into_iter()
        .map(|r| GenRow {
            n: r.n,
            a: r.a,
            h: r.h,
            lambda: lambda_n(&p, r.n).to_string(),
            psi: r.psi,
        })
        .collect();
    let body = match args.out.format {
        Format::Json => json_string(&rows),
        Format::Csv => csv_string(&rows),
        Format::Text => Ok(rows
            .iter()
            .map(|r| format!("{:>3}  a = {:<10} h = {:<14} lambda = {:<8} psi = {}\n", r.n, r.a, r.h, r.lambda, r.psi))
            .collect()),
    }
    .map_err(runtime)?;
    emit(&args.out, &body)?;
    Ok(0)
}

#[derive(Serialize)]
struct ConfigEcho {
    points: Vec<[String; 2]>,
    n: usize,
    suites: Vec<Suite>,
    quad_order: usize,
    tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    corrupt: Option<usize>,
}

#[derive(Serialize)]
struct Summary {
    identities: usize,
    passed: usize,
    failed: usize,
    ok: bool,
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    config: ConfigEcho,
    suite_results: &'a [SuiteResult],
    summary: Summary,
}

#[derive(Serialize)]
struct CsvResult<'a> {
    suite: Suite,
    alpha: &'a str,
    beta: &'a str,
    identity: &'a str,
    exact: bool,
    checked: usize,
    skipped: usize,
    failures: usize,
    status: &'static str,
}

fn verify(args: VerifyArgs) -> Result<u8, Failure> {
    let points = match &args.grid_file {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))
                .map_err(usage)?;
            let pts = suites::parse_grid(&text).map_err(|e| usage(anyhow!("{}: {e}", path.display())))?;
            if pts.is_empty() {
                return Err(usage(anyhow!("{} lists no parameter points", path.display())));
            }
            pts
        }
        None => vec![Point {
            alpha: args.params.alpha.clone(),
            beta: args.params.beta.clone(),
        }],
    };
    for pt in &points {
        pt.params().map_err(usage)?;
    }
    if args.quad_order < opuc_core::moments::MIN_QUAD_ORDER {
        return Err(usage(anyhow!(
            "--quad-order must be at least {}",
            opuc_core::moments::MIN_QUAD_ORDER
        )));
    }
    if !(args.tol > 0.0) {
        return Err(usage(anyhow!("--tol must be positive")));
    }
    let selected = Suite::expand(&args.suite);
    let cfg = SuiteConfig {
        n: args.n as usize,
        quad_order: args.quad_order,
        tol: args.tol,
        corrupt: args.corrupt,
    };
    if let Some(i) = cfg.corrupt {
        if i > cfg.n {
            return Err(usage(anyhow!("--corrupt {i} lies beyond --n {}", cfg.n)));
        }
    }

    let mut results = Vec::new();
    let mut run_error = None;
    for pt in &points {
        match suites::run(pt, &selected, &cfg) {
            Ok(r) => results.extend(r),
            Err(e) => {
                run_error = Some(anyhow!("alpha = {}, beta = {}: {e}", pt.alpha, pt.beta));
                break;
            }
        }
    }
    let passed = results.iter().filter(|r| r.report.passed()).count();
    let ok = run_error.is_none() && report::all_passed(results.iter().map(|r| &r.report));
    let output = VerifyOutput {
        config: ConfigEcho {
            points: points.iter().map(|p| [p.alpha.to_string(), p.beta.to_string()]).collect(),
            n: cfg.n,
            suites: selected,
            quad_order: cfg.quad_order,
            tol: cfg.tol,
            corrupt: cfg.corrupt,
        },
        suite_results: &results,
        summary: Summary {
            identities: results.len(),
            passed,
            failed: results.len() - passed,
            ok,
        },
    };
    let body = match args.out.format {
        Format::Json => json_string(&output),
        Format::Csv => csv_string(results.iter().map(|r| CsvResult {
            suite: r.suite,
            alpha: &r.alpha,
            beta: &r.beta,
            identity: &r.report.identity,
            exact: r.report.exact,
            checked: r.report.indices_checked.len(),
            skipped: r.report.skipped.len(),
            failures: r.report.failures.len(),
            status: if r.report.passed() { "PASS" } else { "FAIL" },
        })),
        Format::Text => Ok(verify_text(&output)),
    }
    .map_err(runtime)?;
    emit(&args.out, &body)?;
    if let Some(e) = run_error {
        return Err(runtime(e));
    }
    Ok(if ok { 0 } else { 1 })
}

fn verify_text(out: &VerifyOutput<'_>) -> String {
    let mut s = String::new();
    let mut last = None;
    for r in out.suite_results {
        let key = (r.alpha.as_str(), r.beta.as_str(), r.suite);
        if last != Some(key) {
            s.push_str(&format!("# {} alpha={} beta={}\n", r.suite, r.alpha, r.beta));
            last = Some(key);
        }
        s.push_str(&r.report.summary_line());
        s.push('\n');
        for f in r.report.failures.iter().take(5) {
            s.push_str(&format!("    at {}: {} residual {}\n", f.index, f.detail, f.residual));
        }
    }
    let sm = &out.summary;
    s.push_str(&format!(
        "{} identities: {} passed, {} failed\n",
        sm.identities, sm.passed, sm.failed
    ));
    s
}

#[derive(Serialize)]
struct SpectrumRow {
    index: usize,
    re: f64,
    im: f64,
    modulus: f64,
}

fn spectrum(args: SpectrumArgs) -> Result<u8, Failure> {
    let point = Point {
        alpha: args.params.alpha,
        beta: args.params.beta,
    };
    let p = point.params().map_err(usage)?;
    let size = args.n as usize;
    let a = p.verblunsky_seq(size).map_err(runtime)?;
    let c = cmv_matrix(&a, size).map_err(runtime)?;
    let eig = truncated_spectrum(&c).map_err(runtime)?;
    let rows: Vec<SpectrumRow> = eig
        .iter()
        .enumerate()
        .map(|(index, z)| SpectrumRow {
            index,
            re: z.re,
            im: z.im,
            modulus: z.norm(),
        })
        .collect();
    let body = match args.out.format {
        Format::Json => json_string(&rows),
        Format::Csv => csv_string(&rows),
        Format::Text => Ok(rows
            .iter()
            .map(|r| format!("{:>3}  {:+.15e} {:+.15e}i  |z| = {:.15}\n", r.index, r.re, r.im, r.modulus))
            .collect()),
    }
    .map_err(runtime)?;
    emit(&args.out, &body)?;
    Ok(0)
}

#[derive(Serialize)]
struct MomentRow {
    n: i64,
    value: String,
    approx: f64,
    provenance: Provenance,
}

fn moments(args: MomentsArgs) -> Result<u8, Failure> {
    let weight = match args.weight {
        WeightKind::Jacobi => {
            let point = Point {
                alpha: args.params.alpha,
                beta: args.params.beta,
            };
            Weight::Jacobi(point.params().map_err(usage)?)
        }
        WeightKind::SingleMoment => Weight::single_moment(args.xi).map_err(usage)?,
        WeightKind::Lebesgue => Weight::Lebesgue,
    };
    if args.quad_order < opuc_core::moments::MIN_QUAD_ORDER {
        return Err(usage(anyhow!(
            "--quad-order must be at least {}",
            opuc_core::moments::MIN_QUAD_ORDER
        )));
    }
    let mut rows = Vec::new();
    for n in 0..=args.n as i64 {
        let m = sigma(&weight, n, args.quad_order).map_err(runtime)?;
        let value = match &m {
            Moment::Exact(v) => v.to_string(),
            Moment::Quadrature(v) => format!("{v:e}"),
        };
        rows.push(MomentRow {
            n,
            value,
            approx: m.to_f64(),
            provenance: m.provenance(),
        });
    }
    let body = match args.out.format {
        Format::Json => json_string(&rows),
        Format::Csv => csv_string(&rows),
        Format::Text => Ok(rows
            .iter()
            .map(|r| format!("sigma_{:<3} = {:<24} ({})\n", r.n, r.value, if r.provenance == Provenance::Exact { "exact" } else { "quadrature" }))
            .collect()),
    }
    .map_err(runtime)?;
    emit(&args.out, &body)?;
    Ok(0)
}
