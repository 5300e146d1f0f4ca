//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation or usage error, 2 numerical failure,
//! 3 acceptance failure. `VOLTERRA_HELIX_THREADS` sets the worker count
//! (0 or unset means one per core).

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::acceptance::{run_all, run_criterion, CriterionOutcome, CRITERIA};
use crate::analyze::{
    bound_check, default_anchor, fit_exponent, scan_increments, IncrementTable, Ladder, ScanMethod,
};
use crate::error::{Error, Result};
use crate::moments::{
    covariance_with_tol, incremental_variance, mandelbrot_constant, mandelbrot_constant_numeric,
    variance_with_tol, IncrementQuery,
};
use crate::numerics::DEFAULT_TOL;
use crate::processes::{make_process, Interval, ProcessKind, ProcessSpec};
use crate::report::{format_float, write_csv, Report};
use crate::simulate::{sample_paths, TimeGrid};
use crate::theory::{classify_regime, Regime};

pub const THREADS_ENV: &str = "VOLTERRA_HELIX_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_ACCEPTANCE: i32 = 3;

/// Deviation allowed between a fitted exponent and the theory range.
const FIT_SLACK: f64 = 0.02;

#[derive(Debug, Parser)]
#[command(name = "volterra-helix", version, about = "Incremental variances and quasihelix checks for Gaussian Volterra processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Regime and exponents for a process on an interval.
    Describe(Common),
    /// E U(t)^2.
    Variance {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    /// E U(s) U(t).
    Covariance {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    /// E (U(t) - U(s))^2 with its decomposition.
    Incvar {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    /// The small-lag constant C(alpha), closed form against quadrature.
    Constant {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Increment norms over a ladder of lags.
    Scan(ScanArgs),
    /// Exponent fit over a ladder, compared with the regime table.
    Fit(ScanArgs),
    /// Sample paths on a grid.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Comma-separated increasing times; defaults to `--points` equal steps on (0, t2].
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        #[arg(long, default_value_t = 8)]
        points: usize,
        #[arg(long, default_value_t = 1000)]
        paths: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Runs the acceptance criteria.
    Verify {
        /// Run a single criterion (1-based).
        #[arg(long)]
        only: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Quadrature tolerance, within [1e-14, 1e-4].
    #[arg(long, allow_negative_numbers = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, value_parser = parse_kind, default_value = "wiener")]
    kind: ProcessKind,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    gamma: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    t1: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    t2: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[command(flatten)]
    common: Common,
    /// Fixed end point s; defaults to the interval midpoint.
    #[arg(long, allow_negative_numbers = true)]
    anchor: Option<f64>,
    #[arg(long, default_value_t = 12)]
    lag_count: usize,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.5)]
    lag_ratio: f64,
    /// Largest lag; defaults to 1e-2 (t2 - t1).
    #[arg(long, allow_negative_numbers = true)]
    h_max: Option<f64>,
    #[arg(long, value_enum, default_value_t = Method::Quadrature)]
    method: Method,
    #[arg(long, default_value_t = 10_000)]
    paths: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_kind(s: &str) -> std::result::Result<ProcessKind, String> {
    s.parse::<ProcessKind>().map_err(|e| e.to_string())
}

fn check_tol(tol: f64) -> Result<f64> {
    if (1e-14..=1e-4).contains(&tol) {
        Ok(tol)
    } else {
        Err(Error::Validation(format!("--tol must lie in [1e-14, 1e-4], got {tol}")))
    }
}

impl Common {
    fn spec(&self) -> Result<ProcessSpec> {
        make_process(self.kind, self.alpha, self.gamma, self.lambda)
    }

    fn interval(&self) -> Result<Interval> {
        Interval::new(self.t1, self.t2)
    }

    fn tol(&self) -> Result<f64> {
        check_tol(self.output.tol)
    }

    /// Spec, interval and a report pre-filled with the regime entry.
    fn prepare(&self, module: &str) -> Result<(ProcessSpec, Interval, Report)> {
        let spec = self.spec()?;
        let iv = self.interval()?;
        let regime = classify_regime(&spec, &iv);
        let report = Report::new(module, &regime.source).with_regime(spec, &regime);
        Ok((spec, iv, report))
    }
}

/// Output produced by a subcommand.
enum Rendered {
    Json(Report),
    Csv { header: Vec<String>, rows: Vec<Vec<String>> },
    Text(String),
}

fn emit(rendered: Rendered, output: &OutputArgs, stdout: &mut dyn Write) -> Result<()> {
    let mut file;
    let sink: &mut dyn Write = match &output.output {
        Some(path) => {
            file = File::create(path)?;
            &mut file
        }
        None => stdout,
    };
    match rendered {
        Rendered::Json(r) => writeln!(sink, "{}", r.to_json()?)?,
        Rendered::Csv { header, rows } => write_csv(sink, &header, rows)?,
        Rendered::Text(s) => write!(sink, "{s}")?,
    }
    Ok(())
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// A report either as JSON or as a two-column `key,value` CSV of its numeric values.
fn render(report: Report, format: Option<Format>) -> Rendered {
    match format.unwrap_or(Format::Json) {
        Format::Json => Rendered::Json(report),
        Format::Csv => {
            let rows = report
                .values
                .iter()
                .map(|(k, v)| {
                    let cell = match v.as_f64() {
                        Some(x) if v.is_number() => format_float(x),
                        _ => v.to_string().trim_matches('"').to_string(),
                    };
                    vec![k.clone(), cell]
                })
                .collect();
            Rendered::Csv { header: strings(&["key", "value"]), rows }
        }
    }
}

fn scan(args: &ScanArgs) -> Result<(ProcessSpec, Interval, Report, IncrementTable)> {
    let (spec, iv, report) = args.common.prepare("analyze")?;
    let tol = args.common.tol()?;
    let ladder = Ladder {
        lag_count: args.lag_count,
        lag_ratio: args.lag_ratio,
        h_max: args.h_max.unwrap_or(Ladder::default_for(&iv).h_max),
    };
    let anchor = args.anchor.unwrap_or_else(|| default_anchor(&iv));
    let method = match args.method {
        Method::Quadrature => ScanMethod::Quadrature { tol },
        Method::MonteCarlo => ScanMethod::MonteCarlo { n_paths: args.paths, seed: args.seed },
    };
    let table = scan_increments(&spec, anchor, &ladder, method)?;
    Ok((spec, iv, report, table))
}

fn table_csv(table: &IncrementTable) -> Rendered {
    let rows = (0..table.len())
        .map(|k| {
            vec![
                format_float(table.lags[k]),
                format_float(table.sigma[k]),
                format_float(table.std_errors[k]),
            ]
        })
        .collect();
    Rendered::Csv { header: strings(&["h", "sigma", "std_error"]), rows }
}

fn verify_lines(outcomes: &[CriterionOutcome]) -> String {
    let mut s: String = outcomes.iter().map(|o| o.line() + "\n").collect();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    s.push_str(&format!("{passed}/{} criteria passed\n", outcomes.len()));
    s
}

/// Executes one subcommand; `Ok(code)` carries a non-error exit code.
fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Describe(c) => {
            let (_, iv, report) = c.prepare("theory")?;
            let report = report
                .value("t1", iv.t1())
                .value("t2", iv.t2())
                .value("requires_t1_positive", classify_regime(&c.spec()?, &iv).requires_t1_positive);
            emit(render(report, c.output.format), &c.output, stdout)?;
        }
        Command::Variance { common, t } => {
            let (spec, _, report) = common.prepare("moments")?;
            let v = variance_with_tol(&spec, t, common.tol()?)?;
            let report = report.value("t", t).value("variance", v).error("tolerance", common.tol()?);
            emit(render(report, common.output.format), &common.output, stdout)?;
        }
        Command::Covariance { common, s, t } => {
            let (spec, _, report) = common.prepare("moments")?;
            let v = covariance_with_tol(&spec, s, t, common.tol()?)?;
            let report = report.value("s", s).value("t", t).value("covariance", v).error("tolerance", common.tol()?);
            emit(render(report, common.output.format), &common.output, stdout)?;
        }
        Command::Incvar { common, s, t } => {
            let (spec, _, report) = common.prepare("moments")?;
            let b = incremental_variance(&IncrementQuery::new(spec, s, t)?, common.tol()?)?;
            let report = report
                .value("s", s)
                .value("t", t)
                .value("j1", b.j1)
                .value("j2", b.j2)
                .value("j4", b.j4)
                .value("total", b.total)
                .value("method", b.method)
                .error("total", b.error_estimate);
            emit(render(report, common.output.format), &common.output, stdout)?;
        }
        Command::Constant { alpha, output } => {
            let tol = check_tol(output.tol)?;
            let closed = mandelbrot_constant(alpha)?;
            let numeric = mandelbrot_constant_numeric(alpha, tol)?;
            let report = Report::new("moments", "gamma-function closed form against quadrature of its integral form")
                .value("alpha", alpha)
                .value("closed_form", closed)
                .value("numeric", numeric)
                .value("difference", (closed - numeric).abs())
                .error("numeric", tol);
            emit(render(report, output.format), &output, stdout)?;
        }
        Command::Scan(args) => {
            let (_, _, report, table) = scan(&args)?;
            let rendered = match args.common.output.format {
                Some(Format::Csv) => table_csv(&table),
                _ => Rendered::Json(
                    report
                        .value("anchor", table.anchor)
                        .value("method", table.method)
                        .value("lags", &table.lags)
                        .value("sigma", &table.sigma)
                        .error("std_errors", &table.std_errors),
                ),
            };
            emit(rendered, &args.common.output, stdout)?;
        }
        Command::Fit(args) => {
            let (spec, iv, mut report, table) = scan(&args)?;
            let fit = fit_exponent(&table)?;
            let regime = classify_regime(&spec, &iv);
            report = report
                .value("anchor", table.anchor)
                .value("rho_hat", fit.rho_hat)
                .value("intercept", fit.intercept)
                .value("r_squared", fit.r_squared);
            if let Some((r1, r2)) = regime.exponents() {
                let consistent = fit.rho_hat >= r2 - FIT_SLACK && fit.rho_hat <= r1 + FIT_SLACK;
                report = report.value("consistent_with_theory", consistent);
            }
            if matches!(regime.regime, Regime::ExactQuasihelix | Regime::Generalized) {
                let b = bound_check(&table, &regime)?;
                report = report.value("c1_hat", b.c1_hat).value("c2_hat", b.c2_hat);
            }
            emit(render(report, args.common.output.format), &args.common.output, stdout)?;
        }
        Command::Simulate { common, grid, points, paths, seed } => {
            let spec = common.spec()?;
            let grid = match grid {
                Some(p) => TimeGrid::new(p)?,
                None => TimeGrid::uniform(common.t2, points)?,
            };
            let ens = sample_paths(&spec, &grid, paths, seed)?;
            let rendered = match common.output.format {
                Some(Format::Json) => {
                    let iv = common.interval()?;
                    let regime = classify_regime(&spec, &iv);
                    let rows: Vec<&[f64]> = ens.paths().collect();
                    Rendered::Json(
                        Report::new("simulate", &regime.source)
                            .with_regime(spec, &regime)
                            .value("grid", grid.points())
                            .value("seed", seed)
                            .value("paths", rows)
                            .value("factor_checksum", ens.factor_checksum())
                            .error("jitter", ens.jitter()),
                    )
                }
                _ => Rendered::Csv {
                    header: grid.points().iter().map(|t| format_float(*t)).collect(),
                    rows: ens.paths().map(|p| p.iter().map(|x| format_float(*x)).collect()).collect(),
                },
            };
            emit(rendered, &common.output, stdout)?;
        }
        Command::Verify { only, output } => {
            let outcomes = match only {
                Some(id) => vec![run_criterion(id).ok_or_else(|| {
                    Error::Validation(format!("--only must lie in 1..={}, got {id}", CRITERIA.len()))
                })?],
                None => run_all(),
            };
            let rendered = match output.format {
                Some(Format::Json) => {
                    let mut r = Report::new("acceptance", "acceptance criteria");
                    for o in &outcomes {
                        r = r.value(&format!("{:02}", o.id), o);
                    }
                    Rendered::Json(r)
                }
                Some(Format::Csv) => Rendered::Csv {
                    header: strings(&["id", "title", "passed", "detail", "seconds"]),
                    rows: outcomes
                        .iter()
                        .map(|o| {
                            vec![o.id.to_string(), o.title.clone(), o.passed.to_string(), o.detail.clone(), format!("{:.3}", o.seconds)]
                        })
                        .collect(),
                },
                None => Rendered::Text(verify_lines(&outcomes)),
            };
            emit(rendered, &output, stdout)?;
            if outcomes.iter().any(|o| !o.passed) {
                return Ok(EXIT_ACCEPTANCE);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Reads `VOLTERRA_HELIX_THREADS` and sizes the global worker pool once.
pub fn configure_threads() -> Result<()> {
    let n = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Validation(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}")))?,
        Err(_) => 0,
    };
    // a pool that is already running (repeated calls in one process) is kept
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_VALIDATION
    }
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code. Output goes to `stdout`, diagnostics to stderr.
pub fn run_command_with(argv: &[String], stdout: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return EXIT_VALIDATION;
    }
    match dispatch(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run_command(argv: &[String]) -> i32 {
    run_command_with(argv, &mut io::stdout().lock())
}
