//! Command-line front end: `solve`, `verify` and `list`.
//!
//! [`run`] takes the argument list and two writers and returns the process
//! exit code, so the whole command surface is testable in-process.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 malformed input,
//! 3 the base point is singular for the requested problem.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use recint::catalog::{self, CatalogEntry, VerificationReport};
use recint::first_order::{self, FirstOrderProblem};
use recint::second_order::{self, Forcing, SecondOrderProblem};
use recint::{Error, Series64};

pub mod output;

use output::{fmt_num, write_csv_table, Num, ResidualMap, SeriesOut};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;

pub const MIN_ORDER: usize = 4;
pub const MAX_ORDER: usize = 256;
pub const MAX_EVAL_COUNT: usize = 10_000;

#[derive(Debug, Parser)]
#[command(name = "recint", version, about = "Power-series solutions of linear ODEs by recursion and integrating factors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// y' + p y = f
    FirstOrder,
    /// y'' + p y' + q y = f
    SecondOrder,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a problem given by coefficient lists or a catalog entry.
    Solve(SolveArgs),
    /// Run catalog verification; exits non-zero if any check fails.
    Verify(VerifyArgs),
    /// List catalog entries.
    List {
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Debug, clap::Args)]
pub struct SolveArgs {
    #[arg(long, value_enum, default_value = "second-order")]
    pub kind: Kind,
    /// Catalog entry to solve instead of --p/--q.
    #[arg(long)]
    pub catalog: Option<String>,
    /// Catalog parameter, `name=value`; repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
    /// Coefficients of p in powers of (x - x0), comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    /// Coefficients of q, as for --p.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Forcing coefficients, as for --p. With --catalog, replaces the entry's forcing.
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    /// Expansion point x0 (default 0, or the catalog entry's own).
    #[arg(long, allow_hyphen_values = true)]
    pub base_point: Option<f64>,
    /// Truncation order N, 4..=256.
    #[arg(long, default_value_t = 24)]
    pub order: usize,
    /// Residual tolerance, relative to the coefficient scale.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Evaluation grid `start:stop:count`.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub eval: Option<Grid>,
    /// First-order: y(x0). Second-order: coefficient of y2 in y = c2 y1 + c1 y2 + yp.
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<f64>,
    /// Second-order: coefficient of y1 in y = c2 y1 + c1 y2 + yp.
    #[arg(long, allow_hyphen_values = true)]
    pub c2: Option<f64>,
    /// Also print the integrating factors.
    #[arg(long)]
    pub verbose: bool,
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    /// Catalog entry names, or `all`.
    #[arg(default_value = "all")]
    pub names: Vec<String>,
    #[arg(long, default_value_t = 32)]
    pub order: usize,
    /// Tolerance for the residual and Abel checks.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match self.count {
            0 => vec![],
            1 => vec![self.start],
            n => (0..n)
                .map(|i| self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("parameter '{k}': {e}"))?;
    if !v.is_finite() {
        return Err(format!("parameter '{k}' is not finite"));
    }
    Ok((k.trim().to_string(), v))
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(format!("expected start:stop:count, got '{s}'"));
    };
    let start: f64 = start.parse().map_err(|e| format!("grid start: {e}"))?;
    let stop: f64 = stop.parse().map_err(|e| format!("grid stop: {e}"))?;
    let count: usize = count.parse().map_err(|e| format!("grid count: {e}"))?;
    if !start.is_finite() || !stop.is_finite() {
        return Err("grid bounds must be finite".into());
    }
    if count > MAX_EVAL_COUNT {
        return Err(format!("grid count {count} exceeds {MAX_EVAL_COUNT}"));
    }
    Ok(Grid { start, stop, count })
}

fn parse_coeffs(flag: &str, s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            let v: f64 = t
                .trim()
                .parse()
                .map_err(|e| format!("--{flag}: '{t}': {e}"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("--{flag}: '{t}' is not finite"))
            }
        })
        .collect()
}

/// Failure of a command, mapped to an exit code by [`run`].
#[derive(Debug)]
enum Failure {
    Usage(String),
    Singular(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SingularAtBasePoint { .. } => Failure::Singular(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::List { format } => Ok((cmd_list(format), EXIT_OK)),
    };
    match result {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Singular(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_SINGULAR
        }
    }
}

fn check_order(order: usize) -> Result<(), Failure> {
    if (MIN_ORDER..=MAX_ORDER).contains(&order) {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "--order {order} outside {MIN_ORDER}..={MAX_ORDER}"
        )))
    }
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--tol {tol} must be positive")))
    }
}

fn series_arg(flag: &str, value: Option<&str>, x0: f64, order: usize) -> Result<Series64, Failure> {
    let coeffs = match value {
        Some(s) => parse_coeffs(flag, s).map_err(Failure::Usage)?,
        None => vec![],
    };
    Ok(Series64::from_poly(x0, order, &coeffs)?)
}

fn cmd_solve(args: &SolveArgs) -> Result<(String, i32), Failure> {
    check_order(args.order)?;
    check_tol(args.tol)?;
    match args.kind {
        Kind::FirstOrder => solve_first_order(args),
        Kind::SecondOrder => solve_second_order(args),
    }
}

fn second_order_problem(args: &SolveArgs) -> Result<SecondOrderProblem<f64>, Failure> {
    if let Some(name) = &args.catalog {
        if args.p.is_some() || args.q.is_some() {
            return Err(Failure::Usage("--catalog cannot be combined with --p/--q".into()));
        }
        let mut entry = catalog::entry_by_name(name, &args.params)?;
        if let Some(f) = &args.f {
            entry = entry.with_forcing(parse_coeffs("f", f).map_err(Failure::Usage)?);
        }
        let x0 = args.base_point.unwrap_or(entry.base_point());
        return Ok(entry.problem_about(x0, args.order)?);
    }
    if !args.params.is_empty() {
        return Err(Failure::Usage("--param requires --catalog".into()));
    }
    let x0 = args.base_point.unwrap_or(0.0);
    let p = series_arg("p", args.p.as_deref(), x0, args.order)?;
    let q = series_arg("q", args.q.as_deref(), x0, args.order)?;
    let f = series_arg("f", args.f.as_deref(), x0, args.order)?;
    Ok(SecondOrderProblem::new(p, q, f)?)
}

#[derive(Serialize)]
struct SecondOrderOut {
    y1: SeriesOut,
    y2: SeriesOut,
    yp: SeriesOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    y: Option<SeriesOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<SeriesOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<SeriesOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<SeriesOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eval: Option<Vec<EvalRow>>,
    residuals: ResidualMap,
}

#[derive(Serialize)]
struct EvalRow {
    x: Num,
    #[serde(flatten)]
    values: std::collections::BTreeMap<String, Num>,
}

fn solve_second_order(args: &SolveArgs) -> Result<(String, i32), Failure> {
    let prob = second_order_problem(args)?;
    let (factors, sol) = second_order::solve_extended(&prob)?;
    let combined = if args.c1.is_some() || args.c2.is_some() {
        Some(sol.general(args.c1.unwrap_or(0.0), args.c2.unwrap_or(0.0))?)
    } else {
        None
    };

    let mut named: Vec<(&str, &Series64, Forcing)> = vec![
        ("y1", &sol.y1, Forcing::Homogeneous),
        ("y2", &sol.y2, Forcing::Homogeneous),
        ("yp", &sol.yp, Forcing::Inhomogeneous),
    ];
    if let Some(y) = &combined {
        named.push(("y", y, Forcing::Inhomogeneous));
    }
    let mut residuals = Vec::new();
    for (label, y, forcing) in &named {
        let r = second_order::residual_second_order(&prob, y, *forcing, args.tol)?;
        residuals.push((label.to_string(), r));
    }

    let mut columns: Vec<(&str, &Series64)> = named.iter().map(|(l, s, _)| (*l, *s)).collect();
    if args.verbose {
        columns.extend([("alpha", &factors.alpha), ("beta", &factors.beta), ("h", &factors.h)]);
    }
    let grid = args.eval.map(|g| g.points()).unwrap_or_default();

    let text = match args.format {
        Format::Json => {
            let doc = SecondOrderOut {
                y1: (&sol.y1).into(),
                y2: (&sol.y2).into(),
                yp: (&sol.yp).into(),
                y: combined.as_ref().map(Into::into),
                alpha: args.verbose.then(|| (&factors.alpha).into()),
                beta: args.verbose.then(|| (&factors.beta).into()),
                h: args.verbose.then(|| (&factors.h).into()),
                alpha_iterations: args.verbose.then_some(factors.alpha_iterations),
                eval: args.eval.map(|_| eval_rows(&grid, &named)),
                residuals: ResidualMap::from(&residuals[..]),
            };
            to_json(&doc)
        }
        Format::Csv => {
            let mut s = String::new();
            coefficient_csv(&mut s, &columns, prob.order());
            if args.eval.is_some() {
                s.push('\n');
                eval_csv(&mut s, &grid, &named);
            }
            s.push('\n');
            residual_csv(&mut s, &residuals);
            s
        }
    };
    Ok((text, EXIT_OK))
}

fn eval_rows(grid: &[f64], named: &[(&str, &Series64, Forcing)]) -> Vec<EvalRow> {
    grid.iter()
        .map(|&x| EvalRow {
            x: Num(x),
            values: named
                .iter()
                .map(|(l, s, _)| (l.to_string(), Num(s.eval(x))))
                .collect(),
        })
        .collect()
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("output is serializable");
    text.push('\n');
    text
}

fn coefficient_csv(out: &mut String, columns: &[(&str, &Series64)], order: usize) {
    let mut header = vec!["degree"];
    header.extend(columns.iter().map(|(l, _)| *l));
    let rows: Vec<Vec<String>> = (0..=order)
        .map(|k| {
            let mut row = vec![k.to_string()];
            row.extend(columns.iter().map(|(_, s)| fmt_num(s.coeff(k))));
            row
        })
        .collect();
    write_csv_table(out, &header, &rows);
}

fn eval_csv(out: &mut String, grid: &[f64], named: &[(&str, &Series64, Forcing)]) {
    let mut header = vec!["x"];
    header.extend(named.iter().map(|(l, _, _)| *l));
    let rows: Vec<Vec<String>> = grid
        .iter()
        .map(|&x| {
            let mut row = vec![fmt_num(x)];
            row.extend(named.iter().map(|(_, s, _)| fmt_num(s.eval(x))));
            row
        })
        .collect();
    write_csv_table(out, &header, &rows);
}

fn residual_csv(out: &mut String, residuals: &[(String, recint::ResidualReport64)]) {
    let rows: Vec<Vec<String>> = residuals
        .iter()
        .map(|(l, r)| {
            vec![
                l.clone(),
                r.verified_degree.to_string(),
                fmt_num(r.max_residual),
                fmt_num(r.scale),
                fmt_num(r.tolerance_used),
                r.passed().to_string(),
            ]
        })
        .collect();
    write_csv_table(
        out,
        &["series", "verified_degree", "max_residual", "scale", "tolerance", "pass"],
        &rows,
    );
}

#[derive(Serialize)]
struct FirstOrderOut {
    y: SeriesOut,
    y_recursive: SeriesOut,
    recursive_iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    eval: Option<Vec<EvalRow>>,
    residuals: ResidualMap,
}

fn solve_first_order(args: &SolveArgs) -> Result<(String, i32), Failure> {
    if args.catalog.is_some() || args.q.is_some() || args.c2.is_some() || !args.params.is_empty() {
        return Err(Failure::Usage(
            "first-order problems take only --p, --f, --c1 and --base-point".into(),
        ));
    }
    let x0 = args.base_point.unwrap_or(0.0);
    let p = series_arg("p", args.p.as_deref(), x0, args.order)?;
    let f = series_arg("f", args.f.as_deref(), x0, args.order)?;
    let prob = FirstOrderProblem::new(p, f, args.c1.unwrap_or(0.0))?;
    let y = first_order::solve_integrating_factor(&prob)?;
    let (y_rec, iterations) = first_order::solve_recursive(&prob, args.order + 1)?;
    let residuals = vec![
        ("y".to_string(), first_order::residual_first_order(&prob, &y, args.tol)?),
        (
            "y_recursive".to_string(),
            first_order::residual_first_order(&prob, &y_rec, args.tol)?,
        ),
    ];
    let named = [
        ("y", &y, Forcing::Inhomogeneous),
        ("y_recursive", &y_rec, Forcing::Inhomogeneous),
    ];
    let grid = args.eval.map(|g| g.points()).unwrap_or_default();
    let text = match args.format {
        Format::Json => {
            let doc = FirstOrderOut {
                y: (&y).into(),
                y_recursive: (&y_rec).into(),
                recursive_iterations: iterations,
                eval: args.eval.map(|_| eval_rows(&grid, &named)),
                residuals: ResidualMap::from(&residuals[..]),
            };
            to_json(&doc)
        }
        Format::Csv => {
            let mut s = String::new();
            coefficient_csv(&mut s, &[("y", &y), ("y_recursive", &y_rec)], prob.order());
            if args.eval.is_some() {
                s.push('\n');
                eval_csv(&mut s, &grid, &named);
            }
            s.push('\n');
            residual_csv(&mut s, &residuals);
            s
        }
    };
    Ok((text, EXIT_OK))
}

fn resolve_names(names: &[String]) -> Result<Vec<CatalogEntry>, Failure> {
    if names.is_empty() || names.iter().any(|n| n == "all") {
        return Ok(catalog::all_entries());
    }
    names
        .iter()
        .map(|n| catalog::entry_by_name(n, &[]).map_err(Failure::from))
        .collect()
}

fn cmd_verify(args: &VerifyArgs) -> Result<(String, i32), Failure> {
    check_order(args.order)?;
    check_tol(args.tol)?;
    let entries = resolve_names(&args.names)?;
    let mut text = String::new();
    let code = verify_entries(&entries, args.order, args.tol, args.format, &mut text);
    Ok((text, code))
}

/// Verifies `entries` in parallel and renders one row per check. Returns
/// [`EXIT_OK`] iff every check passed.
pub fn verify_entries(
    entries: &[CatalogEntry],
    order: usize,
    tol: f64,
    format: Format,
    out: &mut String,
) -> i32 {
    let reports: Vec<VerificationReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = entries
            .iter()
            .map(|e| scope.spawn(move || catalog::verify_entry(e, order, tol)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verification thread panicked"))
            .collect()
    });
    render_reports(&reports, format, out);
    if reports.iter().all(VerificationReport::passed) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

#[derive(Serialize)]
struct VerifyRowOut<'a> {
    name: &'a str,
    check: &'a str,
    worst_error: Num,
    threshold: Num,
    pass: bool,
}

fn render_reports(reports: &[VerificationReport], format: Format, out: &mut String) {
    match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .flat_map(|rep| {
                    rep.rows.iter().map(|r| {
                        vec![
                            rep.name.clone(),
                            r.check.replace(',', ";"),
                            fmt_num(r.worst_error),
                            r.pass.to_string(),
                        ]
                    })
                })
                .collect();
            write_csv_table(out, &["name", "check", "worst_error", "pass"], &rows);
        }
        Format::Json => {
            let rows: Vec<VerifyRowOut> = reports
                .iter()
                .flat_map(|rep| {
                    rep.rows.iter().map(|r| VerifyRowOut {
                        name: &rep.name,
                        check: &r.check,
                        worst_error: Num(r.worst_error),
                        threshold: Num(r.threshold),
                        pass: r.pass,
                    })
                })
                .collect();
            out.push_str(&to_json(&rows));
        }
    }
}

#[derive(Serialize)]
struct ListOut {
    name: String,
    params: std::collections::BTreeMap<String, Num>,
    base_point: Num,
    interval: [Num; 2],
}

fn cmd_list(format: Format) -> String {
    let rows = catalog::listing();
    match format {
        Format::Json => {
            let doc: Vec<ListOut> = rows
                .into_iter()
                .map(|r| ListOut {
                    name: r.name,
                    params: r.params.into_iter().map(|(k, v)| (k, Num(v))).collect(),
                    base_point: Num(r.base_point),
                    interval: [Num(r.interval[0]), Num(r.interval[1])],
                })
                .collect();
            to_json(&doc)
        }
        Format::Csv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let params: Vec<String> =
                        r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    vec![
                        r.name.clone(),
                        params.join(";"),
                        fmt_num(r.base_point),
                        fmt_num(r.interval[0]),
                        fmt_num(r.interval[1]),
                    ]
                })
                .collect();
            let mut s = String::new();
            write_csv_table(
                &mut s,
                &["name", "params", "base_point", "interval_start", "interval_end"],
                &body,
            );
            s
        }
    }
}
