use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sixvertex::checks::{self, SuiteConfig};
use sixvertex::detform::{z_hom_by, ZMethod};
use sixvertex::efp::{efp_hom_by, Method};
use sixvertex::grid::{sweep, CSV_HEADER};
use sixvertex::model::HomParams;
use sixvertex::numerics::{Precision, Scalar};
use sixvertex::orthopoly::boundary_h;
use sixvertex::Error;

#[derive(Parser, Debug)]
#[command(name = "sixvertex", version, about = "Domain-wall six-vertex model: partition function and emptiness formation probability at arbitrary precision")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Partition function Z_N at homogeneous parameters.
    Z {
        #[arg(long = "N")]
        n: usize,
        /// det-hom, ortho, oracle, qism or all.
        #[arg(long, default_value = "all")]
        method: String,
        #[arg(long, default_value_t = 1e-40)]
        tolerance: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Emptiness formation probability F_N^(r,s).
    Efp {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        /// det-hom, ortho, mir1, mir2, mir3, oracle, qism, sum-inhom or all.
        #[arg(long, default_value = "det-hom")]
        method: String,
        #[arg(long, default_value_t = 1e-40)]
        tolerance: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Boundary distribution H_N^(r), the coefficients of h_N(z).
    Hgen {
        #[arg(long = "N")]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Grid of F_N^(r,s) for r = 1..N, s = 1..smax.
    Sweep {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        smax: usize,
        #[arg(long, default_value = "det-hom")]
        method: String,
        /// Worker threads (defaults to the available parallelism).
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the validation suite.
    Validate {
        /// Restrict to these check groups (comma separated or repeated).
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Spectral parameter in radians, decimal or a fraction of pi (pi/2).
    #[arg(long, default_value = "pi/2")]
    lambda: String,
    /// Crossing parameter in radians, decimal or a fraction of pi (pi/6).
    #[arg(long, default_value = "pi/6")]
    eta: String,
    /// Working precision in decimal digits.
    #[arg(long, default_value_t = Precision::DEFAULT_DIGITS, value_parser = clap::value_parser!(u32).range(32..))]
    precision: u32,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
    Svg,
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Failure::Usage(e.to_string())
    }

    fn numeric(e: impl std::fmt::Display) -> Self {
        Failure::Numeric(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("numeric failure: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Z { n, method, tolerance, common } => run_z(n, &method, tolerance, &common),
        Command::Efp { n, r, s, method, tolerance, common } => run_efp(n, r, s, &method, tolerance, &common),
        Command::Hgen { n, common } => run_hgen(n, &common),
        Command::Sweep { n, smax, method, workers, common } => run_sweep(n, smax, &method, workers, &common),
        Command::Validate { only, common } => run_validate(&only, &common),
    }
}

fn params(common: &Common) -> Result<HomParams, Failure> {
    HomParams::parse(Precision::new(common.precision), &common.lambda, &common.eta).map_err(Failure::usage)
}

fn out_digits(common: &Common) -> usize {
    (common.precision as usize).min(50)
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::numeric(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn format_or(common: &Common, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = common.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::usage(format!("format {f:?} is not available for this command")))
    }
}

#[derive(Serialize)]
struct ValueRow {
    method: &'static str,
    value: String,
    imag: String,
}

#[derive(Serialize)]
struct ValueReport {
    quantity: &'static str,
    #[serde(rename = "N")]
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<usize>,
    lambda: String,
    eta: String,
    precision: u32,
    results: Vec<ValueRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_deviation: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

/// Largest pairwise deviation, relative when `relative`.
fn max_pairwise(values: &[Scalar], relative: bool) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let d = if relative {
                values[i].rel_dev(&values[j])
            } else {
                values[i].abs_dev(&values[j])
            };
            worst = worst.max(if d.is_nan() { f64::INFINITY } else { d });
        }
    }
    worst
}

fn render_values(report: &ValueReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("serializable") + "\n",
        Format::Csv => {
            let mut out = String::new();
            if report.quantity == "efp" {
                let _ = writeln!(out, "{CSV_HEADER}");
            } else {
                let _ = writeln!(out, "N,value,method,imag_residual");
            }
            for row in &report.results {
                match (report.r, report.s) {
                    (Some(r), Some(s)) => {
                        let _ = writeln!(out, "{},{r},{s},{},{},{}", report.n, row.value, row.method, row.imag);
                    }
                    _ => {
                        let _ = writeln!(out, "{},{},{},{}", report.n, row.value, row.method, row.imag);
                    }
                }
            }
            out
        }
        _ => {
            let mut out = String::new();
            let label = match (report.r, report.s) {
                (Some(r), Some(s)) => format!("F_{}^({r},{s})", report.n),
                _ => format!("Z_{}", report.n),
            };
            let _ = writeln!(out, "{label} at lambda = {}, eta = {} ({} digits)", report.lambda, report.eta, report.precision);
            for row in &report.results {
                let _ = writeln!(out, "  {:<10} {}", row.method, row.value);
            }
            if let Some(d) = &report.max_deviation {
                let _ = writeln!(out, "max pairwise deviation: {d}");
            }
            out
        }
    }
}

fn value_row(method: &'static str, v: &Scalar, digits: usize) -> ValueRow {
    ValueRow {
        method,
        value: v.format_decimal(digits),
        imag: format!("{:.3e}", v.im_f64().abs()),
    }
}

fn run_z(n: usize, method: &str, tolerance: f64, common: &Common) -> Outcome {
    let format = format_or(common, Format::Text, &[Format::Text, Format::Csv, Format::Json])?;
    let p = params(common)?;
    let methods: Vec<ZMethod> = if method == "all" {
        ZMethod::check(ZMethod::DetHom, n).map_err(Failure::usage)?;
        ZMethod::ALL.into_iter().filter(|m| m.check(n).is_ok()).collect()
    } else {
        let m = ZMethod::parse(method).map_err(Failure::usage)?;
        m.check(n).map_err(Failure::usage)?;
        vec![m]
    };
    let digits = out_digits(common);
    let mut values = Vec::new();
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for m in methods {
        let (v, w) = z_hom_by(m, &p, n).map_err(Failure::numeric)?;
        warnings.extend(w.into_iter().map(|x| format!("{}: {x}", m.tag())));
        rows.push(value_row(m.tag(), &v, digits));
        values.push(v);
    }
    finish_values("z", n, None, values, rows, warnings, tolerance, true, common, format)
}

#[allow(clippy::too_many_arguments)]
fn finish_values(
    quantity: &'static str,
    n: usize,
    rs: Option<(usize, usize)>,
    values: Vec<Scalar>,
    rows: Vec<ValueRow>,
    warnings: Vec<String>,
    tolerance: f64,
    relative: bool,
    common: &Common,
    format: Format,
) -> Outcome {
    let dev = (values.len() > 1).then(|| max_pairwise(&values, relative));
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let report = ValueReport {
        quantity,
        n,
        r: rs.map(|x| x.0),
        s: rs.map(|x| x.1),
        lambda: common.lambda.clone(),
        eta: common.eta.clone(),
        precision: common.precision,
        results: rows,
        max_deviation: dev.map(|d| format!("{d:.3e}")),
        warnings,
    };
    emit(common, &render_values(&report, format))?;
    if let Some(d) = dev {
        if d > tolerance {
            eprintln!("cross-method deviation {d:.3e} exceeds tolerance {tolerance:.3e}");
            return Ok(false);
        }
    }
    Ok(true)
}

fn parse_method(tag: &str) -> Result<Method, Failure> {
    tag.parse::<Method>().map_err(Failure::usage)
}

fn run_efp(n: usize, r: usize, s: usize, method: &str, tolerance: f64, common: &Common) -> Outcome {
    let format = format_or(common, Format::Text, &[Format::Text, Format::Csv, Format::Json])?;
    let p = params(common)?;
    let methods: Vec<Method> = if method == "all" {
        sixvertex::efp::check_indices(n, r, s).map_err(Failure::usage)?;
        Method::ALL.into_iter().filter(|m| m.check_homogeneous(n, r, s).is_ok()).collect()
    } else {
        let m = parse_method(method)?;
        m.check_homogeneous(n, r, s).map_err(Failure::usage)?;
        vec![m]
    };
    let digits = out_digits(common);
    let mut values = Vec::new();
    let mut rows = Vec::new();
    for m in methods {
        let v = efp_hom_by(m, &p, n, r, s).map_err(Failure::numeric)?.value;
        rows.push(value_row(m.tag(), &v, digits));
        values.push(v);
    }
    finish_values("efp", n, Some((r, s)), values, rows, Vec::new(), tolerance, false, common, format)
}

fn run_hgen(n: usize, common: &Common) -> Outcome {
    let format = format_or(common, Format::Text, &[Format::Text, Format::Csv, Format::Json])?;
    let p = params(common)?;
    if n == 0 {
        return Err(Failure::usage("N must be at least 1"));
    }
    let h = boundary_h(&p, n).map_err(Failure::numeric)?;
    let digits = out_digits(common);
    let mut out = String::new();
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct HReport {
                #[serde(rename = "N")]
                n: usize,
                lambda: String,
                eta: String,
                precision: u32,
                coefficients: Vec<String>,
            }
            let rep = HReport {
                n,
                lambda: common.lambda.clone(),
                eta: common.eta.clone(),
                precision: common.precision,
                coefficients: h.iter().map(|x| x.format_decimal(digits)).collect(),
            };
            out = serde_json::to_string_pretty(&rep).expect("serializable") + "\n";
        }
        Format::Csv => {
            let _ = writeln!(out, "N,r,H");
            for (i, x) in h.iter().enumerate() {
                let _ = writeln!(out, "{n},{},{}", i + 1, x.format_decimal(digits));
            }
        }
        _ => {
            let _ = writeln!(out, "h_{n}(z) = sum_r H_{n}^(r) z^(r-1) at lambda = {}, eta = {}", common.lambda, common.eta);
            for (i, x) in h.iter().enumerate() {
                let _ = writeln!(out, "  r = {:<3} {}", i + 1, x.format_decimal(digits));
            }
        }
    }
    emit(common, &out)?;
    Ok(true)
}

fn run_sweep(n: usize, smax: usize, method: &str, workers: Option<usize>, common: &Common) -> Outcome {
    let format = format_or(common, Format::Csv, &[Format::Csv, Format::Svg])?;
    let p = params(common)?;
    let m = parse_method(method)?;
    if smax == 0 || smax > n {
        return Err(Failure::usage(format!("need 1 <= smax <= N = {n}")));
    }
    for r in 1..=n {
        for s in 1..=smax {
            m.check_homogeneous(n, r, s).map_err(Failure::usage)?;
        }
    }
    let workers = workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |w| w.get()));
    let grid = sweep(&p, n, smax, m, workers).map_err(|e| match e {
        Error::SizeCap { .. } | Error::IndexOutOfRange(_) => Failure::usage(e),
        other => Failure::numeric(other),
    })?;
    let text = match format {
        Format::Svg => grid.to_svg(),
        _ => grid.to_csv(out_digits(common)),
    };
    emit(common, &text)?;
    Ok(true)
}

fn run_validate(only: &[String], common: &Common) -> Outcome {
    let format = format_or(common, Format::Json, &[Format::Json, Format::Text])?;
    for name in only {
        if !checks::group_names().contains(&name.as_str()) {
            return Err(Failure::usage(format!(
                "unknown check group `{name}`; known: {}",
                checks::group_names().join(", ")
            )));
        }
    }
    let cfg = SuiteConfig::new(Precision::new(common.precision));
    let report = checks::run(&cfg, only).map_err(Failure::numeric)?;
    for rec in &report.records {
        for w in &rec.warnings {
            eprintln!("warning: {}: {w}", rec.name);
        }
    }
    let text = match format {
        Format::Text => {
            let mut out = String::new();
            for rec in &report.records {
                let _ = writeln!(
                    out,
                    "{} {:<28} max_dev {:.3e}  tol {:.1e}  ({})",
                    if rec.pass { "PASS" } else { "FAIL" },
                    rec.name,
                    rec.max_dev,
                    rec.tol,
                    rec.anchor
                );
            }
            out
        }
        _ => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
    };
    emit(common, &text)?;
    Ok(report.all_pass())
}
