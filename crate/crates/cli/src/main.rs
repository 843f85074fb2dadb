//! `hypersum` — a calculator for Euler sums of hyperharmonic numbers and
//! their ingredients, with exact, series, and quadrature routes plus a
//! cross-validation suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hypersum_core::error::Error;
use hypersum_core::exact;
use hypersum_core::expr::{self, Basis};
use hypersum_core::numeric;
use hypersum_core::quadrature::{self, QuadratureResult};
use hypersum_core::series::{self, SeriesParams, SeriesResult, SeriesStatus};
use hypersum_core::verify::{self, SuiteGrid};
use hypersum_core::{Rational, Real, GUARD_BITS};

#[derive(Parser)]
#[command(
    name = "hypersum",
    about = "Euler sums of hyperharmonic numbers: exact closed forms, high-precision series, and quadrature",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    opts: GlobalOpts,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Working precision in bits (>= 53). Defaults to $HYPERSUM_PREC or 128.
    #[arg(long = "prec", global = true)]
    prec: Option<u32>,

    /// Tolerance for series truncation, as a decimal string.
    #[arg(long = "tol", global = true, default_value = "1e-10")]
    tol: String,

    /// Output format.
    #[arg(long = "format", global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    /// Cap on the number of series terms.
    #[arg(long = "term-cap", global = true, default_value_t = series::DEFAULT_TERM_CAP)]
    term_cap: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Plain => "plain",
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SigmaForm {
    Closed,
    Series,
    Integral,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Hyperharmonic number H_n^(r) as an exact fraction.
    Hh {
        n: u64,
        r: u32,
        /// Also print a decimal approximation.
        #[arg(long)]
        decimal: bool,
    },
    /// The Euler sum sigma(r, m) by the selected route(s); requires m > r.
    Sigma {
        r: u32,
        m: u32,
        #[arg(long, value_enum, default_value_t = SigmaForm::Closed)]
        form: SigmaForm,
    },
    /// Unsigned Stirling number of the first kind s(r, k).
    Stirling { r: u32, k: u32 },
    /// Bernoulli number B_n (convention B_1 = -1/2).
    Bernoulli { n: u32 },
    /// Riemann zeta at an integer argument k >= 2.
    Zeta { k: u32 },
    /// Hurwitz zeta zeta(m, n) = sum_{k>=0} (n+k)^(-m).
    Hurwitz { m: u32, n: u64 },
    /// mu(r, j) = sum_{n>=1} 1/(n^r (n+j)), symbolic and numeric.
    Mu { r: u32, j: u64 },
    /// Run the cross-validation suite.
    Verify {
        /// Grid: R_MAX M_OFFSET (sigma cells r <= R_MAX, m <= r + M_OFFSET).
        #[arg(long, num_args = 2, value_names = ["R_MAX", "M_OFFSET"], default_values = ["4", "4"])]
        grid: Vec<u32>,
    },
    /// Closed forms and numeric values of sigma(r, m) over a range.
    Table {
        #[arg(long = "r-max")]
        r_max: u32,
        #[arg(long = "m-max")]
        m_max: u32,
    },
}

struct Config {
    prec: u32,
    tol: f64,
    format: Format,
    term_cap: u64,
}

impl Config {
    fn digits(&self) -> usize {
        ((self.prec as f64 * std::f64::consts::LOG10_2) as usize)
            .saturating_sub(2)
            .max(6)
    }

    fn json(&self) -> Value {
        json!({
            "precision_bits": self.prec,
            "tolerance": format!("{:e}", self.tol),
            "format": self.format.name(),
            "series_term_cap": self.term_cap,
        })
    }
}

fn resolve_config(opts: &GlobalOpts) -> Result<Config, Error> {
    let prec = match opts.prec {
        Some(p) => p,
        None => match std::env::var("HYPERSUM_PREC") {
            Ok(s) => s
                .trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("invalid HYPERSUM_PREC: {s:?}")))?,
            Err(_) => 128,
        },
    };
    hypersum_core::error::check_precision(prec)?;
    let tol: f64 = opts
        .tol
        .parse()
        .map_err(|_| Error::Parse(format!("invalid tolerance: {:?}", opts.tol)))?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::domain("tolerance must be a positive finite decimal"));
    }
    if opts.term_cap == 0 {
        return Err(Error::domain("term cap must be at least 1"));
    }
    Ok(Config {
        prec,
        tol,
        format: opts.format,
        term_cap: opts.term_cap,
    })
}

/// Decimal rendering with the `~` marker that distinguishes approximations
/// from exact fractions.
fn approx(v: &Real, cfg: &Config) -> String {
    format!("~{}", v.to_decimal(cfg.digits()))
}

fn rational_str(q: &Rational) -> String {
    if q.denom() == &num_bigint::BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn csv_emit(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    w.write_record(header).expect("csv record");
    for row in rows {
        w.write_record(row).expect("csv record");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("utf8")
}

fn emit_json(command: &str, cfg: &Config, results: Value, errors: Vec<String>) {
    let doc = json!({
        "command": command,
        "config": cfg.json(),
        "results": results,
        "errors": errors
            .into_iter()
            .map(|m| json!({ "message": m }))
            .collect::<Vec<_>>(),
    });
    println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
}

struct SigmaRoute {
    route: &'static str,
    value: Real,
    bound: f64,
    detail: BTreeMap<&'static str, String>,
}

fn series_detail(res: &SeriesResult<Real>) -> BTreeMap<&'static str, String> {
    let mut d = BTreeMap::new();
    d.insert("tail_bound", format!("{:e}", res.tail_bound.to_f64()));
    d.insert("terms_used", res.terms_used.to_string());
    d.insert(
        "status",
        match res.status {
            SeriesStatus::TolMet => "tol_met",
            SeriesStatus::CapReached => "cap_reached",
            SeriesStatus::FixedTerms => "fixed_terms",
        }
        .to_string(),
    );
    d
}

fn quad_detail(res: &QuadratureResult<Real>) -> BTreeMap<&'static str, String> {
    let mut d = BTreeMap::new();
    d.insert(
        "error_estimate",
        format!("{:e}", res.error_estimate.to_f64()),
    );
    d.insert("evaluations", res.evaluations.to_string());
    d
}

fn run_sigma(r: u32, m: u32, form: SigmaForm, cfg: &Config) -> Result<(), Error> {
    let mut routes: Vec<SigmaRoute> = Vec::new();
    let mut symbolic: Option<(String, String)> = None;

    if matches!(form, SigmaForm::Closed | SigmaForm::All) {
        let e = expr::sigma_closed_form(r, m)?;
        let value: Real = e.evaluate(cfg.prec)?;
        let bound = value.to_f64().abs() * 2f64.powi(GUARD_BITS as i32 - cfg.prec as i32);
        symbolic = Some((e.render(Basis::ZetaDisplay), e.render(Basis::PiCanonical)));
        let mut detail = BTreeMap::new();
        detail.insert("error_bound", format!("{bound:e}"));
        routes.push(SigmaRoute {
            route: "closed_form",
            value,
            bound,
            detail,
        });
    }
    if matches!(form, SigmaForm::Series | SigmaForm::All) {
        let sp = SeriesParams {
            prec: cfg.prec,
            term_cap: cfg.term_cap,
        };
        let tol = Real::from_f64(cfg.tol, cfg.prec);
        let direct = series::sigma_series_direct::<Real>(r, m, &tol, &sp)?;
        routes.push(SigmaRoute {
            route: "series_direct",
            bound: direct.tail_bound.to_f64(),
            detail: series_detail(&direct),
            value: direct.value,
        });
        let hurwitz = series::sigma_series_hurwitz::<Real>(r, m, &tol, &sp)?;
        routes.push(SigmaRoute {
            route: "series_hurwitz",
            bound: hurwitz.tail_bound.to_f64(),
            detail: series_detail(&hurwitz),
            value: hurwitz.value,
        });
    }
    if matches!(form, SigmaForm::Integral | SigmaForm::All) {
        let q = quadrature::sigma_integral::<Real>(r, m, cfg.prec)?;
        routes.push(SigmaRoute {
            route: "integral",
            bound: q.error_estimate.to_f64(),
            detail: quad_detail(&q),
            value: q.value,
        });
    }

    let max_gap = (routes.len() > 1).then(|| {
        let mut gap = 0.0f64;
        for i in 0..routes.len() {
            for j in i + 1..routes.len() {
                gap = gap.max(
                    (routes[i].value.clone() - routes[j].value.clone())
                        .abs_val()
                        .to_f64(),
                );
            }
        }
        gap
    });

    match cfg.format {
        Format::Plain => {
            if let Some((zd, pc)) = &symbolic {
                println!("sigma({r}, {m}) = {zd}");
                println!("           = {pc}");
            }
            for rt in &routes {
                let extras: Vec<String> =
                    rt.detail.iter().map(|(k, v)| format!("{k}={v}")).collect();
                println!(
                    "{:<16} {}  [{}]",
                    rt.route,
                    approx(&rt.value, cfg),
                    extras.join(", ")
                );
            }
            if let Some(g) = max_gap {
                println!("max pairwise discrepancy: {g:e}");
            }
        }
        Format::Json => {
            let mut items: Vec<Value> = routes
                .iter()
                .map(|rt| {
                    let mut o = serde_json::Map::new();
                    o.insert("route".into(), json!(rt.route));
                    o.insert("value".into(), json!(approx(&rt.value, cfg)));
                    o.insert("error_bound".into(), json!(format!("{:e}", rt.bound)));
                    for (k, v) in &rt.detail {
                        o.insert((*k).into(), json!(v));
                    }
                    if rt.route == "closed_form" {
                        if let Some((zd, pc)) = &symbolic {
                            o.insert("symbolic_zeta".into(), json!(zd));
                            o.insert("symbolic_pi".into(), json!(pc));
                        }
                    }
                    Value::Object(o)
                })
                .collect();
            if let Some(g) = max_gap {
                items.push(json!({ "max_pairwise_discrepancy": format!("{g:e}") }));
            }
            emit_json("sigma", cfg, Value::Array(items), vec![]);
        }
        Format::Csv => {
            let header = [
                "r",
                "m",
                "route",
                "symbolic_zeta",
                "symbolic_pi",
                "value",
                "error_bound",
                "precision_bits",
            ];
            let rows: Vec<Vec<String>> = routes
                .iter()
                .map(|rt| {
                    let (zd, pc) = if rt.route == "closed_form" {
                        symbolic.clone().unwrap_or_default()
                    } else {
                        (String::new(), String::new())
                    };
                    vec![
                        r.to_string(),
                        m.to_string(),
                        rt.route.to_string(),
                        zd,
                        pc,
                        approx(&rt.value, cfg),
                        format!("{:e}", rt.bound),
                        cfg.prec.to_string(),
                    ]
                })
                .collect();
            print!("{}", csv_emit(&header, &rows));
        }
    }
    Ok(())
}

/// Simple one-value commands share this output shape.
fn emit_scalar(
    command: &str,
    args: &[(&str, String)],
    exact: Option<String>,
    numeric: Option<String>,
    cfg: &Config,
) {
    match cfg.format {
        Format::Plain => {
            let mut parts: Vec<String> = Vec::new();
            if let Some(e) = &exact {
                parts.push(e.clone());
            }
            if let Some(x) = &numeric {
                parts.push(x.clone());
            }
            println!("{}", parts.join("  "));
        }
        Format::Json => {
            let mut o = serde_json::Map::new();
            for (k, v) in args {
                o.insert((*k).into(), json!(v));
            }
            if let Some(e) = &exact {
                o.insert("exact".into(), json!(e));
            }
            if let Some(x) = &numeric {
                o.insert("value".into(), json!(x));
            }
            emit_json(command, cfg, Value::Array(vec![Value::Object(o)]), vec![]);
        }
        Format::Csv => {
            let mut header: Vec<&str> = args.iter().map(|(k, _)| *k).collect();
            let mut row: Vec<String> = args.iter().map(|(_, v)| v.clone()).collect();
            if let Some(e) = exact.clone() {
                header.push("exact");
                row.push(e);
            }
            if let Some(x) = numeric.clone() {
                header.push("value");
                row.push(x);
            }
            print!("{}", csv_emit(&header, &[row]));
        }
    }
}

fn run_verify(grid: &[u32], cfg: &Config) -> Result<bool, Error> {
    let grid = SuiteGrid {
        r_max: grid[0],
        m_offset_max: grid[1],
    };
    let report = verify::run_suite(grid, cfg.prec)?;
    match cfg.format {
        Format::Plain => {
            for c in &report.results {
                let params: Vec<String> = c
                    .parameters
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect();
                println!(
                    "{} {} ({}) observed={:e} allowed={:e}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.check_name,
                    params.join(", "),
                    c.observed_discrepancy,
                    c.allowed_discrepancy
                );
            }
            println!(
                "{} passed, {} failed",
                report.summary.passed, report.summary.failed
            );
        }
        Format::Json => {
            let v = serde_json::to_value(&report).expect("report json");
            emit_json("verify", cfg, Value::Array(vec![v]), vec![]);
        }
        Format::Csv => {
            let header = ["check_name", "parameters", "passed", "observed", "allowed"];
            let rows: Vec<Vec<String>> = report
                .results
                .iter()
                .map(|c| {
                    let params: Vec<String> = c
                        .parameters
                        .iter()
                        .map(|(k, v)| format!("{k}={v}"))
                        .collect();
                    vec![
                        c.check_name.clone(),
                        params.join(";"),
                        c.passed.to_string(),
                        format!("{:e}", c.observed_discrepancy),
                        format!("{:e}", c.allowed_discrepancy),
                    ]
                })
                .collect();
            print!("{}", csv_emit(&header, &rows));
        }
    }
    Ok(report.all_passed())
}

fn run_table(r_max: u32, m_max: u32, cfg: &Config) -> Result<(), Error> {
    if r_max < 1 || m_max < 2 {
        return Err(Error::domain(
            "the table needs --r-max >= 1 and --m-max >= 2",
        ));
    }
    struct Row {
        r: u32,
        m: u32,
        zd: String,
        pc: String,
        numeric: String,
    }
    let mut rows = Vec::new();
    for r in 1..=r_max {
        for m in (r + 1)..=m_max {
            let e = expr::sigma_closed_form(r, m)?;
            let v: Real = e.evaluate(cfg.prec)?;
            rows.push(Row {
                r,
                m,
                zd: e.render(Basis::ZetaDisplay),
                pc: e.render(Basis::PiCanonical),
                numeric: approx(&v, cfg),
            });
        }
    }
    match cfg.format {
        Format::Plain => {
            for row in &rows {
                println!(
                    "sigma({}, {}) = {}  =  {}  {}",
                    row.r, row.m, row.zd, row.pc, row.numeric
                );
            }
        }
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|row| {
                    json!({
                        "r": row.r,
                        "m": row.m,
                        "symbolic_zeta": row.zd,
                        "symbolic_pi": row.pc,
                        "numeric": row.numeric,
                        "precision_bits": cfg.prec,
                    })
                })
                .collect();
            emit_json("table", cfg, Value::Array(items), vec![]);
        }
        Format::Csv => {
            let header = [
                "r",
                "m",
                "symbolic_zeta",
                "symbolic_pi",
                "numeric",
                "precision_bits",
            ];
            let data: Vec<Vec<String>> = rows
                .iter()
                .map(|row| {
                    vec![
                        row.r.to_string(),
                        row.m.to_string(),
                        row.zd.clone(),
                        row.pc.clone(),
                        row.numeric.clone(),
                        cfg.prec.to_string(),
                    ]
                })
                .collect();
            print!("{}", csv_emit(&header, &data));
        }
    }
    Ok(())
}

fn dispatch(cli: &Cli, cfg: &Config) -> Result<bool, Error> {
    match &cli.command {
        Command::Hh { n, r, decimal } => {
            let v = exact::hyperharmonic_recursive(*n, *r)?;
            let numeric = decimal.then(|| {
                format!(
                    "~{}",
                    Real::from_rational(&v, cfg.prec).to_decimal(cfg.digits())
                )
            });
            emit_scalar(
                "hh",
                &[("n", n.to_string()), ("r", r.to_string())],
                Some(rational_str(&v)),
                numeric,
                cfg,
            );
            Ok(true)
        }
        Command::Sigma { r, m, form } => {
            run_sigma(*r, *m, *form, cfg)?;
            Ok(true)
        }
        Command::Stirling { r, k } => {
            let v = exact::stirling_first(*r, *k)?;
            emit_scalar(
                "stirling",
                &[("r", r.to_string()), ("k", k.to_string())],
                Some(v.to_string()),
                None,
                cfg,
            );
            Ok(true)
        }
        Command::Bernoulli { n } => {
            let v = exact::bernoulli(*n);
            emit_scalar(
                "bernoulli",
                &[("n", n.to_string())],
                Some(rational_str(&v)),
                None,
                cfg,
            );
            Ok(true)
        }
        Command::Zeta { k } => {
            let v: Real = numeric::zeta_numeric(*k, cfg.prec)?;
            emit_scalar(
                "zeta",
                &[("k", k.to_string())],
                None,
                Some(approx(&v, cfg)),
                cfg,
            );
            Ok(true)
        }
        Command::Hurwitz { m, n } => {
            let v: Real = numeric::hurwitz_zeta(*m, *n, cfg.prec)?;
            emit_scalar(
                "hurwitz",
                &[("m", m.to_string()), ("n", n.to_string())],
                None,
                Some(approx(&v, cfg)),
                cfg,
            );
            Ok(true)
        }
        Command::Mu { r, j } => {
            let e = expr::mu_expression(*r, *j)?;
            let v: Real = e.evaluate(cfg.prec)?;
            emit_scalar(
                "mu",
                &[("r", r.to_string()), ("j", j.to_string())],
                Some(e.render(Basis::ZetaDisplay)),
                Some(approx(&v, cfg)),
                cfg,
            );
            Ok(true)
        }
        Command::Verify { grid } => run_verify(grid, cfg),
        Command::Table { r_max, m_max } => {
            run_table(*r_max, *m_max, cfg)?;
            Ok(true)
        }
    }
}

fn command_name(cli: &Cli) -> &'static str {
    match cli.command {
        Command::Hh { .. } => "hh",
        Command::Sigma { .. } => "sigma",
        Command::Stirling { .. } => "stirling",
        Command::Bernoulli { .. } => "bernoulli",
        Command::Zeta { .. } => "zeta",
        Command::Hurwitz { .. } => "hurwitz",
        Command::Mu { .. } => "mu",
        Command::Verify { .. } => "verify",
        Command::Table { .. } => "table",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve_config(&cli.opts) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match dispatch(&cli, &cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            if cfg.format == Format::Json {
                emit_json(
                    command_name(&cli),
                    &cfg,
                    Value::Array(vec![]),
                    vec![e.to_string()],
                );
            }
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
