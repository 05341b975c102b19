//! `specexp`: batch front end for heat coefficients, cosmology tables,
//! packed-sphere expansions and the verification suites.
//!
//! Exit codes: 0 success, 2 invalid input, 3 golden mismatch, 4 failed
//! numerical verification.

mod config;
mod verify;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};
use specexp::expansion::{a2m_checked, eval_family, ScaleFactor, DEFAULT_MAX_ORDER};
use specexp::golden::{golden_a_form, golden_ab, MAX_GOLDEN};
use specexp::pscc::{
    evaluate_terms, reconciliation_report, round_heat_expansion, spectral_action, ExpansionTerm, Geometry,
    TermKind, TestFunctionMoments,
};
use specexp::zeta::FractalString;

use config::RunConfig;
use verify::{Suite, VerifyOptions};

/// Error classes mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Golden(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Validation(_) => 2,
            Self::Golden(_) => 3,
            Self::Numeric(_) => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Validation(m) => write!(f, "error: {m}"),
            Self::Golden(m) => write!(f, "golden mismatch: {m}"),
            Self::Numeric(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<specexp::Error> for Failure {
    fn from(e: specexp::Error) -> Self {
        match e {
            specexp::Error::Numeric(_) => Self::Numeric(e.to_string()),
            other => Self::Validation(other.to_string()),
        }
    }
}

macro_rules! keyword_enum {
    ($name:ident { $($variant:ident => $text:literal),* $(,)? }) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq)]
        enum $name { $($variant),* }

        impl FromStr for $name {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s.to_ascii_lowercase().as_str() {
                    $($text => Ok(Self::$variant),)*
                    _ => Err(format!("unknown value `{s}`, expected one of: {}", [$($text),*].join(", "))),
                }
            }
        }
    };
}

keyword_enum!(Format { Text => "text", Latex => "latex", Json => "json", Csv => "csv" });
keyword_enum!(Form { Ab => "ab", A => "a" });
keyword_enum!(Family { Inflation => "inflation", Radiation => "radiation", Matter => "matter", Empty => "empty", Sphere => "sphere" });
keyword_enum!(GeometryKind { S4 => "s4", Rw => "rw" });

#[derive(Parser)]
#[command(name = "specexp", version, about = "Heat-kernel and spectral action expansions")]
struct Cli {
    /// Flat key=value file with defaults for any option below.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the heat coefficient a_{2M}.
    Coeff(CoeffArgs),
    /// Tabulate a_{2M}(t) for a scale-factor family.
    Eval(EvalArgs),
    /// Heat-trace or spectral-action expansion of a packed geometry.
    Pscc(PsccArgs),
    /// Run the seeded verification suites and print a JSON report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CoeffArgs {
    #[arg(long)]
    order: Option<u32>,
    /// ab (A, B variables) or a (scale factor).
    #[arg(long)]
    form: Option<Form>,
    /// text, latex or json.
    #[arg(long)]
    format: Option<Format>,
    /// Complexity guard on the order.
    #[arg(long = "max-order")]
    max_order: Option<u32>,
    /// Compare against the bundled reference coefficients.
    #[arg(long = "check-golden")]
    check_golden: bool,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    family: Option<Family>,
    #[arg(long = "H")]
    h: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long = "maxM")]
    max_m: Option<u32>,
    /// text, json or csv.
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Args)]
struct PsccArgs {
    /// Built-in name (ford, unit, pair) or path to a JSON descriptor.
    #[arg(long)]
    string: Option<String>,
    #[arg(long)]
    geometry: Option<GeometryKind>,
    /// Scale-factor family for the rw geometry.
    #[arg(long)]
    family: Option<Family>,
    #[arg(long = "H")]
    h: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    /// Cutoff at which the expansion is evaluated.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long = "maxM")]
    max_m: Option<u32>,
    /// gaussian or gaussian:<s> for f(x) = exp(-s x^2).
    #[arg(long)]
    testfn: Option<String>,
    /// text, json or csv.
    #[arg(long)]
    format: Option<Format>,
    /// Drop the string-pole terms.
    #[arg(long = "no-poles")]
    no_poles: bool,
    /// Print the heat-trace expansion in tau instead of the spectral action.
    #[arg(long)]
    heat: bool,
    /// Compare the Ford S4 packing coefficients with the published constants.
    #[arg(long = "reconcile-paper")]
    reconcile_paper: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// bridge, dawson, mellin, bell or all.
    #[arg(long)]
    suite: Option<Suite>,
    #[arg(long)]
    seed: Option<u64>,
    /// Random draws per identity.
    #[arg(long)]
    draws: Option<usize>,
    /// Draws for the 4-dimensional Dawson check.
    #[arg(long = "draws-n4")]
    draws_n4: Option<usize>,
    #[arg(long = "qmc-points")]
    qmc_points: Option<u64>,
    /// Monte-Carlo bridge paths.
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    grid: Option<usize>,
    /// Number of random moment specs.
    #[arg(long)]
    specs: Option<usize>,
    #[arg(long = "bell-order")]
    bell_order: Option<u32>,
    /// Highest M for the grading check.
    #[arg(long = "maxM")]
    max_m: Option<u32>,
    /// Tolerance override for the Dawson (n <= 3) and Mellin checks.
    #[arg(long)]
    tol: Option<f64>,
}

fn family(f: Family, h: Option<f64>) -> Result<ScaleFactor, Failure> {
    let need_h = || {
        let h = h.ok_or_else(|| Failure::Validation("--H is required for this family".into()))?;
        if !(h > 0.0 && h.is_finite()) {
            return Err(Failure::Validation(format!("H must be positive, got {h}")));
        }
        Ok(h)
    };
    Ok(match f {
        Family::Inflation => ScaleFactor::Inflation { h: need_h()? },
        Family::Radiation => ScaleFactor::Radiation { h: need_h()? },
        Family::Matter => ScaleFactor::Matter { h: need_h()? },
        Family::Empty => ScaleFactor::Empty { h: need_h()? },
        Family::Sphere => ScaleFactor::Sphere,
    })
}

fn coeff(cfg: &RunConfig, a: CoeffArgs) -> Result<String, Failure> {
    let order = cfg.pick(a.order, "order", 0)?;
    let form = cfg.pick(a.form, "form", Form::Ab)?;
    let format = cfg.pick(a.format, "format", Format::Text)?;
    let max_order = cfg.pick(a.max_order, "max-order", DEFAULT_MAX_ORDER)?;
    let p = a2m_checked(order, max_order)?;
    if a.check_golden {
        if order > MAX_GOLDEN {
            return Err(Failure::Validation(format!("no reference coefficient for M = {order}")));
        }
        let diff = p.sub(&golden_ab(order)?);
        if !diff.is_empty() {
            return Err(Failure::Golden(format!("a_{} differs in {} monomials", 2 * order, diff.len())));
        }
        if p.to_a_form() != golden_a_form(order)? {
            return Err(Failure::Golden(format!("a_{} differs in the scale-factor form", 2 * order)));
        }
    }
    let out = match (form, format) {
        (Form::Ab, Format::Text) => p.to_text(),
        (Form::Ab, Format::Latex) => p.to_latex(),
        (Form::Ab, Format::Json) => p.to_json_string(),
        (Form::A, Format::Text) => p.to_a_form().to_text(),
        (Form::A, Format::Latex) => p.to_a_form().to_latex(),
        (Form::A, Format::Json) => p.to_a_form().to_json_string(),
        (_, Format::Csv) => return Err(Failure::Validation("coeff supports text, latex and json".into())),
    };
    let mut out = out;
    if a.check_golden {
        out.push_str(&format!("\n# a_{} matches the reference", 2 * order));
    }
    Ok(out)
}

fn eval(cfg: &RunConfig, a: EvalArgs) -> Result<String, Failure> {
    let fam = cfg
        .opt(a.family, "family")?
        .ok_or_else(|| Failure::Validation("--family is required".into()))?;
    let f = family(fam, cfg.opt(a.h, "H")?)?;
    let t = cfg.opt(a.t, "t")?.ok_or_else(|| Failure::Validation("--t is required".into()))?;
    let max_m = cfg.pick(a.max_m, "maxM", 2)?;
    let format = cfg.pick(a.format, "format", Format::Text)?;
    if !f.admissible(t) || f.deriv(0, t) == 0.0 {
        return Err(Failure::Validation(format!("a(t) vanishes or is undefined at t = {t} for the {} family", f.name())));
    }
    let mut rows = Vec::new();
    for m in 0..=max_m {
        let v = eval_family(&a2m_checked(m, DEFAULT_MAX_ORDER)?, f, t);
        if !v.is_finite() {
            return Err(Failure::Validation(format!("a_{} is singular at t = {t}", 2 * m)));
        }
        rows.push((m, 2 * m as i64 - 4, v));
    }
    Ok(match format {
        Format::Json => {
            let list: Vec<Value> = rows.iter().map(|(m, e, v)| json!({"M": m, "exponent": e, "value": v})).collect();
            serde_json::to_string_pretty(&json!({"family": f.name(), "t": t, "rows": list})).expect("json")
        }
        Format::Csv => {
            let mut s = String::from("exponent,re,im,kind\n");
            for (m, e, v) in &rows {
                let _ = writeln!(s, "{e},{v:e},0,bulk:{m}");
            }
            s
        }
        Format::Text => {
            let mut s = format!("# {} t={t}\n{:<6} {:<8} {}\n", f.name(), "M", "2M-4", "a_2M");
            for (m, e, v) in &rows {
                let _ = writeln!(s, "{m:<6} {e:<8} {v:.15e}");
            }
            s
        }
        Format::Latex => return Err(Failure::Validation("eval supports text, json and csv".into())),
    })
}

fn load_string(spec: &str) -> Result<FractalString, Failure> {
    if let Some(s) = FractalString::builtin(spec) {
        return Ok(s);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Failure::Validation(format!("`{spec}` is neither a built-in string nor a readable file")));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Validation(format!("{spec}: {e}")))?;
    Ok(FractalString::from_json_str(&text)?)
}

fn test_function(spec: &str) -> Result<TestFunctionMoments, Failure> {
    let (name, arg) = spec.split_once(':').unwrap_or((spec, "1"));
    match name {
        "gaussian" => {
            let s: f64 = arg.parse().map_err(|_| Failure::Validation(format!("bad Gaussian width `{arg}`")))?;
            Ok(TestFunctionMoments::gaussian(s)?)
        }
        other => Err(Failure::Validation(format!("unknown test function `{other}`"))),
    }
}

fn kind_label(t: &ExpansionTerm) -> String {
    match (t.kind, t.log_periodic.is_some()) {
        (TermKind::Bulk(m), _) => format!("bulk:{m}"),
        (TermKind::Pole(_), true) => "logperiodic".into(),
        (TermKind::Pole(_), false) => "pole".into(),
    }
}

fn fmt_exponent(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn pscc(cfg: &RunConfig, a: PsccArgs) -> Result<(String, bool), Failure> {
    let format = cfg.pick(a.format, "format", Format::Text)?;
    if a.reconcile_paper {
        let report = reconciliation_report()?;
        let ok = report.passes();
        let out = match format {
            Format::Json => {
                let rows: Vec<Value> = report
                    .rows
                    .iter()
                    .map(|r| {
                        json!({
                            "term": r.term,
                            "printed": r.printed.to_string(),
                            "pipeline": r.pipeline.to_string(),
                            "ratio": r.ratio.as_ref().map(|x| x.to_string()),
                            "matches": r.matches,
                            "mellin": r.mellin.to_string(),
                        })
                    })
                    .collect();
                serde_json::to_string_pretty(&json!({"rows": rows, "pass": ok})).expect("json")
            }
            _ => format!("{report}{}", if ok { "Lambda^2 and Lambda^4 agree\n" } else { "Lambda^2/Lambda^4 disagree\n" }),
        };
        return Ok((out, ok));
    }
    let string = load_string(&cfg.pick(a.string, "string", "ford".to_string())?)?;
    let geometry = match cfg.pick(a.geometry, "geometry", GeometryKind::S4)? {
        GeometryKind::S4 => Geometry::S4,
        GeometryKind::Rw => {
            let fam = cfg
                .opt(a.family, "family")?
                .ok_or_else(|| Failure::Validation("--family is required for the rw geometry".into()))?;
            let t = cfg.opt(a.t, "t")?.ok_or_else(|| Failure::Validation("--t is required for the rw geometry".into()))?;
            Geometry::Rw { family: family(fam, cfg.opt(a.h, "H")?)?, t }
        }
    };
    let max_m = cfg.pick(a.max_m, "maxM", 2)?;
    let lambda = cfg.opt(a.lambda, "lambda")?;
    if let Some(l) = lambda {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Failure::Validation(format!("lambda must be positive, got {l}")));
        }
    }
    let testfn = test_function(&cfg.pick(a.testfn, "testfn", "gaussian".to_string())?)?;
    let include_poles = !a.no_poles;
    let (terms, var) = if a.heat {
        (round_heat_expansion(&string, max_m, &geometry, include_poles)?, "tau")
    } else {
        (spectral_action(&string, &testfn, max_m, &geometry, include_poles)?, "Lambda")
    };
    // heat traces are evaluated at tau = 1/Lambda
    let x = lambda.map(|l| if a.heat { 1.0 / l } else { l });
    let total = x.map(|x| evaluate_terms(&terms, x));
    let out = match format {
        Format::Json => {
            let list: Vec<Value> = terms
                .iter()
                .map(|t| {
                    let mut v = t.to_json();
                    if let Some(x) = x {
                        let e = t.eval(x);
                        v["valueAt"] = json!({"re": e.re, "im": e.im});
                    }
                    v
                })
                .collect();
            let mut doc = json!({
                "string": string.name(),
                "variable": var,
                "maxM": max_m,
                "testfn": testfn.name,
                "terms": list,
            });
            if let (Some(l), Some(tot)) = (lambda, total) {
                doc["lambda"] = json!(l);
                doc["total"] = json!({"re": tot.re, "im": tot.im});
            }
            serde_json::to_string_pretty(&doc).expect("json")
        }
        Format::Csv => {
            let mut s = String::from("exponent,re,im,kind\n");
            for t in &terms {
                let v = t.coeff.value();
                let _ = writeln!(s, "{},{:e},{:e},{}", fmt_exponent(t.exponent), v.re, v.im, kind_label(t));
            }
            s
        }
        Format::Text => {
            let mut s = format!("# string={} variable={var} maxM={max_m} testfn={}\n", string.name(), testfn.name);
            for t in &terms {
                let _ = write!(s, "{t}");
                if let Some(x) = x {
                    let _ = write!(s, "  value={:+.12e}", t.eval(x).re);
                }
                s.push('\n');
            }
            if let (Some(l), Some(tot)) = (lambda, total) {
                let _ = writeln!(s, "# total at {var}={}: {:+.12e}{:+.3e}i", x.unwrap_or(l), tot.re, tot.im);
            }
            s
        }
        Format::Latex => return Err(Failure::Validation("pscc supports text, json and csv".into())),
    };
    Ok((out, true))
}

fn run_verify(cfg: &RunConfig, a: VerifyArgs) -> Result<(String, bool), Failure> {
    let suite = cfg.pick(a.suite, "suite", Suite::All)?;
    let o = VerifyOptions {
        seed: cfg.pick(a.seed, "seed", 0)?,
        draws: cfg.pick(a.draws, "draws", 20)?,
        draws_n4: cfg.pick(a.draws_n4, "draws-n4", 5)?,
        qmc_points: cfg.pick(a.qmc_points, "qmc-points", 10_000_000)?,
        paths: cfg.pick(a.paths, "paths", 200_000)?,
        grid: cfg.pick(a.grid, "grid", 1024)?,
        specs: cfg.pick(a.specs, "specs", 10)?,
        bell_order: cfg.pick(a.bell_order, "bell-order", 6)?,
        max_m: cfg.pick(a.max_m, "maxM", DEFAULT_MAX_ORDER)?,
        tol: cfg.opt(a.tol, "tol")?,
    };
    if let Some(t) = o.tol {
        if !(t > 0.0) {
            return Err(Failure::Validation(format!("tolerance must be positive, got {t}")));
        }
    }
    let (report, pass) = verify::run(suite, &o)?;
    Ok((serde_json::to_string_pretty(&report).expect("json"), pass))
}

fn configure_threads(cfg: &RunConfig) -> Result<(), Failure> {
    let from_env = match std::env::var("SPECEXP_THREADS") {
        Ok(v) => Some(v.parse::<usize>().map_err(|_| Failure::Validation(format!("SPECEXP_THREADS=`{v}` is not a count")))?),
        Err(_) => None,
    };
    if let Some(n) = cfg.opt(from_env, "threads")? {
        if n == 0 {
            return Err(Failure::Validation("thread count must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Validation(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<String, Failure> {
    let cfg = RunConfig::load(cli.config.as_deref())?;
    configure_threads(&cfg)?;
    match cli.command {
        Command::Coeff(a) => coeff(&cfg, a),
        Command::Eval(a) => eval(&cfg, a),
        Command::Pscc(a) => {
            let (out, ok) = pscc(&cfg, a)?;
            if ok {
                Ok(out)
            } else {
                print!("{out}");
                Err(Failure::Numeric("reconciliation rows Lambda^2/Lambda^4 do not match".into()))
            }
        }
        Command::Verify(a) => {
            let (out, ok) = run_verify(&cfg, a)?;
            println!("{out}");
            if ok {
                Ok(String::new())
            } else {
                Err(Failure::Numeric("at least one check failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            if !out.is_empty() {
                print!("{out}");
                if !out.ends_with('\n') {
                    println!();
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
