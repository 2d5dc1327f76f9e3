//! Command-line front end: eval | scan | mu | poles.
//!
//! Scalar results and reports go to stdout as single-line JSON envelopes;
//! scans emit CSV (plus an optional JSON trailer). All floats are printed
//! with 17 significant digits so downstream pins are reproducible.
//!
//! Exit codes: 0 ok, 1 usage, 2 pole proximity, 3 budget/precision
//! exhaustion, 4 bound violation, 5 insufficient data.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qzeta::{
    adaptive_n, check_bound, estimate_mu_from_rows, pole_points, scan_vertical, zeta_q_continued,
    zeta_q_direct, zeta_q_single, LatticeKind, QzetaError, Regressor, RowStatus, ScanRow, ScanSpec,
    TChoice, Tolerance, Window,
};
use std::path::PathBuf;
use std::time::Instant;

const CSV_HEADER: &str = "v,log_abs,arg,pole_margin,skipped,bound_log,terms_used";
const SCHEMA_VERSION: &str = "1";
const MAX_GRID_POINTS: usize = 1_000_000;

#[derive(Parser)]
#[command(
    name = "qzeta",
    version,
    about = "Evaluate the q-analogue of the Riemann zeta function and check its vertical-line growth"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate zeta_q(s,t) or zeta_q(s) at a single point
    Eval(EvalArgs),
    /// Sample |zeta_q| along a vertical line; CSV on stdout
    Scan(ScanArgs),
    /// Least-squares estimate of the growth exponent mu_q(sigma)
    Mu(MuArgs),
    /// List pole-lattice points inside a rectangular window
    Poles(PolesArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Direct,
    Continuation,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegressorArg {
    Auto,
    #[value(name = "log_v")]
    LogV,
    #[value(name = "linear_v")]
    LinearV,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    /// t-plane poles of zeta_q(s,t)
    T,
    /// s-plane poles of zeta_q(s)
    S,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct EvalArgs {
    #[arg(long)]
    q: f64,
    #[arg(long = "s-re")]
    s_re: f64,
    #[arg(long = "s-im", default_value_t = 0.0)]
    s_im: f64,
    #[arg(long = "t-re", conflicts_with = "single")]
    t_re: Option<f64>,
    #[arg(long = "t-im", requires = "t_re", conflicts_with = "single")]
    t_im: Option<f64>,
    /// evaluate the single-variable zeta_q(s) = zeta_q(s, s-1)
    #[arg(long)]
    single: bool,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// truncation level N of the continuation identity
    #[arg(long = "N")]
    n: Option<u32>,
    #[arg(long = "rel-tol")]
    rel_tol: Option<f64>,
    #[arg(long = "max-terms")]
    max_terms: Option<u64>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ScanArgs {
    #[arg(long)]
    q: f64,
    #[arg(long)]
    sigma: f64,
    #[arg(long = "v-from")]
    v_from: f64,
    #[arg(long = "v-to")]
    v_to: f64,
    #[arg(long = "v-step")]
    v_step: f64,
    /// scan the single-variable line t = s - 1
    #[arg(long, conflicts_with = "t_re")]
    single: bool,
    #[arg(long = "t-re")]
    t_re: Option<f64>,
    /// pole-margin threshold below which a row is skipped
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    #[arg(long = "v-min", default_value_t = 10.0)]
    v_min: f64,
    /// append a bound-check JSON trailer; exit 4 on violations
    #[arg(long = "check-bound")]
    check_bound: bool,
    #[arg(long = "rel-tol")]
    rel_tol: Option<f64>,
    #[arg(long = "max-terms")]
    max_terms: Option<u64>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct MuArgs {
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    sigma: f64,
    #[arg(long = "v-from")]
    v_from: Option<f64>,
    #[arg(long = "v-to")]
    v_to: Option<f64>,
    #[arg(long = "v-step")]
    v_step: Option<f64>,
    #[arg(long, conflicts_with = "t_re")]
    single: bool,
    #[arg(long = "t-re")]
    t_re: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    #[arg(long = "v-min", default_value_t = 10.0)]
    v_min: f64,
    #[arg(long, value_enum, default_value_t = RegressorArg::Auto)]
    regressor: RegressorArg,
    /// fit from an existing scan CSV instead of evaluating
    #[arg(long)]
    replay: Option<PathBuf>,
    #[arg(long = "rel-tol")]
    rel_tol: Option<f64>,
    #[arg(long = "max-terms")]
    max_terms: Option<u64>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct PolesArgs {
    #[arg(long)]
    q: f64,
    #[arg(long, value_enum)]
    kind: KindArg,
    /// four values: re_min re_max im_min im_max
    #[arg(long, required = true, num_args = 4,
          value_names = ["RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"])]
    window: Vec<f64>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Mu(a) => cmd_mu(a),
        Command::Poles(a) => cmd_poles(a),
    };
    std::process::exit(code);
}

fn usage(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    1
}

fn report(e: &QzetaError) -> i32 {
    eprintln!("error: {e}");
    match e {
        QzetaError::InvalidParameter(_) | QzetaError::Domain(_) => 1,
        QzetaError::PoleProximity { .. }
        | QzetaError::GammaPole { .. }
        | QzetaError::ZetaPole { .. } => 2,
        QzetaError::BudgetExceeded { .. } | QzetaError::PrecisionLoss { .. } => 3,
        QzetaError::InsufficientData { .. } => 5,
    }
}

/// JSON float: 17 significant digits; non-finite maps to null.
fn jf(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

fn jopt(x: Option<f64>) -> String {
    x.map_or_else(|| "null".to_string(), jf)
}

/// CSV float cell, empty when absent.
fn cf(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| format!("{v:.16e}"))
}

fn resolve_tolerance(rel_tol: Option<f64>, max_terms: Option<u64>) -> Result<Tolerance, String> {
    let mut tol = Tolerance::default();
    if let Some(r) = rel_tol {
        tol.rel_tol = r;
    }
    if let Some(m) = max_terms {
        tol.max_terms = m;
    } else if let Ok(v) = std::env::var("QZETA_MAX_TERMS") {
        tol.max_terms = v
            .parse()
            .map_err(|_| format!("QZETA_MAX_TERMS must be a positive integer, got {v:?}"))?;
    }
    tol.validate().map_err(|e| e.to_string())?;
    Ok(tol)
}

fn cmd_eval(a: EvalArgs) -> i32 {
    let start = Instant::now();
    if !a.single && a.t_re.is_none() {
        return usage("eval needs either --single or --t-re (with optional --t-im)");
    }
    if a.single && (a.method.is_some() || a.n.is_some()) {
        return usage("--method and --N apply only to two-variable evaluation; drop them with --single");
    }
    if matches!(a.method, Some(MethodArg::Direct)) && a.n.is_some() {
        return usage("--N contradicts --method direct");
    }
    let q = match qzeta::QParameter::new(a.q) {
        Ok(q) => q,
        Err(e) => return report(&e),
    };
    let tol = match resolve_tolerance(a.rel_tol, a.max_terms) {
        Ok(t) => t,
        Err(m) => return usage(&m),
    };
    let s = Complex64::new(a.s_re, a.s_im);
    let (t, n_used, outcome) = if a.single {
        (s - Complex64::new(1.0, 0.0), None, zeta_q_single(q, s, tol))
    } else {
        let t = Complex64::new(a.t_re.unwrap(), a.t_im.unwrap_or(0.0));
        let method = a.method.unwrap_or(MethodArg::Auto);
        let use_direct = match method {
            MethodArg::Direct => true,
            MethodArg::Continuation => false,
            MethodArg::Auto => t.re > 0.1 && a.n.is_none(),
        };
        if use_direct {
            (t, None, zeta_q_direct(q, s, t, tol))
        } else {
            let n = a.n.unwrap_or_else(|| adaptive_n(q, s.im.abs()));
            (t, Some(n), zeta_q_continued(q, s, t, n, tol))
        }
    };
    let res = match outcome {
        Ok(r) => r,
        Err(e) => return report(&e),
    };
    let value = match res.value {
        Some(v) => format!("{{\"re\":{},\"im\":{}}}", jf(v.re), jf(v.im)),
        None => "null".to_string(),
    };
    let n_json = n_used.map_or_else(|| "null".to_string(), |n| n.to_string());
    println!(
        "{{\"schema_version\":\"{SCHEMA_VERSION}\",\"command\":\"eval\",\
         \"parameters\":{{\"q\":{},\"s_re\":{},\"s_im\":{},\"t_re\":{},\"t_im\":{},\
         \"single\":{},\"method\":\"{}\",\"n\":{},\"rel_tol\":{},\"max_terms\":{}}},\
         \"value\":{},\"log_abs\":{},\"arg\":{},\"method\":\"{}\",\
         \"diagnostics\":{{\"terms_used\":{},\"tail_bound\":{},\"pole_margin\":{},\"wall_time_ms\":{}}}}}",
        jf(a.q),
        jf(a.s_re),
        jf(a.s_im),
        jf(t.re),
        jf(t.im),
        a.single,
        res.method,
        n_json,
        jf(tol.rel_tol),
        tol.max_terms,
        value,
        jf(res.log_value.log_abs),
        jf(res.log_value.arg),
        res.method,
        res.terms_used,
        jf(res.tail_bound),
        jf(res.pole_margin),
        jf(start.elapsed().as_secs_f64() * 1e3),
    );
    0
}

fn build_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, String> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(format!("--v-step must be positive, got {step}"));
    }
    if !from.is_finite() || !to.is_finite() || from > to {
        return Err(format!("invalid v range [{from}, {to}]"));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize + 1;
    if n > MAX_GRID_POINTS {
        return Err(format!("v grid would have {n} points (limit {MAX_GRID_POINTS})"));
    }
    Ok((0..n).map(|i| from + step * i as f64).collect())
}

fn make_spec(
    q: f64,
    sigma: f64,
    single: bool,
    t_re: Option<f64>,
    vs: Vec<f64>,
    epsilon: f64,
    v_min: f64,
    tol: Tolerance,
) -> Result<ScanSpec, QzetaError> {
    let q = qzeta::QParameter::new(q)?;
    let t_choice = if single {
        TChoice::SingleLine
    } else {
        TChoice::Fixed(t_re.expect("caller checked --t-re"))
    };
    let mut spec = ScanSpec::new(q, sigma, t_choice, vs);
    spec.epsilon = epsilon;
    spec.v_min = v_min;
    spec.tol = tol;
    Ok(spec)
}

fn csv_row(r: &ScanRow) -> String {
    format!(
        "{:.16e},{},{},{:.16e},{},{:.16e},{}",
        r.v,
        cf(r.log_abs),
        cf(r.arg),
        r.pole_margin,
        if r.usable() { 0 } else { 1 },
        r.bound_log,
        r.terms_used
    )
}

fn scan_parameters_json(
    q: f64,
    sigma: f64,
    v_from: f64,
    v_to: f64,
    v_step: f64,
    single: bool,
    t_re: Option<f64>,
    epsilon: f64,
    v_min: f64,
    tol: Tolerance,
) -> String {
    format!(
        "{{\"q\":{},\"sigma\":{},\"v_from\":{},\"v_to\":{},\"v_step\":{},\"single\":{},\
         \"t_re\":{},\"epsilon\":{},\"v_min\":{},\"rel_tol\":{},\"max_terms\":{}}}",
        jf(q),
        jf(sigma),
        jf(v_from),
        jf(v_to),
        jf(v_step),
        single,
        jopt(t_re),
        jf(epsilon),
        jf(v_min),
        jf(tol.rel_tol),
        tol.max_terms
    )
}

fn cmd_scan(a: ScanArgs) -> i32 {
    let start = Instant::now();
    if !a.single && a.t_re.is_none() {
        return usage("scan needs either --single or --t-re");
    }
    let tol = match resolve_tolerance(a.rel_tol, a.max_terms) {
        Ok(t) => t,
        Err(m) => return usage(&m),
    };
    let vs = match build_grid(a.v_from, a.v_to, a.v_step) {
        Ok(v) => v,
        Err(m) => return usage(&m),
    };
    let spec = match make_spec(a.q, a.sigma, a.single, a.t_re, vs, a.epsilon, a.v_min, tol) {
        Ok(s) => s,
        Err(e) => return report(&e),
    };
    let rows = match scan_vertical(&spec) {
        Ok(r) => r,
        Err(e) => return report(&e),
    };
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &rows {
        out.push_str(&csv_row(r));
        out.push('\n');
    }
    print!("{out}");
    if !a.check_bound {
        return 0;
    }
    let rep = match check_bound(&rows, spec.regime()) {
        Ok(r) => r,
        Err(e) => return report(&e),
    };
    let evaluated = rows.iter().filter(|r| r.usable()).count();
    let terms: u64 = rows.iter().map(|r| r.terms_used).sum();
    println!(
        "{{\"schema_version\":\"{SCHEMA_VERSION}\",\"command\":\"scan\",\"parameters\":{},\
         \"check\":{{\"violations\":{},\"fitted_constant\":{},\"max_ratio_log\":{},\
         \"calibration_rows\":{},\"verification_rows\":{}}},\
         \"diagnostics\":{{\"rows\":{},\"evaluated\":{},\"terms_used\":{},\"wall_time_ms\":{}}}}}",
        scan_parameters_json(
            a.q, a.sigma, a.v_from, a.v_to, a.v_step, a.single, a.t_re, a.epsilon, a.v_min, tol
        ),
        rep.violations,
        jf(rep.fitted_constant),
        jf(rep.max_ratio_log),
        rep.calibration_rows,
        rep.verification_rows,
        rows.len(),
        evaluated,
        terms,
        jf(start.elapsed().as_secs_f64() * 1e3),
    );
    if rep.violations > 0 {
        4
    } else {
        0
    }
}

fn parse_csv(path: &PathBuf) -> Result<Vec<ScanRow>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        _ => return Err(format!("{} does not start with the scan CSV header", path.display())),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() || line.starts_with('{') {
            continue; // blank line or JSON trailer from --check-bound
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(format!("line {}: expected 7 fields, got {}", i + 2, fields.len()));
        }
        let num = |j: usize| -> Result<f64, String> {
            fields[j]
                .parse()
                .map_err(|_| format!("line {}: bad number {:?}", i + 2, fields[j]))
        };
        let opt = |j: usize| -> Result<Option<f64>, String> {
            if fields[j].is_empty() {
                Ok(None)
            } else {
                num(j).map(Some)
            }
        };
        let skipped = match fields[4] {
            "0" => false,
            "1" => true,
            other => return Err(format!("line {}: skipped flag must be 0 or 1, got {other:?}", i + 2)),
        };
        let log_abs = opt(1)?;
        if !skipped && log_abs.is_none() {
            return Err(format!("line {}: unskipped row without log_abs", i + 2));
        }
        rows.push(ScanRow {
            v: num(0)?,
            log_abs,
            arg: opt(2)?,
            pole_margin: num(3)?,
            status: if skipped { RowStatus::Skipped } else { RowStatus::Evaluated },
            bound_log: num(5)?,
            terms_used: fields[6]
                .parse()
                .map_err(|_| format!("line {}: bad terms_used {:?}", i + 2, fields[6]))?,
        });
    }
    Ok(rows)
}

fn cmd_mu(a: MuArgs) -> i32 {
    let start = Instant::now();
    let regressor = match a.regressor {
        RegressorArg::Auto => qzeta::auto_regressor(a.sigma),
        RegressorArg::LogV => Regressor::LogV,
        RegressorArg::LinearV => Regressor::LinearV,
    };
    let (rows, params_json) = if let Some(path) = &a.replay {
        let rows = match parse_csv(path) {
            Ok(r) => r,
            Err(m) => return usage(&m),
        };
        let params = format!(
            "{{\"sigma\":{},\"regressor_arg\":\"{:?}\",\"replay\":{:?}}}",
            jf(a.sigma),
            regressor,
            path.display().to_string()
        );
        (rows, params)
    } else {
        let (q, v_from, v_to, v_step) = match (a.q, a.v_from, a.v_to, a.v_step) {
            (Some(q), Some(f), Some(t), Some(s)) => (q, f, t, s),
            _ => return usage("mu needs --q, --v-from, --v-to, --v-step (or --replay)"),
        };
        if !a.single && a.t_re.is_none() {
            return usage("mu needs either --single or --t-re");
        }
        let tol = match resolve_tolerance(a.rel_tol, a.max_terms) {
            Ok(t) => t,
            Err(m) => return usage(&m),
        };
        let vs = match build_grid(v_from, v_to, v_step) {
            Ok(v) => v,
            Err(m) => return usage(&m),
        };
        let spec = match make_spec(q, a.sigma, a.single, a.t_re, vs, a.epsilon, a.v_min, tol) {
            Ok(s) => s,
            Err(e) => return report(&e),
        };
        let rows = match scan_vertical(&spec) {
            Ok(r) => r,
            Err(e) => return report(&e),
        };
        let params = scan_parameters_json(
            q, a.sigma, v_from, v_to, v_step, a.single, a.t_re, a.epsilon, a.v_min, tol,
        );
        (rows, params)
    };
    let est = match estimate_mu_from_rows(&rows, a.sigma, regressor) {
        Ok(e) => e,
        Err(e) => return report(&e),
    };
    println!(
        "{{\"schema_version\":\"{SCHEMA_VERSION}\",\"command\":\"mu\",\"parameters\":{},\
         \"mu\":{{\"sigma\":{},\"slope\":{},\"intercept\":{},\"regressor\":\"{}\",\
         \"residual_rms\":{},\"n_points\":{}}},\
         \"diagnostics\":{{\"rows\":{},\"wall_time_ms\":{}}}}}",
        params_json,
        jf(est.sigma),
        jf(est.slope),
        jf(est.intercept),
        est.regressor,
        jf(est.residual_rms),
        est.n_points,
        rows.len(),
        jf(start.elapsed().as_secs_f64() * 1e3),
    );
    0
}

fn cmd_poles(a: PolesArgs) -> i32 {
    let start = Instant::now();
    let q = match qzeta::QParameter::new(a.q) {
        Ok(q) => q,
        Err(e) => return report(&e),
    };
    let w = match Window::new(a.window[0], a.window[1], a.window[2], a.window[3]) {
        Ok(w) => w,
        Err(e) => return report(&e),
    };
    let kind = match a.kind {
        KindArg::T => LatticeKind::TwoVariable,
        KindArg::S => LatticeKind::SingleVariable,
    };
    let pts = pole_points(q, kind, w);
    let body: Vec<String> = pts
        .iter()
        .map(|z| format!("{{\"re\":{},\"im\":{}}}", jf(z.re), jf(z.im)))
        .collect();
    println!(
        "{{\"schema_version\":\"{SCHEMA_VERSION}\",\"command\":\"poles\",\
         \"parameters\":{{\"q\":{},\"kind\":\"{}\",\"window\":[{},{},{},{}]}},\
         \"poles\":[{}],\"count\":{},\
         \"diagnostics\":{{\"wall_time_ms\":{}}}}}",
        jf(a.q),
        match a.kind {
            KindArg::T => "t",
            KindArg::S => "s",
        },
        jf(a.window[0]),
        jf(a.window[1]),
        jf(a.window[2]),
        jf(a.window[3]),
        body.join(","),
        pts.len(),
        jf(start.elapsed().as_secs_f64() * 1e3),
    );
    0
}
