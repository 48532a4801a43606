//! Command-line frontend.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Map, Number, Value};

use crate::error::SkinError;
use crate::oracle::{solve_bvp, OracleConfig};
use crate::params::{KineticParams, PhysicalParams, VC_FACTOR};
use crate::specfun::{self, HalfPlaneSide};
use crate::spectrum::{self, CurvePoints, DomainClass};
use crate::solution::{self, local_impedance, Solution};

/// Default transport parameters of `validate`.
pub const DEFAULT_POINT: (f64, f64, f64) = (0.5, 1e-3, 1.0);

#[derive(Debug, Parser)]
#[command(name = "skinfx", version, about = "Surface impedance of a half-space plasma with diffuse electron reflection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Surface impedance Z (units of 1/c) and e'(0).
    #[command(after_help = "CSV columns: re_z,im_z,re_e_prime_0,im_e_prime_0,kappa")]
    Impedance(PointArgs),
    /// Index and decaying zeros of the dispersion function.
    #[command(after_help = "CSV columns: index,re_eta,im_eta,residual")]
    Spectrum(PointArgs),
    /// Sweep of the (gamma, eps) plane at fixed v_c.
    #[command(after_help = "CSV columns: gamma,eps,delta1,delta2,class,kappa\n\
        gamma and eps run over cell centres of [0, extent·v_c]; kappa is empty where the index is undefined.")]
    Domain(DomainArgs),
    /// Λ in the δ plane, or L(v_c) in the (gamma, eps) plane.
    #[command(after_help = "CSV columns: mu,delta1,delta2 (lambda) or mu,gamma,eps (L).\n\
        Rows run over the + branch with μ ascending, then the - branch with μ descending.")]
    Curves(CurveArgs),
    /// Field profile e(x) normalized to e(0) = 1.
    #[command(after_help = "CSV columns: x,re_e,im_e")]
    Profile(ProfileArgs),
    /// Compare the analytic solution with the direct solver and internal checks.
    #[command(after_help = "Prints one PASS/FAIL row per check; exit status 3 if any row fails.")]
    Validate(PointArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Lambda,
    #[value(name = "L")]
    L,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// ωτ
    #[arg(long = "omega-tau")]
    pub omega_tau: Option<f64>,
    /// Q = ωl/c
    #[arg(long = "Q")]
    pub q: Option<f64>,
    /// Anomaly parameter α
    #[arg(long)]
    pub alpha: Option<f64>,
    /// ω/ω_p
    #[arg(long)]
    pub gamma: Option<f64>,
    /// ν/ω_p
    #[arg(long)]
    pub eps: Option<f64>,
    /// v_T/c
    #[arg(long)]
    pub vtc: Option<f64>,
    /// Reduced thermal speed √(π/4)·v_T/c, alternative to --vtc
    #[arg(long)]
    pub vc: Option<f64>,
    /// Flat key = value file with the same keys as the flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Relative tolerance of the oracle comparison in `validate`.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Truncation of the direct solver in `validate`.
    #[arg(long)]
    pub xmax: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct DomainArgs {
    #[arg(long)]
    pub vc: Option<f64>,
    /// Cells per axis.
    #[arg(long, default_value_t = 40)]
    pub grid: usize,
    /// Half-width of the box in units of v_c.
    #[arg(long, default_value_t = 4.0)]
    pub extent: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    #[arg(long)]
    pub vc: Option<f64>,
    /// Samples per branch.
    #[arg(long, default_value_t = 601)]
    pub points: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// End of the x grid (mean free paths); default from the slowest decay.
    #[arg(long)]
    pub xmax: Option<f64>,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(SkinError),
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(SkinError::ParameterDomain(_)) => 1,
            CliError::Numerical(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Numerical(e) => write!(f, "error [{}]: {e}", e.stage()),
            CliError::Validation(m) => write!(f, "validation failed: {m}"),
        }
    }
}

impl From<SkinError> for CliError {
    fn from(e: SkinError) -> Self {
        CliError::Numerical(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parse arguments and run; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Impedance(a) => cmd_impedance(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Domain(a) => cmd_domain(a),
        Command::Curves(a) => cmd_curves(a),
        Command::Profile(a) => cmd_profile(a),
        Command::Validate(a) => cmd_validate(a),
    }
}

// ---------------------------------------------------------------- parameters

/// Flat `key = value` config; blank lines and `#` comments are skipped.
pub fn read_config(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("{}:{}: expected key = value", path.display(), n + 1)))?;
        let k = k.trim().trim_start_matches("--").to_string();
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

fn file_value(map: &BTreeMap<String, String>, key: &str) -> CliResult<Option<f64>> {
    map.get(key)
        .map(|v| v.parse::<f64>().map_err(|_| CliError::Usage(format!("config key {key}: cannot parse {v:?}"))))
        .transpose()
}

fn merged(flag: Option<f64>, map: &BTreeMap<String, String>, key: &str) -> CliResult<Option<f64>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => file_value(map, key),
    }
}

fn load_config(path: &Option<PathBuf>) -> CliResult<BTreeMap<String, String>> {
    match path {
        Some(p) => read_config(p),
        None => Ok(BTreeMap::new()),
    }
}

/// Resolve one parameter point; `default` is used when neither set is given.
pub fn resolve_params(p: &ParamArgs, default: Option<(f64, f64, f64)>) -> CliResult<KineticParams> {
    let file = load_config(&p.config)?;
    let wt = merged(p.omega_tau, &file, "omega-tau")?;
    let q = merged(p.q, &file, "Q")?;
    let alpha = merged(p.alpha, &file, "alpha")?;
    let gamma = merged(p.gamma, &file, "gamma")?;
    let eps = merged(p.eps, &file, "eps")?;
    let vtc = merged(p.vtc, &file, "vtc")?;
    let vc = merged(p.vc, &file, "vc")?;
    let transport = wt.is_some() || q.is_some() || alpha.is_some();
    let plasma = gamma.is_some() || eps.is_some() || vtc.is_some() || vc.is_some();
    match (transport, plasma) {
        (true, true) => Err(CliError::Usage(
            "give either --omega-tau/--Q/--alpha or --gamma/--eps/--vtc, not both".into(),
        )),
        (true, false) => {
            let (wt, q, alpha) = match (wt, q, alpha) {
                (Some(a), Some(b), Some(c)) => (a, b, c),
                _ => return Err(CliError::Usage("--omega-tau, --Q and --alpha are all required".into())),
            };
            Ok(KineticParams::from_transport(wt, q, alpha)?)
        }
        (false, true) => {
            let vtc = match (vtc, vc) {
                (Some(_), Some(_)) => return Err(CliError::Usage("give --vtc or --vc, not both".into())),
                (Some(t), None) => t,
                (None, Some(c)) => c / VC_FACTOR,
                (None, None) => return Err(CliError::Usage("--vtc (or --vc) is required".into())),
            };
            let (gamma, eps) = match (gamma, eps) {
                (Some(g), Some(e)) => (g, e),
                _ => return Err(CliError::Usage("--gamma and --eps are both required".into())),
            };
            Ok(KineticParams::from_plasma(&PhysicalParams::new(gamma, eps, vtc)?)?)
        }
        (false, false) => match default {
            Some((wt, q, alpha)) => Ok(KineticParams::from_transport(wt, q, alpha)?),
            None => Err(CliError::Usage("no parameters given (use --omega-tau/--Q/--alpha or --gamma/--eps/--vtc)".into())),
        },
    }
}

fn resolve_vc(flag: Option<f64>, config: &Option<PathBuf>) -> CliResult<f64> {
    let file = load_config(config)?;
    let vc = match merged(flag, &file, "vc")? {
        Some(v) => v,
        None => match file_value(&file, "vtc")? {
            Some(t) => t * VC_FACTOR,
            None => return Err(CliError::Usage("--vc is required".into())),
        },
    };
    if !(vc > 0.0 && vc.is_finite()) {
        return Err(CliError::Usage(format!("--vc = {vc} must be positive")));
    }
    Ok(vc)
}

// ---------------------------------------------------------------- output

/// JSON number with 17 significant digits.
pub fn json_number(x: f64) -> CliResult<Value> {
    if !x.is_finite() {
        return Err(CliError::Numerical(SkinError::Inconsistency {
            stage: "output",
            detail: format!("non-finite value {x} in JSON output"),
        }));
    }
    let s = format!("{:.16e}", if x == 0.0 { 0.0 } else { x });
    let n: Number = s.parse().expect("formatted float is valid JSON");
    Ok(Value::Number(n))
}

fn json_complex(z: Complex64) -> CliResult<Value> {
    Ok(json!({ "re": json_number(z.re)?, "im": json_number(z.im)? }))
}

/// Shortest round-trip text of `x`, with `-0` folded into `0`.
pub fn csv_number(x: f64) -> String {
    let m = x.abs();
    if x == 0.0 {
        "0".into()
    } else if (1e-5..1e16).contains(&m) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}"))),
    }
}

fn emit_json(out: &Option<PathBuf>, v: &Value) -> CliResult<()> {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value serializes");
    s.push('\n');
    emit(out, s.as_bytes())
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn csv_only(fmt: Format, what: &str) -> CliResult<()> {
    match fmt {
        Format::Csv => Ok(()),
        Format::Json => Err(CliError::Usage(format!("{what} output is CSV only"))),
    }
}

// ---------------------------------------------------------------- commands

fn cmd_impedance(a: &PointArgs) -> CliResult<()> {
    let kp = resolve_params(&a.params, None)?;
    let rep = solution::impedance(&kp)?;
    match a.format {
        Format::Json => {
            let zeros = rep.zeros.iter().map(|&z| json_complex(z)).collect::<CliResult<Vec<_>>>()?;
            let v = json!({
                "omega_tau": json_number(kp.omega_tau())?,
                "Q": json_number(kp.q())?,
                "alpha": json_number(kp.alpha())?,
                "kappa": rep.kappa,
                "z": json_complex(rep.z)?,
                "e_prime_0": json_complex(rep.e_prime_0)?,
                "x_logderiv_0": json_complex(rep.logderiv)?,
                "zeros": zeros,
            });
            emit_json(&a.out, &v)
        }
        Format::Csv => {
            let row = vec![
                csv_number(rep.z.re),
                csv_number(rep.z.im),
                csv_number(rep.e_prime_0.re),
                csv_number(rep.e_prime_0.im),
                rep.kappa.to_string(),
            ];
            emit(&a.out, &csv_bytes(&["re_z", "im_z", "re_e_prime_0", "im_e_prime_0", "kappa"], &[row]))
        }
    }
}

fn cmd_spectrum(a: &PointArgs) -> CliResult<()> {
    let kp = resolve_params(&a.params, None)?;
    let rep = spectrum::spectrum(&kp)?;
    match a.format {
        Format::Json => {
            let zeros = rep.zeros.iter().map(|&z| json_complex(z)).collect::<CliResult<Vec<_>>>()?;
            let res = rep.residuals.iter().map(|&r| json_number(r)).collect::<CliResult<Vec<_>>>()?;
            let mut m = Map::new();
            m.insert("kappa".into(), json!(rep.kappa));
            m.insert("n_zeros".into(), json!(rep.n_zeros));
            m.insert("zeros".into(), Value::Array(zeros));
            m.insert("residuals".into(), Value::Array(res));
            emit_json(&a.out, &Value::Object(m))
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = rep
                .zeros
                .iter()
                .zip(&rep.residuals)
                .enumerate()
                .map(|(k, (z, r))| vec![k.to_string(), csv_number(z.re), csv_number(z.im), csv_number(*r)])
                .collect();
            emit(&a.out, &csv_bytes(&["index", "re_eta", "im_eta", "residual"], &rows))
        }
    }
}

/// One cell of the domain sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainCell {
    pub gamma: f64,
    pub eps: f64,
    pub delta: Complex64,
    pub class: DomainClass,
    pub kappa: Option<i32>,
}

/// Classify an `n × n` grid of cell centres on `(0, extent·v_c]²`.
pub fn domain_sweep(v_c: f64, n: usize, extent: f64) -> CliResult<Vec<DomainCell>> {
    if n == 0 || !(extent > 0.0) {
        return Err(CliError::Usage("--grid and --extent must be positive".into()));
    }
    let side = extent * v_c;
    let pts: Vec<(f64, f64)> = (0..n)
        .flat_map(|j| (0..n).map(move |i| (side * (i as f64 + 0.5) / n as f64, side * (j as f64 + 0.5) / n as f64)))
        .collect();
    pts.par_iter()
        .map(|&(gamma, eps)| {
            let pp = PhysicalParams::from_vc(gamma, eps, v_c)?;
            let kp = KineticParams::from_plasma(&pp)?;
            let class = spectrum::classify_delta(&kp);
            let kappa = spectrum::index_kappa(&kp).ok();
            Ok(DomainCell { gamma, eps, delta: pp.delta_closed_form(), class, kappa })
        })
        .collect::<Result<Vec<_>, SkinError>>()
        .map_err(CliError::from)
}

fn cmd_domain(a: &DomainArgs) -> CliResult<()> {
    csv_only(a.format, "domain")?;
    let vc = resolve_vc(a.vc, &a.config)?;
    let cells = domain_sweep(vc, a.grid, a.extent)?;
    let rows: Vec<Vec<String>> = cells
        .iter()
        .map(|c| {
            vec![
                csv_number(c.gamma),
                csv_number(c.eps),
                csv_number(c.delta.re),
                csv_number(c.delta.im),
                c.class.name().to_string(),
                c.kappa.map(|k| k.to_string()).unwrap_or_default(),
            ]
        })
        .collect();
    emit(&a.out, &csv_bytes(&["gamma", "eps", "delta1", "delta2", "class", "kappa"], &rows))
}

fn curve_rows(c: &CurvePoints) -> Vec<Vec<String>> {
    c.points.iter().map(|p| vec![csv_number(p.mu), csv_number(p.x), csv_number(p.y)]).collect()
}

fn cmd_curves(a: &CurveArgs) -> CliResult<()> {
    csv_only(a.format, "curves")?;
    if a.points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let bytes = match a.which {
        Which::Lambda => csv_bytes(&["mu", "delta1", "delta2"], &curve_rows(&spectrum::lambda_curve(a.points))),
        Which::L => {
            let vc = resolve_vc(a.vc, &a.config)?;
            csv_bytes(&["mu", "gamma", "eps"], &curve_rows(&spectrum::l_curve(vc, a.points)?))
        }
    };
    emit(&a.out, &bytes)
}

fn cmd_profile(a: &ProfileArgs) -> CliResult<()> {
    csv_only(a.format, "profile")?;
    let kp = resolve_params(&a.params, None)?;
    if a.points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let sol = Solution::new(&kp)?;
    let xmax = a.xmax.unwrap_or_else(|| (12.0 * sol.decay_length()).max(10.0));
    if !(xmax > 0.0 && xmax.is_finite()) {
        return Err(CliError::Usage(format!("--xmax = {xmax} must be positive")));
    }
    let xs: Vec<f64> = (0..a.points).map(|i| xmax * i as f64 / (a.points - 1) as f64).collect();
    let table = solution::profile_from(&sol, &xs)?;
    for w in &table.warnings {
        eprintln!("warning: {w}");
    }
    let rows: Vec<Vec<String>> = table
        .x
        .iter()
        .zip(&table.e)
        .map(|(&x, e)| vec![csv_number(x), csv_number(e.re), csv_number(e.im)])
        .collect();
    emit(&a.out, &csv_bytes(&["x", "re_e", "im_e"], &rows))
}

// ---------------------------------------------------------------- validation

/// One row of the validation table.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl CheckRow {
    fn below(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self { name: name.into(), value, tol, pass: value.is_finite() && value < tol }
    }

    fn failed(name: impl Into<String>, err: &SkinError) -> Self {
        eprintln!("  {}: {err}", err.stage());
        Self { name: name.into(), value: f64::NAN, tol: 0.0, pass: false }
    }
}

impl fmt::Display for CheckRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag}  {:<44} {:>11.3e}  < {:.1e}", self.name, self.value, self.tol)
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Checks of the analytic solution at one parameter point against the
/// direct solver and its own identities.
pub fn validate_point(kp: &KineticParams, oracle_tol: f64, x_max: Option<f64>) -> Vec<CheckRow> {
    let mut rows = Vec::new();
    let sol = match Solution::new(kp) {
        Ok(s) => s,
        Err(e) => return vec![CheckRow::failed("analytic solution", &e)],
    };

    // index and zero count
    let spec = sol.spectrum();
    let n_arg = 2 + 2 * sol.dispersion().kappa().unwrap_or(-1);
    rows.push(CheckRow::below(
        format!("index: N = {n_arg} vs 2 x {} zeros", spec.zeros.len()),
        (n_arg - 2 * spec.zeros.len() as i32).abs() as f64,
        0.5,
    ));
    match spectrum::classify_delta(kp) {
        DomainClass::Boundary => {}
        class => {
            let kq = spectrum::index_kappa(&kp.without_displacement()).unwrap_or(-1);
            let expect = if class == DomainClass::DeltaPlus { 1 } else { 0 };
            rows.push(CheckRow::below(format!("delta-plane class {} vs index", class.name()), (kq - expect).abs() as f64, 0.5));
        }
    }

    // factorization X+/X- = G
    let f = sol.factor();
    let t = f.t_max();
    let mut worst = 0.0f64;
    for i in 0..20 {
        let mu = t * (i as f64 + 0.5) / 20.0;
        let r = (|| -> crate::Result<f64> {
            let ratio = f.x_boundary(mu, HalfPlaneSide::Above)? / f.x_boundary(mu, HalfPlaneSide::Below)?;
            Ok(rel(ratio, sol.dispersion().g(mu)?))
        })();
        worst = worst.max(r.unwrap_or(f64::INFINITY));
    }
    rows.push(CheckRow::below("factorization X+/X- = G (20 mu)", worst, 1e-8));

    match sol.wall_residual() {
        Ok(w) => rows.push(CheckRow::below("wall condition h(0, mu > 0)", w, 1e-6)),
        Err(e) => rows.push(CheckRow::failed("wall condition h(0, mu > 0)", &e)),
    }
    for x in [0.1, 1.0, 5.0] {
        let name = format!("field equation at x = {x}");
        match sol.field_residual(x) {
            Ok(r) => rows.push(CheckRow::below(name, r, 1e-6)),
            Err(e) => rows.push(CheckRow::failed(name, &e)),
        }
    }

    // internal algebra
    if sol.kappa() == 0 {
        if let Some(c0) = sol.c0_via_amplitude() {
            rows.push(CheckRow::below("C0 two routes", rel(c0, sol.coefficients().c[0]), 1e-10));
        }
    } else {
        let c = &sol.coefficients().c;
        rows.push(CheckRow::below("C0 + C1", (c[0] + c[1]).norm() / c[0].norm(), 1e-9));
        let b = sol.pole_brackets().iter().zip(c).map(|(b, c)| b.norm() / c.norm()).fold(0.0, f64::max);
        rows.push(CheckRow::below("pole brackets", b, 1e-9));
    }
    let mut worst = 0.0f64;
    for eta in [0.3, 1.0, 2.2] {
        let exact = (1.0 + kp.b() * eta * eta) * (-eta * eta).exp();
        let r = solution::eigenfunction_moment(kp, eta).map(|m| rel(m, exact)).unwrap_or(f64::INFINITY);
        worst = worst.max(r);
    }
    rows.push(CheckRow::below("eigenfunction normalization", worst, 1e-9));

    // direct solver
    let analytic = sol.impedance();
    if let Ok(rep) = &analytic {
        let mut cfg = OracleConfig::for_params(kp).with_decay_hint(sol.decay_length());
        if let Some(x) = x_max {
            cfg.x_max = x;
        }
        match solve_bvp(kp, &cfg) {
            Ok(o) => rows.push(CheckRow::below("oracle Z vs analytic Z", rel(o.z, rep.z), oracle_tol)),
            Err(e) => rows.push(CheckRow::failed("oracle Z vs analytic Z", &e)),
        }
    } else if let Err(e) = &analytic {
        rows.push(CheckRow::failed("analytic impedance", e));
    }

    // local limit at the same ωτ and Q
    if let Ok(weak) = KineticParams::from_transport(kp.omega_tau(), kp.q(), 1e-3) {
        let z_loc = local_impedance(&weak);
        let za = solution::impedance(&weak);
        match (z_loc, za) {
            (Ok(zl), Ok(za)) => {
                rows.push(CheckRow::below("local limit, analytic (alpha = 1e-3)", rel(za.z, zl), 1e-2));
                match solve_bvp(&weak, &OracleConfig::for_params(&weak)) {
                    Ok(o) => rows.push(CheckRow::below("local limit, oracle (alpha = 1e-3)", rel(o.z, zl), 1e-2)),
                    Err(e) => rows.push(CheckRow::failed("local limit, oracle (alpha = 1e-3)", &e)),
                }
            }
            (Err(e), _) | (_, Err(e)) => rows.push(CheckRow::failed("local limit (alpha = 1e-3)", &e)),
        }
    }

    // special functions
    let mut worst = 0.0f64;
    for mu in [0.2, 1.0, 3.5] {
        let z = Complex64::new(mu, 0.0);
        let up = specfun::p_value(z, HalfPlaneSide::Above);
        let dn = specfun::p_value(z, HalfPlaneSide::Below);
        worst = worst.max((up - dn - specfun::UPPER_JUMP_SIGN * 2.0 * Complex64::new(0.0, specfun::q_value(mu))).norm());
        worst = worst.max((specfun::p_principal(-mu) - specfun::p_principal(mu)).abs());
        worst = worst.max((specfun::q_value(-mu) + specfun::q_value(mu)).abs());
    }
    rows.push(CheckRow::below("p, q parity and jump", worst, 1e-12));
    rows
}

fn cmd_validate(a: &PointArgs) -> CliResult<()> {
    let kp = resolve_params(&a.params, Some(DEFAULT_POINT))?;
    let tol = a.tol.unwrap_or(5e-3);
    if !(tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let rows = validate_point(&kp, tol, a.xmax);
    let mut text = format!(
        "validation at omega_tau = {}, Q = {}, alpha = {}\n",
        kp.omega_tau(),
        kp.q(),
        kp.alpha()
    );
    for r in &rows {
        text.push_str(&format!("{r}\n"));
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    text.push_str(&format!("{} checks, {} failed\n", rows.len(), failed));
    emit(&a.out, text.as_bytes())?;
    if failed > 0 {
        return Err(CliError::Validation(format!("{failed} of {} checks failed", rows.len())));
    }
    Ok(())
}
