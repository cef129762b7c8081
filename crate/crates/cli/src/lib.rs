//! Batch front end for the `hmlab` library: parse flags, run one experiment, write JSON/CSV.
//!
//! Exit codes: 0 success, 2 invalid flags or inputs, 1 runtime failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use hmlab::character::DirichletCharacter;
use hmlab::evaluator::{eval_hm_series, eval_hm_with, EvalOptions};
use hmlab::experiments;
use hmlab::lfunction::{default_sigma_l_for, SelbergLFunction};
use hmlab::polynomial::{format_complex, parse_complex, Polynomial};
use hmlab::random::{analytic_second_moment, phase_fit, PhaseFitOptions};
use hmlab::region::{CompactSetContext, CompactShape, GridSpec};
use hmlab::sampling::{ball_frequency, sample_q, sample_qt, SampleSet, ShiftScheme};
use hmlab::shifts::{shift_set_i, IntervalSet};
use hmlab::smoothing::mellin_hat;
use hmlab::witness::{witness_search, WitnessOptions};
use hmlab::zeros::{count_zeros_n, load_zeros, ZeroSet};

/// Directory searched for `<name>.txt` zero tables when `--zeros` is absent.
pub const ZERO_DIR_ENV: &str = "HMLAB_ZERO_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "hmlab",
    version,
    about = "Iterated log-integrals of L-functions: evaluation, sampling and shift search"
)]
pub struct Cli {
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Full JSON report.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Per-row CSV data.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Evaluate H_m at one point.
    Eval(EvalArgs),
    /// Dirichlet-polynomial error against a calibrated envelope.
    PolyCheck(PolyCheckArgs),
    /// Smoothed truncations against the full value.
    SmoothCheck(SmoothCheckArgs),
    /// Monte-Carlo samples of the random model.
    SampleQ(SampleQArgs),
    /// Samples of vertical shifts.
    SampleQt(SampleQtArgs),
    /// Energy-distance comparison of shift samples and random-model samples.
    Compare(CompareArgs),
    /// Fit random-model phases to a target on K.
    FitPhases(FitPhasesArgs),
    /// Search shifts approximating a target on K.
    Witness(WitnessArgs),
    /// Summary of a zero table and the admissible shifts it leaves.
    ZerosReport(ZerosReportArgs),
    /// Mellin transform of the cutoff, or its residue and decay check.
    Mellin(MellinArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LArgs {
    /// `zeta`, `chi:D` (Kronecker symbol of a fundamental discriminant), `chi:q:j` (odd prime q), or a coefficient file.
    #[arg(long = "l", default_value = "zeta")]
    pub l: String,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub m: i64,
    /// Zero table; defaults to `$HMLAB_ZERO_DIR/<name>.txt`.
    #[arg(long)]
    pub zeros: Option<PathBuf>,
    /// Take sigma_L = 1/2 (density hypothesis).
    #[arg(long)]
    pub gdh: bool,
    #[arg(long)]
    pub sigma_l: Option<f64>,
    #[arg(long, default_value_t = 1e-9)]
    pub quad_tol: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KArgs {
    /// Disk `re,im,radius`.
    #[arg(long, conflicts_with = "rect")]
    pub disk: Option<String>,
    /// Rectangle `re0,re1,im0,im1`.
    #[arg(long)]
    pub rect: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvalArgs {
    #[command(flatten)]
    pub l: LArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    /// Also report the truncated Dirichlet series with this many terms.
    #[arg(long)]
    pub series_terms: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PolyCheckArgs {
    #[command(flatten)]
    pub l: LArgs,
    #[command(flatten)]
    pub k: KArgs,
    #[arg(long, default_value_t = 1e4)]
    pub t_height: f64,
    #[arg(long, default_value = "100,1000")]
    pub y: String,
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub pilot: usize,
    #[arg(long, default_value_t = 1.5)]
    pub safety: f64,
    #[arg(long, default_value_t = 5)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SmoothCheckArgs {
    #[command(flatten)]
    pub l: LArgs,
    #[command(flatten)]
    pub k: KArgs,
    #[arg(long, default_value_t = 1e4)]
    pub t_height: f64,
    #[arg(long, default_value = "64,256,1024,4096")]
    pub x: String,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 5)]
    pub grid: usize,
    #[arg(long, default_value_t = 1.5)]
    pub slack: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BallArgs {
    /// Polynomial target for a ball frequency, e.g. `0.2` or `0.1,1@0.85`.
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<String>,
    #[arg(long)]
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SampleQArgs {
    #[command(flatten)]
    pub l: LArgs,
    #[command(flatten)]
    pub k: KArgs,
    /// Comma-separated evaluation points; defaults to the grid of K.
    #[arg(long, allow_hyphen_values = true)]
    pub points: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub prime_bound: u64,
    #[arg(long, default_value_t = 8)]
    pub kmax: u32,
    #[command(flatten)]
    pub ball: BallArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SampleQtArgs {
    #[command(flatten)]
    pub l: LArgs,
    #[command(flatten)]
    pub k: KArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub points: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 1e4)]
    pub t_height: f64,
    /// `equispaced` or `random`.
    #[arg(long, default_value = "equispaced")]
    pub scheme: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub ball: BallArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CompareArgs {
    #[command(flatten)]
    pub l: LArgs,
    #[command(flatten)]
    pub k: KArgs,
    #[arg(long, default_value = "0.8,0.85+0.5i", allow_hyphen_values = true)]
    pub points: String,
    #[arg(long, default_value_t = 3000)]
    pub n: usize,
    #[arg(long, default_value_t = 1e4)]
    pub t_height: f64,
    #[arg(long, default_value_t = 8)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub prime_bound: u64,
    #[arg(long, default_value_t = 0)]
    pub permutations: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitPhasesArgs {
    #[command(flatten)]
    pub l: LArgs,
    #[command(flatten)]
    pub k: KArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub target: String,
    #[arg(long, default_value_t = 1000)]
    pub prime_bound: u64,
    #[arg(long, default_value_t = 3)]
    pub sweeps: usize,
    #[arg(long, default_value_t = 64)]
    pub circle: usize,
    /// Write the fitted phases in the text phase format.
    #[arg(long)]
    pub phases_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub l: LArgs,
    #[command(flatten)]
    pub k: KArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub target: String,
    /// Shift range `lo:hi`.
    #[arg(long)]
    pub tau: String,
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, default_value_t = 1000.0)]
    pub y: f64,
    #[arg(long, default_value_t = 0.15)]
    pub slack: f64,
    /// Stop after this many confirmed hits; 0 scans the whole range.
    #[arg(long, default_value_t = 1000)]
    pub max_hits: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ZerosReportArgs {
    #[command(flatten)]
    pub l: LArgs,
    #[command(flatten)]
    pub k: KArgs,
    #[arg(long, default_value_t = 0.6)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1e4)]
    pub t_height: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MellinArgs {
    /// Evaluate at this point; without it, run the residue and decay check.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    #[arg(long, default_value_t = 1e-3)]
    pub s_small: f64,
    #[arg(long, default_value_t = -0.25, allow_negative_numbers = true)]
    pub sigma: f64,
    #[arg(long, default_value_t = 200.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.25)]
    pub t_step: f64,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => m,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

type CliResult<T> = std::result::Result<T, CliError>;

/// What a command hands back: the full result, a short summary for stdout, seeds, CSV text, warnings.
struct Outcome {
    result: Value,
    summary: Value,
    seeds: BTreeMap<String, u64>,
    csv: Option<String>,
    warnings: Vec<String>,
}

impl Outcome {
    fn new(result: impl Serialize, summary: Value) -> CliResult<Self> {
        Ok(Self {
            result: serde_json::to_value(result).map_err(runtime)?,
            summary,
            seeds: BTreeMap::new(),
            csv: None,
            warnings: Vec::new(),
        })
    }

    fn seed(mut self, name: &str, v: u64) -> Self {
        self.seeds.insert(name.into(), v);
        self
    }
}

/// Parse `argv`, run, print the summary line, and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            if code == 2 {
                println!("{}", json!({"status": "usage-error", "message": e.kind().to_string()}));
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok(line) => {
            println!("{line}");
            0
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            let status = if e.code() == 2 { "usage-error" } else { "runtime-error" };
            println!("{}", json!({"status": status, "message": e.message()}));
            e.code()
        }
    }
}

/// Run a parsed command and return the stdout summary line.
pub fn execute(cli: &Cli) -> CliResult<String> {
    let start = Instant::now();
    let config = serde_json::to_value(&cli.command).map_err(runtime)?;
    let config_hash = hex::encode(Sha256::digest(serde_json::to_vec(&config).map_err(runtime)?));
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cli.threads {
            if n == 0 {
                return Err(usage("--threads must be at least 1"));
            }
            b = b.num_threads(n);
        }
        b.build().map_err(runtime)?
    };
    let outcome = pool.install(|| dispatch(&cli.command))?;
    for w in &outcome.warnings {
        log::warn!("{w}");
    }
    let name = config["command"].as_str().unwrap_or("").to_string();
    let doc = json!({
        "tool": "hmlab",
        "version": env!("CARGO_PKG_VERSION"),
        "command": name,
        "config": config,
        "config_hash": config_hash,
        "seeds": outcome.seeds,
        "warnings": outcome.warnings,
        "result": outcome.result,
    });
    if let Some(path) = &cli.out {
        write_file(path, &(serde_json::to_string_pretty(&doc).map_err(runtime)? + "\n"))?;
        let timing = json!({
            "elapsed_seconds": start.elapsed().as_secs_f64(),
            "threads": rayon::current_num_threads(),
        });
        write_file(&sidecar(path), &(timing.to_string() + "\n"))?;
    }
    if let (Some(path), Some(csv)) = (&cli.csv, &outcome.csv) {
        write_file(path, csv)?;
    }
    let line = json!({
        "status": "ok",
        "command": name,
        "version": env!("CARGO_PKG_VERSION"),
        "config_hash": config_hash,
        "seeds": outcome.seeds,
        "summary": outcome.summary,
    });
    Ok(line.to_string())
}

/// `<out>.timing.json`, kept apart so the report itself is reproducible byte for byte.
pub fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".timing.json");
    PathBuf::from(s)
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

fn dispatch(cmd: &Command) -> CliResult<Outcome> {
    match cmd {
        Command::Eval(a) => cmd_eval(a),
        Command::PolyCheck(a) => cmd_poly_check(a),
        Command::SmoothCheck(a) => cmd_smooth_check(a),
        Command::SampleQ(a) => cmd_sample_q(a),
        Command::SampleQt(a) => cmd_sample_qt(a),
        Command::Compare(a) => cmd_compare(a),
        Command::FitPhases(a) => cmd_fit_phases(a),
        Command::Witness(a) => cmd_witness(a),
        Command::ZerosReport(a) => cmd_zeros_report(a),
        Command::Mellin(a) => cmd_mellin(a),
    }
}

// --- flag parsing ---------------------------------------------------------

pub fn parse_l(spec: &str) -> CliResult<SelbergLFunction> {
    let bad = |e: hmlab::Error| usage(format!("--l {spec:?}: {e}"));
    if spec == "zeta" {
        return Ok(SelbergLFunction::zeta());
    }
    if let Some(rest) = spec.strip_prefix("chi:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let chi = match parts.as_slice() {
            [d] => {
                let d: i64 = d
                    .parse()
                    .map_err(|_| usage(format!("--l {spec:?}: bad discriminant")))?;
                DirichletCharacter::kronecker(d).map_err(bad)?
            }
            [q, j] => {
                let q: u64 = q.parse().map_err(|_| usage(format!("--l {spec:?}: bad modulus")))?;
                let j: u64 = j.parse().map_err(|_| usage(format!("--l {spec:?}: bad index")))?;
                DirichletCharacter::prime_modulus(q, j).map_err(bad)?
            }
            _ => return Err(usage(format!("--l {spec:?}: expected chi:D or chi:q:j"))),
        };
        return SelbergLFunction::dirichlet(spec, chi).map_err(bad);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(usage(format!("--l {spec:?}: not a built-in name and no such file")));
    }
    SelbergLFunction::from_coefficient_file(path).map_err(|e| usage(format!("--l {spec}: {e}")))
}

fn parse_m(m: i64) -> CliResult<u32> {
    u32::try_from(m).map_err(|_| usage(format!("--m must be a non-negative integer, got {m}")))
}

fn parse_floats(flag: &str, text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("{flag}: cannot parse {t:?} as a number")))
        })
        .collect()
}

fn parse_points(text: &str) -> CliResult<Vec<Complex64>> {
    text.split(',')
        .map(|t| parse_complex(t).map_err(|e| usage(format!("--points: {e}"))))
        .collect()
}

fn parse_target(text: &str) -> CliResult<Polynomial> {
    text.parse().map_err(|e| usage(format!("--target: {e}")))
}

fn parse_shape(k: &KArgs) -> CliResult<CompactShape> {
    match (&k.disk, &k.rect) {
        (Some(d), None) => match parse_floats("--disk", d)?.as_slice() {
            &[re, im, r] => Ok(CompactShape::disk(re, im, r)),
            _ => Err(usage("--disk expects re,im,radius")),
        },
        (None, Some(r)) => match parse_floats("--rect", r)?.as_slice() {
            &[a, b, c, d] => Ok(CompactShape::Rectangle { re: (a, b), im: (c, d) }),
            _ => Err(usage("--rect expects re0,re1,im0,im1")),
        },
        (None, None) => Ok(CompactShape::disk(0.85, 0.0, 0.02)),
        (Some(_), Some(_)) => Err(usage("--disk and --rect are exclusive")),
    }
}

struct Setup {
    l: SelbergLFunction,
    m: u32,
    zeros: ZeroSet,
    opts: EvalOptions,
    warnings: Vec<String>,
}

fn setup(a: &LArgs, needs_zeros: bool) -> CliResult<Setup> {
    let l = parse_l(&a.l)?;
    let m = parse_m(a.m)?;
    if !(a.quad_tol > 0.0) {
        return Err(usage(format!("--quad-tol must be positive, got {}", a.quad_tol)));
    }
    let mut warnings = Vec::new();
    let zeros = if needs_zeros {
        resolve_zeros(a, &l, &mut warnings)?
    } else {
        ZeroSet::empty()
    };
    Ok(Setup {
        l,
        m,
        zeros,
        opts: EvalOptions {
            quad_tol: a.quad_tol,
            ..EvalOptions::default()
        },
        warnings,
    })
}

fn resolve_zeros(a: &LArgs, l: &SelbergLFunction, warnings: &mut Vec<String>) -> CliResult<ZeroSet> {
    let path = match &a.zeros {
        Some(p) => Some(p.clone()),
        None => std::env::var_os(ZERO_DIR_ENV)
            .map(|d| Path::new(&d).join(format!("{}.txt", l.name.replace(':', "_"))))
            .filter(|p| p.exists()),
    };
    match path {
        Some(p) => load_zeros(&p).map_err(|e| usage(format!("--zeros: {e}"))),
        None => {
            warnings.push(format!(
                "no zero table for {}: no shifts are excluded (set --zeros or {ZERO_DIR_ENV})",
                l.name
            ));
            Ok(ZeroSet::empty())
        }
    }
}

fn coverage_warning(z: &ZeroSet, top: f64, warnings: &mut Vec<String>) {
    let last = z.entries.last().map(|e| e.1).unwrap_or(0.0);
    if !z.is_empty() && last < top {
        warnings.push(format!(
            "zero table {} ends at ordinate {last}, below the largest height used ({top}); heights above it are treated as zero-free",
            z.source
        ));
    }
}

fn context(a: &LArgs, k: &KArgs, l: &SelbergLFunction) -> CliResult<CompactSetContext> {
    let shape = parse_shape(k)?;
    let sigma_l = a.sigma_l.unwrap_or_else(|| default_sigma_l_for(l, a.gdh));
    CompactSetContext::new(shape, sigma_l).map_err(|e| usage(format!("--disk/--rect: {e}")))
}

fn positive(flag: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("{flag} must be positive, got {v}")))
    }
}

fn nonzero(flag: &str, v: usize) -> CliResult<()> {
    if v > 0 {
        Ok(())
    } else {
        Err(usage(format!("{flag} must be at least 1")))
    }
}

fn c_json(z: Complex64) -> Value {
    json!(format_complex(z))
}

fn sample_csv(s: &SampleSet) -> String {
    let mut out = String::from("row,shift");
    for p in &s.eval_points {
        let _ = write!(out, ",re[{0}],im[{0}]", format_complex(*p));
    }
    out.push('\n');
    for (i, row) in s.observations.iter().enumerate() {
        let shift = s.params.shifts.get(i).map(|t| t.to_string()).unwrap_or_default();
        let _ = write!(out, "{i},{shift}");
        for v in row {
            let _ = write!(out, ",{},{}", v.re, v.im);
        }
        out.push('\n');
    }
    out
}

// --- commands --------------------------------------------------------------

fn cmd_eval(a: &EvalArgs) -> CliResult<Outcome> {
    let st = setup(&a.l, false)?;
    let s = parse_complex(&a.s).map_err(|e| usage(format!("--s: {e}")))?;
    let v = eval_hm_with(&st.l, st.m, s, &st.opts).map_err(runtime)?;
    let series = match a.series_terms {
        Some(n) => Some(eval_hm_series(&st.l, st.m, s, n).map_err(runtime)?),
        None => None,
    };
    let summary = json!({
        "s": c_json(s),
        "value": c_json(v.value),
        "err_bound": v.err_bound,
        "method": v.method.as_str(),
    });
    Outcome::new(json!({"s": s, "value": v, "series": series}), summary)
}

fn cmd_poly_check(a: &PolyCheckArgs) -> CliResult<Outcome> {
    let mut st = setup(&a.l, true)?;
    let k = context(&a.l, &a.k, &st.l)?;
    let ys = parse_floats("--y", &a.y)?;
    positive("--t-height", a.t_height)?;
    positive("--safety", a.safety)?;
    nonzero("--n", a.n)?;
    nonzero("--pilot", a.pilot)?;
    coverage_warning(&st.zeros, 2.0 * a.t_height, &mut st.warnings);
    let r = experiments::poly_check(
        &st.l, st.m, &k, &st.zeros, a.t_height, &ys, a.n, a.pilot, a.safety, a.seed, &st.opts,
    )
    .map_err(runtime)?;
    let mut csv = String::from("y,c_pilot,c_calibrated,envelope,empirical_sup,within\n");
    for row in &r.rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            row.y, row.c_pilot, row.c_calibrated, row.envelope, row.empirical_sup, row.within
        );
    }
    let summary = json!({
        "within": r.rows.iter().all(|x| x.within),
        "c_spread": r.c_spread,
        "c": r.rows.iter().map(|x| x.c_calibrated).collect::<Vec<_>>(),
    });
    let mut o = Outcome::new(&r, summary)?.seed("seed", a.seed);
    o.csv = Some(csv);
    o.warnings = st.warnings;
    Ok(o)
}

fn cmd_smooth_check(a: &SmoothCheckArgs) -> CliResult<Outcome> {
    let mut st = setup(&a.l, true)?;
    let k = context(&a.l, &a.k, &st.l)?;
    let xs = parse_floats("--x", &a.x)?;
    positive("--t-height", a.t_height)?;
    nonzero("--n", a.n)?;
    nonzero("--grid", a.grid)?;
    coverage_warning(&st.zeros, 2.0 * a.t_height, &mut st.warnings);
    let r = experiments::smooth_check(
        &st.l, st.m, &k, &st.zeros, a.t_height, &xs, a.n, a.grid, a.slack, &st.opts,
    )
    .map_err(runtime)?;
    let mut csv = String::from("x,mean_sup_error\n");
    for row in &r.rows {
        let _ = writeln!(csv, "{},{}", row.x, row.mean_sup_error);
    }
    let summary = json!({
        "non_increasing": r.non_increasing,
        "final_over_initial": r.final_over_initial,
    });
    let mut o = Outcome::new(&r, summary)?;
    o.csv = Some(csv);
    o.warnings = st.warnings;
    Ok(o)
}

fn points_or_grid(points: &Option<String>, k: &CompactSetContext) -> CliResult<Vec<Complex64>> {
    match points {
        Some(p) => parse_points(p),
        None => Ok(k.grid(GridSpec::default())),
    }
}

fn ball(b: &BallArgs, s: &SampleSet, k: &CompactSetContext) -> CliResult<Option<f64>> {
    match (&b.target, b.eps) {
        (Some(t), Some(eps)) => {
            let p = parse_target(t)?;
            ball_frequency(s, &p, k, eps)
                .map(Some)
                .map_err(|e| usage(format!("--target/--eps: {e}")))
        }
        (None, None) => Ok(None),
        _ => Err(usage("--target and --eps go together")),
    }
}

fn cmd_sample_q(a: &SampleQArgs) -> CliResult<Outcome> {
    let st = setup(&a.l, false)?;
    let k = context(&a.l, &a.k, &st.l)?;
    let points = points_or_grid(&a.points, &k)?;
    nonzero("--n", a.n)?;
    let s = sample_q(&st.l, st.m, &points, a.n, a.seed, a.prime_bound, a.kmax).map_err(runtime)?;
    let freq = ball(&a.ball, &s, &k)?;
    let moments: Vec<Value> = points
        .iter()
        .zip(s.mean())
        .zip(s.second_moment())
        .map(|((p, mean), m2)| {
            let analytic = if p.im == 0.0 || p.re > 0.5 {
                analytic_second_moment(&st.l, st.m, p.re).ok().map(|v| v.value.re)
            } else {
                None
            };
            json!({"point": c_json(*p), "mean": c_json(mean), "second_moment": m2, "analytic_second_moment": analytic})
        })
        .collect();
    let summary = json!({"rows": s.rows(), "ball_frequency": freq});
    let csv = sample_csv(&s);
    let mut o = Outcome::new(
        json!({"samples": s, "moments": moments, "ball_frequency": freq}),
        summary,
    )?
    .seed("seed", a.seed);
    o.csv = Some(csv);
    o.warnings = st.warnings;
    Ok(o)
}

fn cmd_sample_qt(a: &SampleQtArgs) -> CliResult<Outcome> {
    let mut st = setup(&a.l, true)?;
    let k = context(&a.l, &a.k, &st.l)?;
    let points = points_or_grid(&a.points, &k)?;
    nonzero("--n", a.n)?;
    positive("--t-height", a.t_height)?;
    let scheme = match a.scheme.as_str() {
        "equispaced" => ShiftScheme::Equispaced,
        "random" => ShiftScheme::Random { seed: a.seed },
        other => return Err(usage(format!("--scheme must be equispaced or random, got {other:?}"))),
    };
    coverage_warning(&st.zeros, 2.0 * a.t_height, &mut st.warnings);
    let shifts = shift_set_i(&st.zeros, &k, a.t_height, st.l.has_pole_at_one).map_err(runtime)?;
    let s = sample_qt(&st.l, st.m, &points, &shifts, a.n, scheme, &st.opts).map_err(runtime)?;
    let freq = ball(&a.ball, &s, &k)?;
    let normalized = freq.map(|f| {
        let (over_i, over_t) = experiments::ball_frequency_normalizations(f, &shifts, a.t_height);
        json!({"over_admissible_set": over_i, "over_full_window": over_t})
    });
    let summary = json!({"rows": s.rows(), "dropped": s.params.dropped, "ball_frequency": normalized});
    let csv = sample_csv(&s);
    let mut o = Outcome::new(
        json!({"samples": s, "shift_measure": shifts.measure(), "ball_frequency": normalized}),
        summary,
    )?;
    if let ShiftScheme::Random { seed } = scheme {
        o = o.seed("seed", seed);
    }
    o.csv = Some(csv);
    o.warnings = st.warnings;
    Ok(o)
}

fn cmd_compare(a: &CompareArgs) -> CliResult<Outcome> {
    let mut st = setup(&a.l, true)?;
    let k = context(&a.l, &a.k, &st.l)?;
    let points = parse_points(&a.points)?;
    nonzero("--n", a.n)?;
    positive("--t-height", a.t_height)?;
    coverage_warning(&st.zeros, 2.0 * a.t_height, &mut st.warnings);
    let r = experiments::compare_measures(
        &st.l,
        st.m,
        &points,
        &st.zeros,
        &k,
        a.t_height,
        a.n,
        a.seed,
        a.prime_bound,
        a.permutations,
        &st.opts,
    )
    .map_err(runtime)?;
    let summary = json!({
        "energy_same_m": r.energy_same_m,
        "energy_next_m": r.energy_next_m,
        "discriminates": r.discriminates,
    });
    let mut o = Outcome::new(&r, summary)?.seed("seed", a.seed);
    o.warnings = st.warnings;
    Ok(o)
}

fn cmd_fit_phases(a: &FitPhasesArgs) -> CliResult<Outcome> {
    let st = setup(&a.l, false)?;
    let k = context(&a.l, &a.k, &st.l)?;
    let target = parse_target(&a.target)?;
    nonzero("--circle", a.circle)?;
    let opts = PhaseFitOptions {
        circle_points: a.circle,
        ..PhaseFitOptions::default()
    };
    let fit = phase_fit(&st.l, st.m, &target, &k, a.prime_bound, a.sweeps, opts).map_err(runtime)?;
    if let Some(p) = &a.phases_out {
        write_file(p, &fit.assignment.to_text())?;
    }
    let mut csv = String::from("sweep,sup_error\n");
    for (i, e) in fit.history.iter().enumerate() {
        let _ = writeln!(csv, "{i},{e}");
    }
    let summary = json!({"error": fit.error, "history": fit.history});
    let mut o = Outcome::new(&fit, summary)?;
    o.csv = Some(csv);
    o.warnings = st.warnings;
    Ok(o)
}

fn parse_range(text: &str) -> CliResult<(f64, f64)> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| usage(format!("--tau expects lo:hi, got {text:?}")))?;
    let lo: f64 = a.parse().map_err(|_| usage(format!("--tau: bad lower end {a:?}")))?;
    let hi: f64 = b.parse().map_err(|_| usage(format!("--tau: bad upper end {b:?}")))?;
    if !(lo < hi) {
        return Err(usage(format!("--tau needs lo < hi, got {lo}:{hi}")));
    }
    Ok((lo, hi))
}

fn cmd_witness(a: &WitnessArgs) -> CliResult<Outcome> {
    let mut st = setup(&a.l, true)?;
    let k = context(&a.l, &a.k, &st.l)?;
    let target = parse_target(&a.target)?;
    let (lo, hi) = parse_range(&a.tau)?;
    positive("--step", a.step)?;
    positive("--eps", a.eps)?;
    positive("--y", a.y)?;
    coverage_warning(&st.zeros, hi, &mut st.warnings);
    // admissible part of the requested range: zeros off the line cut windows of half-width |K| + 1
    let windows = hmlab::shifts::exclusion_windows(&st.zeros, k.sigma0, k.tau0, k.kwidth + 1.0, st.l.has_pole_at_one);
    let shifts = IntervalSet::span(lo, hi).subtract_open(&windows);
    let opts = WitnessOptions {
        step: a.step,
        eps: a.eps,
        y: a.y,
        slack: a.slack,
        max_hits: (a.max_hits > 0).then_some(a.max_hits),
        grid: GridSpec::default(),
        eval: st.opts,
    };
    let r = witness_search(&st.l, st.m, &target, &k, &shifts, &opts).map_err(runtime)?;
    if r.truncated {
        st.warnings.push(format!(
            "stopped after {} hits at shift {}; pass --max-hits 0 to scan the whole range",
            r.hits.len(),
            r.hits.last().map(|h| h.tau).unwrap_or(lo)
        ));
    }
    let mut csv = String::from("tau,sup_error,err_bound\n");
    for h in &r.hits {
        let _ = writeln!(csv, "{},{},{}", h.tau, h.sup_error, h.err_bound);
    }
    let summary = json!({
        "hits": r.hits.len(),
        "scanned": r.scanned,
        "density_estimate": r.density_estimate,
        "truncated": r.truncated,
    });
    let mut o = Outcome::new(&r, summary)?;
    o.csv = Some(csv);
    o.warnings = st.warnings;
    Ok(o)
}

fn cmd_zeros_report(a: &ZerosReportArgs) -> CliResult<Outcome> {
    let mut st = setup(&a.l, true)?;
    let k = context(&a.l, &a.k, &st.l)?;
    positive("--t-height", a.t_height)?;
    coverage_warning(&st.zeros, 2.0 * a.t_height, &mut st.warnings);
    let z = &st.zeros;
    let i = shift_set_i(z, &k, a.t_height, st.l.has_pole_at_one).map_err(runtime)?;
    let r = json!({
        "source": z.source,
        "entries": z.len(),
        "rh_verified": z.rh_verified,
        "max_ordinate": z.entries.last().map(|e| e.1),
        "sigma": a.sigma,
        "count_above_sigma": count_zeros_n(z, a.sigma, a.t_height),
        "sigma0": k.sigma0,
        "count_above_sigma0": count_zeros_n(z, k.sigma0, 2.0 * a.t_height + 1.0),
        "admissible_measure": i.measure(),
        "admissible_fraction": i.measure() / a.t_height,
        "admissible_intervals": i.intervals.len(),
    });
    let summary = json!({
        "entries": z.len(),
        "rh_verified": z.rh_verified,
        "admissible_fraction": i.measure() / a.t_height,
    });
    let mut o = Outcome::new(r, summary)?;
    o.warnings = std::mem::take(&mut st.warnings);
    Ok(o)
}

fn cmd_mellin(a: &MellinArgs) -> CliResult<Outcome> {
    if let Some(text) = &a.s {
        let s = parse_complex(text).map_err(|e| usage(format!("--s: {e}")))?;
        let v = mellin_hat(s).map_err(|e| match e {
            hmlab::Error::Domain(_) | hmlab::Error::Pole(_) => usage(format!("--s: {e}")),
            other => runtime(other),
        })?;
        return Outcome::new(json!({"s": s, "value": v}), json!({"s": c_json(s), "value": c_json(v)}));
    }
    positive("--t-max", a.t_max)?;
    positive("--t-step", a.t_step)?;
    let r = experiments::mellin_check(a.s_small, a.sigma, a.t_max, a.t_step).map_err(runtime)?;
    let summary = json!({
        "residue": c_json(r.residue),
        "decay_constant": r.decay_constant,
        "decay_constant_doubled": r.decay_constant_doubled,
    });
    Outcome::new(&r, summary)
}
