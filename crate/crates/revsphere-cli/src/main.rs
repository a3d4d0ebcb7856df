//! Command-line front end for the `revsphere` library.
//!
//! Subcommands map one-to-one onto library entry points: `profile` and
//! `halfperiod` tabulate functions along a meridian or over the Clairaut
//! constant, `cutlocus` traces a cut locus from a base point, `extrema`
//! reports interior curvature extrema (plus node-level alternation
//! diagnostics for corrugated generators), and `verify` runs the named
//! claim checks.
//!
//! Tables are CSV (floats printed with 17 significant digits, so a
//! parsed file reproduces the in-memory values bit for bit) or JSON
//! carrying `schema_version` 1. No timestamps, no environment-dependent
//! fields: identical invocations produce byte-identical output. Exit
//! status is 0 on success, 1 when a verification fails or a computation
//! errors out, 2 on usage errors.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use revsphere::curvature::{
    alternation_report, count_extrema, gaussian_curvature, ExtremumKind,
};
use revsphere::geodesics::{
    cut_locus, GeodesicFan, SurfacePoint, DEFAULT_FAN_LENGTH, DEFAULT_SAMPLE_SPACING,
};
use revsphere::halfperiod::monotonicity_report;
use revsphere::numerics::Interval;
use revsphere::profiles::{BFunction, MetricProfile};
use revsphere::verify::{run_all, run_named, VerifyConfig, CHECK_NAMES};

const SCHEMA_VERSION: u32 = 1;
const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "revsphere",
    version,
    about = "Numerical experiments on two-spheres of revolution",
    max_term_width = 80
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate r, m, m', m'' and the Gaussian curvature along a meridian
    Profile(ProfileCmd),
    /// Tabulate the half-period function over the Clairaut constant
    Halfperiod(HalfperiodCmd),
    /// Trace the cut locus of a base point through a geodesic fan
    Cutlocus(CutlocusCmd),
    /// Locate interior curvature extrema along a meridian
    Extrema(ExtremaCmd),
    /// Run the claim-verification suite and emit a JSON report
    Verify(VerifyCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    /// Round sphere, m = sin r
    UnitSphere,
    /// m = sqrt(lambda+1) sin r / sqrt(1 + lambda cos^2 r)
    Lambda,
    /// Generator-built m = a sin h with configurable alpha, n and envelope
    H,
    /// The corrugated family: h with alpha = 1/3 and envelope sin^2 2x
    Corrugated,
}

#[derive(Args)]
struct FamilySpec {
    /// Metric profile family
    #[arg(long, value_enum, default_value_t = Family::UnitSphere)]
    family: Family,
    /// Curvature parameter of the lambda family (>= 0)
    #[arg(long)]
    lambda: Option<f64>,
    /// Generator slope parameter of the h family, in (0, 1/2)
    #[arg(long)]
    alpha: Option<f64>,
    /// Corrugation count of the h and corrugated families
    #[arg(long)]
    n: Option<u32>,
    /// Corrugation envelope of the h family: `sin2sq` or
    /// `sin2sq-poly:c0,c1,...` for sin^2 2x times a polynomial in cos^2 x
    #[arg(long)]
    b: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct ProfileCmd {
    #[command(flatten)]
    family: FamilySpec,
    /// Table rows, spread uniformly over [0, pi]
    #[arg(long, default_value_t = 181)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HalfperiodCmd {
    #[command(flatten)]
    family: FamilySpec,
    /// Table rows over the Clairaut range [a/100, 0.99 a]
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// Quadrature tolerance per half-period evaluation
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CutlocusCmd {
    #[command(flatten)]
    family: FamilySpec,
    /// Meridian distance of the base point, in (0, pi)
    #[arg(long, default_value_t = PI / 3.0)]
    r0: f64,
    /// Longitude of the base point
    #[arg(long, default_value_t = 0.0)]
    theta0: f64,
    /// Launch directions in the shared geodesic fan
    #[arg(long, default_value_t = 1024)]
    fan: usize,
    /// Directions refined all the way to cut points
    #[arg(long, default_value_t = 32)]
    directions: usize,
    /// Minimality-loss tolerance; the radial verdict allows 10x this
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExtremaCmd {
    #[command(flatten)]
    family: FamilySpec,
    /// Lower end of the scan interval (away from the pole)
    #[arg(long, default_value_t = 0.01)]
    lo: f64,
    /// Upper end of the scan interval
    #[arg(long, default_value_t = FRAC_PI_2 - 0.01)]
    hi: f64,
    /// Scan grid density (raised automatically for corrugated profiles)
    #[arg(long, default_value_t = 1000)]
    grid: usize,
    /// Alternation window lower end (corrugated families only)
    #[arg(long, default_value_t = 0.6)]
    window_lo: f64,
    /// Alternation window upper end
    #[arg(long, default_value_t = 0.9)]
    window_hi: f64,
    /// Margin delta defining the alternation constants
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyCmd {
    /// Single check to run (default: the whole suite)
    #[arg(long)]
    check: Option<String>,
    /// Work scale preset
    #[arg(long, value_enum, default_value_t = Scale::Full)]
    scale: Scale,
    /// Override: directions per geodesic fan
    #[arg(long)]
    fan: Option<usize>,
    /// Override: directions traced per cut locus
    #[arg(long)]
    directions: Option<usize>,
    /// Override: random shots in the integrity check
    #[arg(long)]
    shots: Option<usize>,
    /// Override: half-period table resolution
    #[arg(long)]
    table: Option<usize>,
    /// Override: grid density for sweeps
    #[arg(long)]
    grid: Option<usize>,
    /// Override: seed for random draws
    #[arg(long)]
    seed: Option<u64>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scale {
    Quick,
    Full,
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<revsphere::Error> for Failure {
    fn from(e: revsphere::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

/// Wrap a library error that directly echoes a flag value.
fn usage(e: revsphere::Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = apply_thread_cap() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// `REVSPHERE_THREADS` caps the rayon pool; unset means the default.
fn apply_thread_cap() -> Result<(), String> {
    let value = match std::env::var("REVSPHERE_THREADS") {
        Ok(v) => v,
        Err(std::env::VarError::NotPresent) => return Ok(()),
        Err(e) => return Err(format!("REVSPHERE_THREADS: {e}")),
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| format!("REVSPHERE_THREADS must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| format!("thread pool setup: {e}"))
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Profile(cmd) => cmd_profile(cmd),
        Command::Halfperiod(cmd) => cmd_halfperiod(cmd),
        Command::Cutlocus(cmd) => cmd_cutlocus(cmd),
        Command::Extrema(cmd) => cmd_extrema(cmd),
        Command::Verify(cmd) => cmd_verify(cmd),
    }
}

impl FamilySpec {
    fn build(&self) -> Result<MetricProfile, Failure> {
        match self.family {
            Family::UnitSphere => {
                self.forbid(self.lambda.is_none(), "--lambda")?;
                self.forbid(self.alpha.is_none(), "--alpha")?;
                self.forbid(self.n.is_none(), "--n")?;
                self.forbid(self.b.is_none(), "--b")?;
                Ok(MetricProfile::unit_sphere())
            }
            Family::Lambda => {
                self.forbid(self.alpha.is_none(), "--alpha")?;
                self.forbid(self.n.is_none(), "--n")?;
                self.forbid(self.b.is_none(), "--b")?;
                let lambda = self
                    .lambda
                    .ok_or_else(|| Failure::Usage("the lambda family needs --lambda".into()))?;
                MetricProfile::lambda_family(lambda).map_err(usage)
            }
            Family::H => {
                self.forbid(self.lambda.is_none(), "--lambda")?;
                let alpha = self
                    .alpha
                    .ok_or_else(|| Failure::Usage("the h family needs --alpha".into()))?;
                let n = self
                    .n
                    .ok_or_else(|| Failure::Usage("the h family needs --n".into()))?;
                let b = parse_b(self.b.as_deref().unwrap_or("sin2sq"))?;
                MetricProfile::h_family(alpha, n, b).map_err(usage)
            }
            Family::Corrugated => {
                self.forbid(self.lambda.is_none(), "--lambda")?;
                self.forbid(self.alpha.is_none(), "--alpha")?;
                self.forbid(self.b.is_none(), "--b")?;
                let n = self
                    .n
                    .ok_or_else(|| Failure::Usage("the corrugated family needs --n".into()))?;
                MetricProfile::corrugated_family(n).map_err(usage)
            }
        }
    }

    fn forbid(&self, absent: bool, flag: &str) -> Result<(), Failure> {
        if absent {
            Ok(())
        } else {
            Err(Failure::Usage(format!(
                "{flag} does not apply to the {} family",
                match self.family {
                    Family::UnitSphere => "unit-sphere",
                    Family::Lambda => "lambda",
                    Family::H => "h",
                    Family::Corrugated => "corrugated",
                }
            )))
        }
    }
}

fn parse_b(text: &str) -> Result<BFunction, Failure> {
    if text == "sin2sq" {
        return Ok(BFunction::SinSq);
    }
    if let Some(list) = text.strip_prefix("sin2sq-poly:") {
        let coefficients = list
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| Failure::Usage(format!("bad envelope coefficient in {text:?}: {e}")))?;
        return Ok(BFunction::SinSqPoly(coefficients));
    }
    Err(Failure::Usage(format!(
        "unknown envelope {text:?} (expected `sin2sq` or `sin2sq-poly:c0,c1,...`)"
    )))
}

/// Family block shared by every JSON report.
#[derive(Serialize)]
struct FamilyMeta {
    name: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<String>,
    equator_radius: f64,
}

impl FamilyMeta {
    fn of(p: &MetricProfile) -> Self {
        let gen = p.generator();
        Self {
            name: p.family_tag(),
            lambda: p.lambda(),
            alpha: gen.map(|g| g.alpha),
            n: gen.map(|g| g.n),
            b: gen.map(|g| render_b(&g.b)),
            equator_radius: p.equator_radius(),
        }
    }
}

fn render_b(b: &BFunction) -> String {
    match b {
        BFunction::Zero => "zero".into(),
        BFunction::SinSq => "sin2sq".into(),
        BFunction::SinSqPoly(c) => {
            let list: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            format!("sin2sq-poly:{}", list.join(","))
        }
    }
}

/// 17 significant digits: enough for f64 to round-trip exactly.
fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::Run(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::Run(format!("serializing report: {e}")))?;
    text.push('\n');
    Ok(text)
}

#[derive(Serialize)]
struct ProfileReport {
    schema_version: u32,
    tool_version: &'static str,
    family: FamilyMeta,
    r: Vec<f64>,
    m: Vec<f64>,
    dm: Vec<f64>,
    d2m: Vec<f64>,
    curvature: Vec<f64>,
}

fn cmd_profile(cmd: ProfileCmd) -> Result<ExitCode, Failure> {
    if cmd.samples < 2 {
        return Err(Failure::Usage(format!("--samples must be at least 2, got {}", cmd.samples)));
    }
    let p = cmd.family.build()?;
    let rows: Vec<(f64, f64, f64, f64, f64)> = (0..cmd.samples)
        .map(|i| {
            let r = PI * i as f64 / (cmd.samples - 1) as f64;
            (r, p.m(r), p.dm(r), p.d2m(r), gaussian_curvature(&p, r))
        })
        .collect();

    let content = match cmd.format {
        Format::Csv => {
            let mut text = String::from("r,m,dm,d2m,curvature\n");
            for (r, m, dm, d2m, g) in &rows {
                let _ = writeln!(
                    text,
                    "{},{},{},{},{}",
                    csv_float(*r),
                    csv_float(*m),
                    csv_float(*dm),
                    csv_float(*d2m),
                    csv_float(*g)
                );
            }
            text
        }
        Format::Json => to_json(&ProfileReport {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION,
            family: FamilyMeta::of(&p),
            r: rows.iter().map(|t| t.0).collect(),
            m: rows.iter().map(|t| t.1).collect(),
            dm: rows.iter().map(|t| t.2).collect(),
            d2m: rows.iter().map(|t| t.3).collect(),
            curvature: rows.iter().map(|t| t.4).collect(),
        })?,
    };
    emit(cmd.out.as_ref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct HalfperiodReport {
    schema_version: u32,
    tool_version: &'static str,
    family: FamilyMeta,
    tol: f64,
    nu: Vec<f64>,
    phi: Vec<f64>,
    err: Vec<f64>,
    strictly_decreasing: bool,
    /// Minimum over pairs of `drop - 10 (err_i + err_{i+1})`.
    min_excess: f64,
}

fn cmd_halfperiod(cmd: HalfperiodCmd) -> Result<ExitCode, Failure> {
    if cmd.samples < 2 {
        return Err(Failure::Usage(format!("--samples must be at least 2, got {}", cmd.samples)));
    }
    let p = cmd.family.build()?;
    let rep = monotonicity_report(&p, cmd.samples, cmd.tol)?;

    let content = match cmd.format {
        Format::Csv => {
            let mut text = String::from("nu,phi,err\n");
            for s in &rep.samples {
                let _ = writeln!(
                    text,
                    "{},{},{}",
                    csv_float(s.nu),
                    csv_float(s.value),
                    csv_float(s.err_estimate)
                );
            }
            let _ = writeln!(text, "# strictly_decreasing={}", rep.strictly_decreasing);
            text
        }
        Format::Json => to_json(&HalfperiodReport {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION,
            family: FamilyMeta::of(&p),
            tol: cmd.tol,
            nu: rep.samples.iter().map(|s| s.nu).collect(),
            phi: rep.samples.iter().map(|s| s.value).collect(),
            err: rep.samples.iter().map(|s| s.err_estimate).collect(),
            strictly_decreasing: rep.strictly_decreasing,
            min_excess: rep.min_excess,
        })?,
    };
    emit(cmd.out.as_ref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct CutRow {
    xi: f64,
    arc_length: f64,
    r: f64,
    theta: f64,
    snapped_to_antipode: bool,
}

#[derive(Serialize)]
struct CutLocusJson {
    schema_version: u32,
    tool_version: &'static str,
    family: FamilyMeta,
    base_r: f64,
    base_theta: f64,
    fan_size: usize,
    directions: usize,
    loss_tol: f64,
    expected_parallel: f64,
    max_radial_deviation: f64,
    radial_ok: bool,
    theta_offset_min: f64,
    theta_offset_max: f64,
    max_mirror_defect: f64,
    cuts: Vec<CutRow>,
}

fn cmd_cutlocus(cmd: CutlocusCmd) -> Result<ExitCode, Failure> {
    let p = cmd.family.build()?;
    let base = SurfacePoint::new(cmd.r0, cmd.theta0).map_err(usage)?;
    if base.is_pole() {
        return Err(Failure::Usage(format!("--r0 must be an interior point, got {}", cmd.r0)));
    }
    let fan = GeodesicFan::new(&p, base, cmd.fan, DEFAULT_FAN_LENGTH, 1e-7, DEFAULT_SAMPLE_SPACING)
        .map_err(usage)?;
    let rep = cut_locus(&p, &fan, cmd.directions, cmd.tol)?;

    let rows: Vec<CutRow> = rep
        .cuts
        .iter()
        .map(|c| CutRow {
            xi: c.xi,
            arc_length: c.arc_length,
            r: c.point.r(),
            theta: c.point.theta(),
            snapped_to_antipode: c.snapped_to_antipode,
        })
        .collect();

    let content = match cmd.format {
        Format::Csv => {
            let mut text = String::from("xi,cut_r,cut_theta,cut_distance\n");
            for row in &rows {
                let _ = writeln!(
                    text,
                    "{},{},{},{}",
                    csv_float(row.xi),
                    csv_float(row.r),
                    csv_float(row.theta),
                    csv_float(row.arc_length)
                );
            }
            let _ = writeln!(
                text,
                "# expected_parallel={} max_radial_deviation={} radial_ok={}",
                csv_float(rep.expected_parallel),
                csv_float(rep.max_radial_deviation),
                rep.radial_ok
            );
            text
        }
        Format::Json => to_json(&CutLocusJson {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION,
            family: FamilyMeta::of(&p),
            base_r: cmd.r0,
            base_theta: cmd.theta0,
            fan_size: cmd.fan,
            directions: cmd.directions,
            loss_tol: cmd.tol,
            expected_parallel: rep.expected_parallel,
            max_radial_deviation: rep.max_radial_deviation,
            radial_ok: rep.radial_ok,
            theta_offset_min: rep.theta_offset_min,
            theta_offset_max: rep.theta_offset_max,
            max_mirror_defect: rep.max_mirror_defect,
            cuts: rows,
        })?,
    };
    emit(cmd.out.as_ref(), &content)?;
    // the report is still written on failure; only the status reflects it
    Ok(if rep.radial_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
struct ExtremumRow {
    location: f64,
    kind: &'static str,
}

#[derive(Serialize)]
struct NodeRow {
    k: u32,
    t: f64,
    derivative: f64,
    expected_sign: i8,
    sign_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
}

#[derive(Serialize)]
struct AlternationJson {
    window_lo: f64,
    window_hi: f64,
    delta: f64,
    strict_alternation: bool,
    max_abs_epsilon: f64,
    epsilon_ok: bool,
    max_abs_f: f64,
    f_bound: f64,
    f_ok: bool,
    min_sin_2h: f64,
    sin_ok: bool,
    sup_ok: bool,
    n_ok: bool,
    gap_count: usize,
    nodes: Vec<NodeRow>,
}

#[derive(Serialize)]
struct ExtremaJson {
    schema_version: u32,
    tool_version: &'static str,
    family: FamilyMeta,
    interval_lo: f64,
    interval_hi: f64,
    grid: usize,
    count: usize,
    extrema: Vec<ExtremumRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alternation: Option<AlternationJson>,
}

fn cmd_extrema(cmd: ExtremaCmd) -> Result<ExitCode, Failure> {
    let p = cmd.family.build()?;
    let interval = Interval::new(cmd.lo, cmd.hi).map_err(usage)?;
    let extrema = count_extrema(&p, interval, cmd.grid).map_err(usage)?;
    let rows: Vec<ExtremumRow> = extrema
        .iter()
        .map(|e| ExtremumRow {
            location: e.location,
            kind: match e.kind {
                ExtremumKind::Minimum => "minimum",
                ExtremumKind::Maximum => "maximum",
            },
        })
        .collect();

    // node diagnostics only make sense with a corrugation to alternate
    let alternation = match p.generator() {
        Some(gen) if gen.n > 0 => {
            let window = Interval::new(cmd.window_lo, cmd.window_hi).map_err(usage)?;
            let rep = alternation_report(gen, window, cmd.delta).map_err(usage)?;
            Some(AlternationJson {
                window_lo: cmd.window_lo,
                window_hi: cmd.window_hi,
                delta: cmd.delta,
                strict_alternation: rep.strict_alternation,
                max_abs_epsilon: rep.max_abs_epsilon,
                epsilon_ok: rep.epsilon_ok,
                max_abs_f: rep.max_abs_f,
                f_bound: rep.f_bound,
                f_ok: rep.f_ok,
                min_sin_2h: rep.min_sin_2h,
                sin_ok: rep.sin_ok,
                sup_ok: rep.sup_ok,
                n_ok: rep.n_ok,
                gap_count: rep.gap_count,
                nodes: rep
                    .nodes
                    .iter()
                    .map(|d| NodeRow {
                        k: d.k,
                        t: d.t,
                        derivative: d.derivative,
                        expected_sign: d.expected_sign,
                        sign_ok: d.sign_ok,
                        epsilon: d.epsilon,
                    })
                    .collect(),
            })
        }
        _ => None,
    };

    let report = ExtremaJson {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION,
        family: FamilyMeta::of(&p),
        interval_lo: cmd.lo,
        interval_hi: cmd.hi,
        grid: cmd.grid,
        count: rows.len(),
        extrema: rows,
        alternation,
    };
    emit(cmd.out.as_ref(), &to_json(&report)?)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VerifyJson {
    schema_version: u32,
    tool_version: &'static str,
    scale: &'static str,
    config: VerifyConfig,
    checks: Vec<revsphere::verify::ClaimCheck>,
    all_passed: bool,
}

fn cmd_verify(cmd: VerifyCmd) -> Result<ExitCode, Failure> {
    let mut config = match cmd.scale {
        Scale::Quick => VerifyConfig::quick(),
        Scale::Full => VerifyConfig::full(),
    };
    if let Some(fan) = cmd.fan {
        config.fan_size = fan;
    }
    if let Some(directions) = cmd.directions {
        config.cut_directions = directions;
    }
    if let Some(shots) = cmd.shots {
        config.random_shots = shots;
    }
    if let Some(table) = cmd.table {
        config.table_samples = table;
    }
    if let Some(grid) = cmd.grid {
        config.grid = grid;
    }
    if let Some(seed) = cmd.seed {
        config.seed = seed;
    }

    let checks = match &cmd.check {
        None => run_all(&config),
        Some(name) => match run_named(&config, name) {
            Some(check) => vec![check],
            None => {
                return Err(Failure::Usage(format!(
                    "unknown check {name:?}; valid names: {}",
                    CHECK_NAMES.join(", ")
                )))
            }
        },
    };
    let all_passed = checks.iter().all(|c| c.passed);

    let report = VerifyJson {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION,
        scale: match cmd.scale {
            Scale::Quick => "quick",
            Scale::Full => "full",
        },
        config,
        checks,
        all_passed,
    };
    emit(cmd.out.as_ref(), &to_json(&report)?)?;
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
