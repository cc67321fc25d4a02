//! Command-line front end: runs the verification sweeps and emits
//! deterministic JSON/CSV reports and SVG figures.
//!
//! Exit codes: 0 pass/success, 2 failing verdicts, 1 numeric errors,
//! 64 usage errors.

mod jsonfmt;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use robertson::analytic::FunctionSpec;
use robertson::classes::{
    equivalence_check, robertson_report, spirallike_report, DEFAULT_MARGIN_TOL,
};
use robertson::growth::{
    boundedness_integral, cubic_root_x0, envelopes_to_csv, growth_bounds, royster_mu,
    GrowthEnvelope,
};
use robertson::loewner::{
    chain_eval, chain_samples_to_csv, eq43_lhs, chain_positivity_report, DEFAULT_T_VALUES,
};
use robertson::qcext::{admissible_k, dilatation_field, hotta_check, HottaParams};
use robertson::report::{GridSpec, MembershipReport, Verdict};

const EXIT_FAIL_VERDICT: u8 = 2;
const EXIT_NUMERIC: u8 = 1;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "robertson",
    version,
    about = "Numerical verification for spirallike and Robertson functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Membership sweeps and the equivalence chain
    Check(CheckArgs),
    /// Growth envelopes and the boundedness integral series
    Growth(CommonArgs),
    /// Chain positivity and the univalence inequality
    Chain(ChainArgs),
    /// Becker extension with measured complex dilatation
    Extend(ExtendArgs),
    /// Extension inequality with explicit parameters
    Hotta(HottaArgs),
    /// The positive root of 16 x^3 + 16 x^2 + x - 1
    Root(RootArgs),
    /// SVG figures: image curves or envelopes
    Plot(PlotArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Builtin shorthand (identity, half_plane, koebe, f_lambda, p_lambda,
    /// royster) or an inline JSON function spec
    #[arg(long, default_value = "f_lambda")]
    function: String,

    /// lambda in radians
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,

    /// lambda in degrees (alternative to --lambda)
    #[arg(long, allow_negative_numbers = true, conflicts_with = "lambda")]
    lambda_deg: Option<f64>,

    /// Largest grid radius (< 1)
    #[arg(long, default_value_t = 0.99)]
    r_max: f64,

    /// Number of grid circles
    #[arg(long, default_value_t = 40)]
    r_count: usize,

    /// Angular samples per circle
    #[arg(long, default_value_t = 720)]
    n_theta: usize,

    /// Sweep margin tolerance
    #[arg(long, default_value_t = DEFAULT_MARGIN_TOL)]
    tol: f64,

    /// Directory for artifact files (created if missing)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Payload format for stdout
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Print the fully-resolved run configuration and exit
    #[arg(long)]
    emit_config: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassKind {
    Robertson,
    Spirallike,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Which membership class to sweep
    #[arg(long, value_enum, default_value_t = ClassKind::Robertson)]
    class: ClassKind,
}

#[derive(Args)]
struct ChainArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Chain times, comma separated
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    t: Option<Vec<f64>>,
}

#[derive(Args)]
struct ExtendArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Outer radius of the measured annulus
    #[arg(long, default_value_t = 3.0)]
    r_out: f64,
    /// Radial samples
    #[arg(long, default_value_t = 100)]
    n_r: usize,
    /// Finite-difference step
    #[arg(long, default_value_t = 1e-5)]
    fd_step: f64,
    /// Dilatation bound to verify against (default 2 cos lambda)
    #[arg(long)]
    k: Option<f64>,
}

#[derive(Args)]
struct HottaArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Weight in the combined functional; sets s = 1/(1+q)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    q: f64,
    /// Override Re s
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Override Im s
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Override c as "re,im" (default 2 s e^{i lambda} cos lambda - s)
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// Quasiconformality constant (default from the admissible table)
    #[arg(long)]
    k: Option<f64>,
}

#[derive(Args)]
struct RootArgs {
    /// Directory for artifact files
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the fully-resolved run configuration and exit
    #[arg(long)]
    emit_config: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlotKind {
    /// Image curves f(r e^{i theta}) for the requested radii
    Image,
    /// Envelope curves psi_lo(r), psi_hi(r)
    Envelope,
}

#[derive(Args)]
struct PlotArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Radii of the plotted circles, comma separated
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = PlotKind::Image)]
    kind: PlotKind,
}

enum CliError {
    Usage(String),
    Numeric(robertson::Error),
}

impl From<robertson::Error> for CliError {
    fn from(e: robertson::Error) -> Self {
        CliError::Numeric(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's help/version output is a success, anything else is usage
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Numeric(e)) => {
            print!("{}", jsonfmt::to_canonical_json(&json!({ "error": e.to_string() })));
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}

struct Resolved {
    function: FunctionSpec,
    lambda: f64,
    grid: GridSpec,
}

fn resolve_lambda(common: &CommonArgs) -> f64 {
    common
        .lambda
        .or(common.lambda_deg.map(|d| d.to_radians()))
        .unwrap_or(0.0)
}

fn resolve_function(name: &str, lambda: f64) -> CliResult<FunctionSpec> {
    let trimmed = name.trim();
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed)
            .map_err(|e| CliError::Usage(format!("bad function JSON: {e}")));
    }
    match trimmed {
        "identity" => Ok(FunctionSpec::Identity),
        "half_plane" => Ok(FunctionSpec::HalfPlane),
        "koebe" => Ok(FunctionSpec::spirallike_extremal(0.0)?),
        "f_lambda" => Ok(FunctionSpec::robertson_extremal(lambda)?),
        "p_lambda" => Ok(FunctionSpec::spirallike_extremal(lambda)?),
        "royster" => Ok(FunctionSpec::royster(royster_mu(lambda)?)?),
        other => Err(CliError::Usage(format!(
            "unknown function {other:?}; use identity, half_plane, koebe, f_lambda, \
             p_lambda, royster or inline JSON"
        ))),
    }
}

fn resolve(common: &CommonArgs) -> CliResult<Resolved> {
    let lambda = resolve_lambda(common);
    let function = resolve_function(&common.function, lambda)?;
    let grid = GridSpec::geometric(common.r_count, common.r_max, common.n_theta)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Resolved { function, lambda, grid })
}

fn config_value(command: &str, common: &CommonArgs, resolved: &Resolved, extra: Value) -> Value {
    let mut cfg = json!({
        "command": command,
        "function": serde_json::to_value(&resolved.function).expect("spec serializes"),
        "lambda": resolved.lambda,
        "grid": serde_json::to_value(&resolved.grid).expect("grid serializes"),
        "tol": common.tol,
        "output_dir": common.out.as_ref().map(|p| p.display().to_string()),
        "format": common.format.name(),
    });
    if let Value::Object(extra_map) = extra {
        cfg.as_object_mut().expect("object").extend(extra_map);
    }
    cfg
}

fn write_artifact(dir: &PathBuf, name: &str, content: &str) -> CliResult<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, content)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

fn emit(text: &str) {
    print!("{text}");
}

fn exit_for(verdicts: &[Verdict]) -> u8 {
    if verdicts.iter().all(|v| v.passed()) {
        0
    } else {
        EXIT_FAIL_VERDICT
    }
}

fn report_value(rep: &MembershipReport) -> Value {
    serde_json::to_value(rep).expect("report serializes")
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Check(args) => run_check(args),
        Command::Growth(common) => run_growth(common),
        Command::Chain(args) => run_chain(args),
        Command::Extend(args) => run_extend(args),
        Command::Hotta(args) => run_hotta(args),
        Command::Root(args) => run_root(args),
        Command::Plot(args) => run_plot(args),
    }
}

fn run_check(args: CheckArgs) -> CliResult<u8> {
    let common = &args.common;
    let resolved = resolve(common)?;
    let class_name = match args.class {
        ClassKind::Robertson => "robertson",
        ClassKind::Spirallike => "spirallike",
    };
    let cfg = config_value("check", common, &resolved, json!({ "class": class_name }));
    if common.emit_config {
        emit(&jsonfmt::to_canonical_json(&cfg));
        return Ok(0);
    }

    let mut verdicts = Vec::new();
    let mut doc = json!({ "command": "check", "lambda": resolved.lambda, "class": class_name });
    let obj = doc.as_object_mut().expect("object");

    match args.class {
        ClassKind::Robertson => {
            let membership =
                robertson_report(&resolved.function, resolved.lambda, &resolved.grid, common.tol)?;
            verdicts.push(membership.verdict);
            let eq = equivalence_check(&resolved.function, resolved.lambda, &resolved.grid, common.tol)?;
            verdicts.push(eq.robertson.verdict);
            verdicts.push(eq.shifted_spirallike.verdict);
            verdicts.push(eq.primitive_convexity.verdict);
            obj.insert("membership".into(), report_value(&membership));
            obj.insert(
                "equivalence".into(),
                json!({
                    "robertson": report_value(&eq.robertson),
                    "zfprime_spirallike": report_value(&eq.shifted_spirallike),
                    "alpha_primitive_convexity": report_value(&eq.primitive_convexity),
                    "verdicts_agree": eq.verdicts_agree(),
                }),
            );
        }
        ClassKind::Spirallike => {
            let membership =
                spirallike_report(&resolved.function, resolved.lambda, &resolved.grid, common.tol)?;
            verdicts.push(membership.verdict);
            obj.insert("membership".into(), report_value(&membership));
        }
    }

    let text = jsonfmt::to_canonical_json(&doc);
    if let Some(dir) = &common.out {
        write_artifact(dir, "check.json", &text)?;
    }
    emit(&text);
    Ok(exit_for(&verdicts))
}

fn run_growth(common: CommonArgs) -> CliResult<u8> {
    let resolved = resolve(&common)?;
    let cfg = config_value("growth", &common, &resolved, json!({}));
    if common.emit_config {
        emit(&jsonfmt::to_canonical_json(&cfg));
        return Ok(0);
    }
    let lambda = resolved.lambda;

    let envelopes: Vec<GrowthEnvelope> = resolved
        .grid
        .r_values
        .iter()
        .map(|&r| growth_bounds(lambda, r))
        .collect::<Result<_, _>>()?;
    let csv = envelopes_to_csv(&envelopes);

    let gamma = 2.0 * lambda.cos().powi(2);
    let boundary_case = (gamma - 1.0).abs() < 1e-9;
    let mut series = Vec::new();
    for m in 3..=8 {
        let r = 1.0 - 10f64.powi(-m);
        series.push(json!({ "m": m, "r": r, "value": boundedness_integral(lambda, r)? }));
    }
    let at_one = if gamma < 1.0 - 1e-12 {
        Some(boundedness_integral(lambda, 1.0)?)
    } else {
        None
    };

    let doc = json!({
        "command": "growth",
        "lambda": lambda,
        "envelopes": envelopes.iter().map(|e| json!({
            "r": e.r, "psi_lo": e.psi_lo, "psi_hi": e.psi_hi,
            "theta_lo": e.theta_lo, "theta_hi": e.theta_hi,
        })).collect::<Vec<_>>(),
        "boundedness_integral": {
            "exponent": gamma,
            "series": series,
            "at_one": at_one,
            "divergent_at_one": at_one.is_none(),
            // cos lambda = 1/sqrt(2): boundedness expected but never asserted
            "boundary_case_conjectured_bounded": boundary_case,
        },
    });

    if let Some(dir) = &common.out {
        write_artifact(dir, "growth_envelope.csv", &csv)?;
        write_artifact(dir, "growth.json", &jsonfmt::to_canonical_json(&doc))?;
    }
    match common.format {
        Format::Csv => emit(&csv),
        _ => emit(&jsonfmt::to_canonical_json(&doc)),
    }
    Ok(0)
}

fn run_chain(args: ChainArgs) -> CliResult<u8> {
    let common = &args.common;
    let resolved = resolve(common)?;
    let t_values = args.t.clone().unwrap_or_else(|| DEFAULT_T_VALUES.to_vec());
    let cfg = config_value("chain", common, &resolved, json!({ "t_values": t_values }));
    if common.emit_config {
        emit(&jsonfmt::to_canonical_json(&cfg));
        return Ok(0);
    }

    let positivity = chain_positivity_report(
        &resolved.function,
        resolved.lambda,
        &t_values,
        &resolved.grid,
        common.tol,
    )?;

    let mut rows = Vec::new();
    let mut eq43_max = 0.0_f64;
    let mut eq43_argmax = Complex64::new(0.0, 0.0);
    let mut eq43_argmax_t = 0.0;
    for &t in &t_values {
        for z in resolved.grid.points() {
            let sample = chain_eval(&resolved.function, resolved.lambda, t, z)?;
            let lhs = eq43_lhs(&resolved.function, resolved.lambda, t, z)?;
            if lhs > eq43_max {
                eq43_max = lhs;
                eq43_argmax = z;
                eq43_argmax_t = t;
            }
            rows.push((sample, lhs));
        }
    }
    let eq43_verdict = if eq43_max < 1.0 { Verdict::Pass } else { Verdict::Fail };

    let doc = json!({
        "command": "chain",
        "lambda": resolved.lambda,
        "t_values": t_values,
        "positivity": report_value(&positivity),
        "univalence_inequality": {
            "max_lhs": eq43_max,
            "argmax": [eq43_argmax.re, eq43_argmax.im],
            "argmax_t": eq43_argmax_t,
            "verdict": if eq43_verdict.passed() { "pass" } else { "fail" },
        },
    });

    let csv = chain_samples_to_csv(&rows);
    if let Some(dir) = &common.out {
        write_artifact(dir, "chain_samples.csv", &csv)?;
        write_artifact(dir, "chain.json", &jsonfmt::to_canonical_json(&doc))?;
    }
    match common.format {
        Format::Csv => emit(&csv),
        _ => emit(&jsonfmt::to_canonical_json(&doc)),
    }
    Ok(exit_for(&[positivity.verdict, eq43_verdict]))
}

fn run_extend(args: ExtendArgs) -> CliResult<u8> {
    let common = &args.common;
    let resolved = resolve(common)?;
    let k_bound = args.k.unwrap_or_else(|| 2.0 * resolved.lambda.cos());
    let cfg = config_value(
        "extend",
        common,
        &resolved,
        json!({
            "r_out": args.r_out,
            "n_r": args.n_r,
            "n_theta": common.n_theta,
            "fd_step": args.fd_step,
            "k": k_bound,
        }),
    );
    if common.emit_config {
        emit(&jsonfmt::to_canonical_json(&cfg));
        return Ok(0);
    }

    let field = dilatation_field(
        &resolved.function,
        resolved.lambda,
        args.r_out,
        args.n_r,
        common.n_theta,
        args.fd_step,
    )?;
    // headroom for the finite-difference error in the measured field
    let summary = field.summary(k_bound, 0.01);

    let doc = json!({
        "command": "extend",
        "lambda": resolved.lambda,
        "max_abs_mu": summary.max_abs_mu,
        "k_bound": summary.k_bound,
        "verdict": if summary.verdict.passed() { "pass" } else { "fail" },
        "samples": field.samples.len(),
        "excluded": field.excluded.len(),
        "fd_step": field.fd_step,
    });

    if let Some(dir) = &common.out {
        write_artifact(dir, "extend_field.csv", &field.to_csv())?;
        write_artifact(dir, "extend.json", &jsonfmt::to_canonical_json(&doc))?;
    }
    match common.format {
        Format::Csv => emit(&field.to_csv()),
        _ => emit(&jsonfmt::to_canonical_json(&doc)),
    }
    Ok(exit_for(&[summary.verdict]))
}

fn parse_complex(text: &str) -> CliResult<Complex64> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!("expected \"re,im\", got {text:?}")));
    }
    let re = parts[0]
        .trim()
        .parse::<f64>()
        .map_err(|e| CliError::Usage(format!("bad real part {:?}: {e}", parts[0])))?;
    let im = parts[1]
        .trim()
        .parse::<f64>()
        .map_err(|e| CliError::Usage(format!("bad imaginary part {:?}: {e}", parts[1])))?;
    Ok(Complex64::new(re, im))
}

fn run_hotta(args: HottaArgs) -> CliResult<u8> {
    let common = &args.common;
    let resolved = resolve(common)?;
    if args.q <= -1.0 {
        return Err(CliError::Usage(format!("q = {} must be > -1", args.q)));
    }
    // defaults follow the instantiation that proves the generalized
    // criterion: s = 1/(1+q), c = 2 s e^{i lambda} cos lambda - s
    let a = args.a.unwrap_or(1.0 / (1.0 + args.q));
    let b = args.b.unwrap_or(0.0);
    let s = Complex64::new(a, b);
    let c = match &args.c {
        Some(text) => parse_complex(text)?,
        None => 2.0 * s * Complex64::from_polar(resolved.lambda.cos(), resolved.lambda) - s,
    };
    let k = match args.k {
        Some(k) => k,
        None => {
            let ak = admissible_k(resolved.lambda, args.q, false)?;
            if !ak.usable {
                return Err(CliError::Usage(format!(
                    "admissible k = {} is not below 1; pass --k explicitly",
                    ak.k
                )));
            }
            ak.k
        }
    };

    let cfg = config_value(
        "hotta",
        common,
        &resolved,
        json!({ "q": args.q, "a": a, "b": b, "c": [c.re, c.im], "k": k }),
    );
    if common.emit_config {
        emit(&jsonfmt::to_canonical_json(&cfg));
        return Ok(0);
    }

    let params = HottaParams { a, b, c, k };
    let report = hotta_check(&resolved.function, &params, &resolved.grid, common.tol)?;
    let doc = json!({
        "command": "hotta",
        "lambda": resolved.lambda,
        "a": a,
        "b": b,
        "c": [c.re, c.im],
        "k": k,
        "lhs_max": report.lhs_max,
        "argmax": [report.argmax.re, report.argmax.im],
        "m_bound": report.m_bound,
        "l": report.l,
        "flagged": report.flagged,
        "verdict": if report.verdict.passed() { "pass" } else { "fail" },
    });
    let text = jsonfmt::to_canonical_json(&doc);
    if let Some(dir) = &common.out {
        write_artifact(dir, "hotta.json", &text)?;
    }
    emit(&text);
    Ok(exit_for(&[report.verdict]))
}

fn run_root(args: RootArgs) -> CliResult<u8> {
    if args.emit_config {
        let cfg = json!({
            "command": "root",
            "output_dir": args.out.as_ref().map(|p| p.display().to_string()),
            "format": "json",
        });
        emit(&jsonfmt::to_canonical_json(&cfg));
        return Ok(0);
    }
    let x0 = cubic_root_x0();
    let doc = json!({ "x0": x0 });
    let text = jsonfmt::to_canonical_json(&doc);
    if let Some(dir) = &args.out {
        write_artifact(dir, "root.json", &text)?;
    }
    emit(&text);
    Ok(0)
}

fn run_plot(args: PlotArgs) -> CliResult<u8> {
    let common = &args.common;
    let resolved = resolve(common)?;
    let radii = args.radii.clone().unwrap_or_else(|| vec![0.3, 0.6, 0.9]);
    if radii.iter().any(|&r| !(0.0 < r && r < 1.0)) {
        return Err(CliError::Usage("plot radii must lie in (0, 1)".into()));
    }
    let kind = match args.kind {
        PlotKind::Image => "image",
        PlotKind::Envelope => "envelope",
    };
    let cfg = config_value("plot", common, &resolved, json!({ "radii": radii, "kind": kind }));
    if common.emit_config {
        emit(&jsonfmt::to_canonical_json(&cfg));
        return Ok(0);
    }

    let svg_text = match args.kind {
        PlotKind::Image => {
            let mut curves = Vec::new();
            for &r in &radii {
                let mut pts = Vec::with_capacity(common.n_theta);
                for j in 0..common.n_theta {
                    let theta = std::f64::consts::TAU * j as f64 / common.n_theta as f64;
                    let z = Complex64::from_polar(r, theta);
                    pts.push(resolved.function.jet(z)?.v0);
                }
                curves.push((format!("r={r}"), pts));
            }
            svg::image_curves(&curves)
        }
        PlotKind::Envelope => {
            let rows: Vec<(f64, f64, f64)> = resolved
                .grid
                .r_values
                .iter()
                .map(|&r| growth_bounds(resolved.lambda, r).map(|e| (r, e.psi_lo, e.psi_hi)))
                .collect::<Result<_, _>>()?;
            svg::envelope_plot(&rows)
        }
    };

    if let Some(dir) = &common.out {
        write_artifact(dir, "plot.svg", &svg_text)?;
    }
    emit(&svg_text);
    Ok(0)
}
