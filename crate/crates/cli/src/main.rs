mod output;
mod parse;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use s3dirac::blocks::{build_from_representation, build_level};
use s3dirac::error::Error;
use s3dirac::gershgorin::base_cases;
use s3dirac::inverse::{reconstruct, Discriminator, ReconstructionInput, ReconstructionResult};
use s3dirac::metric::{HeatInvariants, Manifold, Metric, MetricInvariants, ScalSign};
use s3dirac::spectrum::{
    assemble, certify_smallest, counting_function, heat_trace, heat_trace_asymptotic, smallest,
    weyl_count, CountReport, HeatTrace, MergedLine, SmallestEigenvalueReport, SmallestOptions,
    SpectralLine, StepSummary, DEFAULT_HORIZON, DEFAULT_MAX_LEVEL, DEFAULT_MERGE_TOL,
};

use output::{format_float, to_json, CommandEcho, OutputDocument, SCHEMA_VERSION};

/// Dirac spectra of left-invariant metrics on S³ and SO(3).
#[derive(Parser, Debug)]
#[command(name = "s3dirac", version)]
struct Cli {
    /// Add wall-clock time to the output document.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct MetricArgs {
    /// Metric parameters `a,b,c`; decimals or rationals such as `1/2`.
    #[arg(long, value_parser = parse::parse_triple, allow_hyphen_values = true)]
    metric: [f64; 3],
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ManifoldArg {
    S3,
    So3Trivial,
    So3Nontrivial,
}

impl From<ManifoldArg> for Manifold {
    fn from(m: ManifoldArg) -> Self {
        match m {
            ManifoldArg::S3 => Manifold::S3,
            ManifoldArg::So3Trivial => Manifold::So3Trivial,
            ManifoldArg::So3Nontrivial => Manifold::So3Nontrivial,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalues of D over levels 0..=max-level.
    Spectrum {
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, value_enum)]
        manifold: ManifoldArg,
        #[arg(long)]
        max_level: usize,
        /// Relative tolerance of the merged view.
        #[arg(long, value_parser = parse::parse_number, default_value_t = DEFAULT_MERGE_TOL)]
        merge_tol: f64,
        /// Also emit lines combined across levels (JSON only).
        #[arg(long)]
        merged: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Smallest |eigenvalue|, certified when scal > 0.
    Smallest {
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, value_enum)]
        manifold: ManifoldArg,
        #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
        max_level: usize,
        /// Verification horizon of the certificate.
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
        /// Fail instead of reporting an uncertified minimum when scal <= 0.
        #[arg(long)]
        require_certificate: bool,
        /// Include every evaluated inequality, not only per-step summaries.
        #[arg(long)]
        full_trace: bool,
    },
    /// Curvature, volume and heat invariants.
    Invariants {
        #[command(flatten)]
        metric: MetricArgs,
        /// Restrict heat invariants to one manifold.
        #[arg(long, value_enum)]
        manifold: Option<ManifoldArg>,
    },
    /// Recover (a, b, c) from volume, scal and one more spectral invariant.
    #[command(group(ArgGroup::new("discriminator").required(true).args(["mu", "c", "a2tilde"])))]
    Reconstruct {
        #[arg(long, value_enum)]
        manifold: ManifoldArg,
        #[arg(long, value_parser = parse::parse_number, allow_hyphen_values = true)]
        volume: f64,
        #[arg(long, value_parser = parse::parse_number, allow_hyphen_values = true)]
        scal: f64,
        /// Smallest |eigenvalue| on s3 or so3-nontrivial (scal > 0).
        #[arg(long, value_parser = parse::parse_number, allow_hyphen_values = true)]
        mu: Option<f64>,
        /// Smallest |eigenvalue| on so3-trivial (scal > 0).
        #[arg(long = "c", value_parser = parse::parse_number, allow_hyphen_values = true)]
        c: Option<f64>,
        /// 8|Ric|^2 + 7|Riem|^2 (scal <= 0).
        #[arg(long, value_parser = parse::parse_number, allow_hyphen_values = true)]
        a2tilde: Option<f64>,
    },
    /// Truncated heat trace Tr exp(-t D^2) with its small-time expansion.
    HeatTrace {
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, value_enum)]
        manifold: ManifoldArg,
        #[arg(long, value_parser = parse::parse_number)]
        t: f64,
        #[arg(long)]
        max_level: usize,
    },
    /// Number of eigenvalues with |lambda| <= Lambda.
    Count {
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, value_enum)]
        manifold: ManifoldArg,
        #[arg(long, value_parser = parse::parse_number)]
        lambda: f64,
        #[arg(long)]
        max_level: usize,
    },
    /// Certificates, base cases and the representation oracle over a grid.
    Verify {
        /// Three axes `lo:hi:count`, comma-separated.
        #[arg(long, value_parser = parse::parse_grid)]
        grid: [Vec<f64>; 3],
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
        /// Highest level of the representation oracle comparison.
        #[arg(long, default_value_t = 12)]
        oracle_max_level: usize,
    },
}

#[derive(Debug)]
enum Failure {
    /// Bad input: exit code 2.
    Usage(String),
    /// A check did not pass: exit code 1.
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. }
            | Error::UnsupportedLevel { .. }
            | Error::Precondition(_)
            | Error::WrongRegime(_)
            | Error::InconsistentInput(_) => Failure::Usage(e.to_string()),
            _ => Failure::Verification(e.to_string()),
        }
    }
}

/// What a command produced: the text to print and whether every check passed.
struct Rendered {
    body: String,
    passed: bool,
}

fn metric_of(args: &MetricArgs) -> Result<Metric, Failure> {
    let [a, b, c] = args.metric;
    Ok(Metric::new(a, b, c)?)
}

#[derive(Serialize)]
struct SpectrumResult<'a> {
    max_level: usize,
    merge_tolerance: f64,
    line_count: usize,
    total_multiplicity: usize,
    lines: &'a [SpectralLine],
    #[serde(skip_serializing_if = "Option::is_none")]
    merged: Option<Vec<MergedLine>>,
}

#[derive(Serialize)]
struct ManifoldHeat {
    manifold: Manifold,
    volume: f64,
    #[serde(flatten)]
    heat: HeatInvariants,
}

#[derive(Serialize)]
struct InvariantsResult {
    scal_sign: ScalSign,
    invariants: MetricInvariants,
    heat: Vec<ManifoldHeat>,
}

#[derive(Serialize)]
struct ReconstructResult {
    input: ReconstructionInput,
    #[serde(flatten)]
    result: ReconstructionResult,
}

#[derive(Serialize)]
struct HeatTraceResult {
    #[serde(flatten)]
    trace: HeatTrace,
    asymptotic: f64,
    relative_deviation: f64,
    heat_invariants: HeatInvariants,
}

#[derive(Serialize)]
struct CountResult {
    #[serde(flatten)]
    count: CountReport,
    weyl_estimate: f64,
}

#[derive(Serialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum PointStatus {
    Pass,
    Fail,
    Skip,
}

#[derive(Serialize)]
struct VerifyPoint {
    metric: Metric,
    scal: f64,
    scal_sign: ScalSign,
    status: PointStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    oracle_max_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    base_case_min_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certification: Option<Vec<StepSummary>>,
}

#[derive(Serialize)]
struct VerifySummary {
    points: usize,
    passed: usize,
    failed: usize,
    skipped: usize,
}

#[derive(Serialize)]
struct VerifyResult {
    horizon: usize,
    oracle_max_level: usize,
    summary: VerifySummary,
    points: Vec<VerifyPoint>,
}

/// Largest entry deviation between the representation-built and
/// recurrence-built blocks over levels `0..=max_level`, scaled by the block
/// size of the entries.
fn oracle_deviation(m: &Metric, max_level: usize) -> Result<f64, Error> {
    let mut worst = 0.0_f64;
    for n in 0..=max_level {
        let split = build_from_representation(m, n).split()?;
        for (rep, rec) in split.iter().zip(build_level(m, n)) {
            let scale = 1.0 + rec.max_abs();
            let a = rep.diag.iter().chain(&rep.sub).chain(&rep.sup);
            let b = rec.diag.iter().chain(&rec.sub).chain(&rec.sup);
            for (x, y) in a.zip(b) {
                worst = worst.max((x - y).abs() / scale);
            }
        }
    }
    Ok(worst)
}

const ORACLE_TOL: f64 = 1e-12;

fn verify_point(m: Metric, horizon: usize, oracle_max_level: usize) -> VerifyPoint {
    let mut point = VerifyPoint {
        metric: m,
        scal: m.scal(),
        scal_sign: m.scal_sign(),
        status: PointStatus::Pass,
        reason: None,
        oracle_max_deviation: f64::NAN,
        base_case_min_margin: None,
        certification: None,
    };
    match oracle_deviation(&m, oracle_max_level) {
        Ok(dev) => {
            point.oracle_max_deviation = dev;
            if dev > ORACLE_TOL {
                point.status = PointStatus::Fail;
                point.reason = Some(format!("representation oracle deviates by {dev:e}"));
                return point;
            }
        }
        Err(e) => {
            point.status = PointStatus::Fail;
            point.reason = Some(e.to_string());
            return point;
        }
    }
    if point.scal_sign != ScalSign::Positive {
        point.status = PointStatus::Skip;
        point.reason = Some(format!(
            "scal = {} is not positive; no certificate exists",
            format_float(point.scal)
        ));
        return point;
    }
    let outcome = base_cases(&m, horizon).and_then(|base| {
        point.base_case_min_margin = Some(base.min_margin());
        certify_smallest(&m, horizon)
    });
    match outcome {
        Ok(trace) => point.certification = Some(trace.steps),
        Err(e) => {
            point.status = PointStatus::Fail;
            point.reason = Some(e.to_string());
        }
    }
    point
}

fn spectrum_csv(lines: &[SpectralLine]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::Verification(format!("writing CSV: {e}"));
    w.write_record(["eigenvalue", "level", "block", "multiplicity"])
        .map_err(io)?;
    for l in lines {
        w.write_record([
            format_float(l.eigenvalue),
            l.level.to_string(),
            l.blocks.as_str().to_string(),
            l.total_multiplicity.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::Verification(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV of ASCII fields"))
}

/// Everything the output document needs besides the payload.
struct Context {
    echo: CommandEcho,
    started: Instant,
    timing: bool,
}

impl Context {
    fn render<R: Serialize>(
        &self,
        metric: Option<Metric>,
        manifold: Option<Manifold>,
        result: &R,
    ) -> String {
        to_json(&OutputDocument {
            schema_version: SCHEMA_VERSION,
            command: &self.echo,
            metric,
            manifold,
            result,
            timing_ms: self
                .timing
                .then(|| self.started.elapsed().as_secs_f64() * 1e3),
        })
    }
}

fn run(command: &Command, ctx: &Context) -> Result<Rendered, Failure> {
    let ok = |body: String| Ok(Rendered { body, passed: true });

    match command {
        Command::Spectrum {
            metric,
            manifold,
            max_level,
            merge_tol,
            merged,
            format,
        } => {
            let m = metric_of(metric)?;
            let manifold = Manifold::from(*manifold);
            if !(*merge_tol >= 0.0) {
                return Err(Failure::Usage(format!(
                    "--merge-tol must be non-negative, got {merge_tol}"
                )));
            }
            let spectrum = assemble(&m, manifold, *max_level)?.with_merge_tolerance(*merge_tol);
            match format {
                Format::Csv => {
                    if *merged {
                        return Err(Failure::Usage(
                            "the merged view is only available as JSON".into(),
                        ));
                    }
                    ok(spectrum_csv(&spectrum.lines)?)
                }
                Format::Json => {
                    let result = SpectrumResult {
                        max_level: *max_level,
                        merge_tolerance: *merge_tol,
                        line_count: spectrum.lines.len(),
                        total_multiplicity: spectrum.total_count(),
                        lines: &spectrum.lines,
                        merged: merged.then(|| spectrum.merged()),
                    };
                    ok(ctx.render(Some(m), Some(manifold), &result))
                }
            }
        }
        Command::Smallest {
            metric,
            manifold,
            max_level,
            horizon,
            require_certificate,
            full_trace,
        } => {
            let m = metric_of(metric)?;
            let manifold = Manifold::from(*manifold);
            let opts = SmallestOptions {
                max_level: *max_level,
                require_certificate: *require_certificate,
                horizon: *horizon,
            };
            let mut report: SmallestEigenvalueReport = smallest(&m, manifold, &opts)?;
            if !full_trace {
                if let Some(trace) = report.certification.as_mut() {
                    trace.records.clear();
                }
            }
            ok(ctx.render(Some(m), Some(manifold), &report))
        }
        Command::Invariants { metric, manifold } => {
            let m = metric_of(metric)?;
            let manifolds: Vec<Manifold> = match manifold {
                Some(x) => vec![Manifold::from(*x)],
                None => Manifold::ALL.to_vec(),
            };
            let result = InvariantsResult {
                scal_sign: m.scal_sign(),
                invariants: m.invariants(),
                heat: manifolds
                    .iter()
                    .map(|&x| ManifoldHeat {
                        manifold: x,
                        volume: m.volume(x),
                        heat: m.heat_invariants(x),
                    })
                    .collect(),
            };
            ok(ctx.render(Some(m), manifold.map(Manifold::from), &result))
        }
        Command::Reconstruct {
            manifold,
            volume,
            scal,
            mu,
            c,
            a2tilde,
        } => {
            let discriminator = match (mu, c, a2tilde) {
                (Some(x), None, None) => Discriminator::Mu(*x),
                (None, Some(x), None) => Discriminator::C(*x),
                (None, None, Some(x)) => Discriminator::A2Tilde(*x),
                _ => {
                    return Err(Failure::Usage(
                        "give exactly one of --mu, --c, --a2tilde".into(),
                    ))
                }
            };
            let input = ReconstructionInput {
                manifold: Manifold::from(*manifold),
                volume: *volume,
                scal: *scal,
                discriminator,
            };
            let result = reconstruct(&input)?;
            let metric = result.metric();
            ok(ctx.render(
                Some(metric),
                Some(input.manifold),
                &ReconstructResult { input, result },
            ))
        }
        Command::HeatTrace {
            metric,
            manifold,
            t,
            max_level,
        } => {
            let m = metric_of(metric)?;
            let manifold = Manifold::from(*manifold);
            let trace = heat_trace(&m, manifold, *t, *max_level)?;
            let asymptotic = heat_trace_asymptotic(&m, manifold, *t);
            let result = HeatTraceResult {
                relative_deviation: (trace.value - asymptotic).abs() / asymptotic.abs(),
                trace,
                asymptotic,
                heat_invariants: m.heat_invariants(manifold),
            };
            ok(ctx.render(Some(m), Some(manifold), &result))
        }
        Command::Count {
            metric,
            manifold,
            lambda,
            max_level,
        } => {
            let m = metric_of(metric)?;
            let manifold = Manifold::from(*manifold);
            let count = counting_function(&m, manifold, *lambda, *max_level)?;
            let result = CountResult {
                weyl_estimate: weyl_count(m.volume(manifold), *lambda),
                count,
            };
            ok(ctx.render(Some(m), Some(manifold), &result))
        }
        Command::Verify {
            grid,
            horizon,
            oracle_max_level,
        } => {
            if *horizon < 6 {
                return Err(Failure::Usage(format!(
                    "--horizon must be at least 6, got {horizon}"
                )));
            }
            let mut metrics = Vec::new();
            for &a in &grid[0] {
                for &b in &grid[1] {
                    for &c in &grid[2] {
                        metrics.push(Metric::new(a, b, c)?);
                    }
                }
            }
            let points: Vec<VerifyPoint> = metrics
                .par_iter()
                .map(|&m| verify_point(m, *horizon, *oracle_max_level))
                .collect();
            let count = |s: PointStatus| points.iter().filter(|p| p.status == s).count();
            let summary = VerifySummary {
                points: points.len(),
                passed: count(PointStatus::Pass),
                failed: count(PointStatus::Fail),
                skipped: count(PointStatus::Skip),
            };
            let passed = summary.failed == 0;
            let result = VerifyResult {
                horizon: *horizon,
                oracle_max_level: *oracle_max_level,
                summary,
                points,
            };
            Ok(Rendered {
                body: ctx.render(None, None, &result),
                passed,
            })
        }
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Spectrum { .. } => "spectrum",
        Command::Smallest { .. } => "smallest",
        Command::Invariants { .. } => "invariants",
        Command::Reconstruct { .. } => "reconstruct",
        Command::HeatTrace { .. } => "heat-trace",
        Command::Count { .. } => "count",
        Command::Verify { .. } => "verify",
    }
}

fn main() -> ExitCode {
    let started = Instant::now();
    let cli = Cli::parse();
    let echo = CommandEcho {
        name: command_name(&cli.command),
        args: std::env::args().skip(1).collect(),
    };
    let ctx = Context {
        echo,
        started,
        timing: cli.timing,
    };
    match run(&cli.command, &ctx) {
        Ok(rendered) => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{}", rendered.body.trim_end());
            if rendered.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
    }
}
