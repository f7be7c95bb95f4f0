//! `bimetric` — evaluate connection/curvature tensors of declared metrics
//! and run the residual check suites.
//!
//! Exit codes: 0 success / all checks passed, 1 residual failure, 2 parse
//! error (manifests, expressions), 3 domain or singularity error,
//! 4 configuration error. Reports go to stdout, diagnostics to stderr.

use bimetric::catalog::{self, load_metric};
use bimetric::{
    checks, ChristoffelComponents, DiffMode, Error, MetricField, Point, RiemannComponents,
    TensorComponents,
};
use clap::{Parser, Subcommand};
use std::process::ExitCode;

mod output;

#[derive(Parser)]
#[command(
    name = "bimetric",
    version,
    about = "Connections and curvature of one metric relative to another, with residual check suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a tensor of a metric at one point.
    Eval {
        /// Manifest file path or builtin metric name.
        metric: String,
        /// Tensor to compute: christoffel | riemann | ricci | scalar.
        #[arg(long)]
        kind: String,
        /// Comma-separated coordinates in chart order, e.g. `2,0.7`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Background metric (file or builtin). Defaults to the chart
        /// Euclidean metric.
        #[arg(long)]
        background: Option<String>,
        /// Differentiation mode: dual | fd.
        #[arg(long, default_value = "dual")]
        mode: String,
        /// Emit a JSON object instead of the component listing.
        #[arg(long)]
        json: bool,
    },
    /// Run one named residual check over seeded sample points.
    Check {
        /// theorem1 | theorem2 | cocycle-gamma | cocycle-riemann |
        /// flatness | ricci-identity | compatibility
        name: String,
        /// Metric arguments (files or builtin names); the count depends on
        /// the check: 2 for the theorems and flatness, 3 for the cocycles,
        /// 1 for ricci-identity and compatibility.
        metrics: Vec<String>,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Residual tolerance; defaults to the per-check value for the mode.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value = "dual")]
        mode: String,
    },
    /// Run every check over the builtin catalog plus random metrics.
    Suite {
        /// Chart dimensions to cover.
        #[arg(long, value_delimiter = ',', default_values_t = vec![2usize, 3])]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "dual")]
        mode: String,
    },
    /// List builtin metric names, or print one builtin's manifest.
    Builtins {
        /// Print this builtin's JSON manifest instead of the name list.
        name: Option<String>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Syntax { .. }
        | Error::UnknownIdentifier { .. }
        | Error::UnknownFunction { .. }
        | Error::Manifest { .. } => 2,
        Error::Domain { .. }
        | Error::SingularPoint { .. }
        | Error::NotPositiveDefinite { .. }
        | Error::NonFinite { .. } => 3,
        Error::ChartMismatch { .. }
        | Error::Shape { .. }
        | Error::Config { .. }
        | Error::EmptyRegion
        | Error::UnknownBuiltin { .. }
        | Error::Unsupported { .. } => 4,
    }
}

fn parse_point(text: &str, dimension: usize) -> Result<Point, Error> {
    let coords: Result<Vec<f64>, _> = text
        .split(',')
        .map(|part| part.trim().parse::<f64>())
        .collect();
    let coords = coords.map_err(|_| Error::Config {
        message: format!("cannot parse point `{text}` as comma-separated reals"),
    })?;
    if coords.len() != dimension {
        return Err(Error::Config {
            message: format!(
                "point `{text}` has {} coordinates but the chart has {dimension}",
                coords.len()
            ),
        });
    }
    Point::new(coords)
}

pub(crate) enum EvalResult {
    Christoffel(ChristoffelComponents),
    Riemann(RiemannComponents),
    Ricci(TensorComponents),
    Scalar(f64),
}

fn run_eval(
    metric: &str,
    kind: &str,
    point: &str,
    background: Option<&str>,
    mode: &str,
    json: bool,
) -> Result<(), Error> {
    let metric_field = load_metric(metric)?;
    let mode = mode.parse::<DiffMode>()?;
    let p = parse_point(point, metric_field.dimension())?;
    let background_field = background.map(load_metric).transpose()?;

    let result = match kind {
        "christoffel" => EvalResult::Christoffel(match &background_field {
            Some(b) => bimetric::christoffel_relative(b, &metric_field, &p, mode)?,
            None => bimetric::christoffel_classic(&metric_field, &p, mode)?,
        }),
        "riemann" => EvalResult::Riemann(match &background_field {
            Some(b) => bimetric::riemann_relative(b, &metric_field, &p, mode)?,
            None => bimetric::riemann_classic(&metric_field, &p, mode)?,
        }),
        "ricci" => {
            let delta;
            let b = match &background_field {
                Some(b) => b,
                None => {
                    delta = MetricField::euclidean(metric_field.chart());
                    &delta
                }
            };
            EvalResult::Ricci(bimetric::ricci(b, &metric_field, &p, mode)?)
        }
        "scalar" => {
            if background_field.is_some() {
                return Err(Error::Config {
                    message: "scalar curvature is defined against the chart Euclidean \
                              background; drop --background"
                        .into(),
                });
            }
            EvalResult::Scalar(bimetric::scalar_curvature(&metric_field, &p, mode)?)
        }
        other => return Err(Error::Config {
            message: format!(
                "unknown tensor kind `{other}` (expected christoffel, riemann, ricci, or scalar)"
            ),
        }),
    };

    if json {
        println!(
            "{}",
            output::eval_json(&metric_field, background, kind, mode, &p, &result)
        );
    } else {
        print!("{}", output::eval_text(&metric_field, &p, &result));
    }
    Ok(())
}

fn run_check_cmd(
    name: &str,
    metric_args: &[String],
    samples: usize,
    seed: u64,
    tol: Option<f64>,
    mode: &str,
) -> Result<bool, Error> {
    let kind = checks::CheckKind::from_name(name)?;
    let metrics = metric_args
        .iter()
        .map(|arg| load_metric(arg))
        .collect::<Result<Vec<_>, _>>()?;
    let config = checks::CheckConfig {
        samples,
        seed,
        tolerance: tol,
        mode: mode.parse::<DiffMode>()?,
    };
    let report = checks::run_check(kind, &metrics, &config)?;
    println!("{}", report.to_json());
    Ok(report.passed)
}

fn run_suite_cmd(dims: &[usize], seed: u64, mode: &str) -> Result<bool, Error> {
    let report = checks::run_suite(dims, seed, mode.parse::<DiffMode>()?)?;
    println!("{}", report.to_json());
    Ok(report.passed)
}

fn run_builtins(name: Option<&str>) -> Result<(), Error> {
    match name {
        Some(name) => println!("{}", catalog::builtin(name)?.to_json()),
        None => {
            for name in catalog::BUILTIN_NAMES {
                println!("{name}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Eval {
            metric,
            kind,
            point,
            background,
            mode,
            json,
        } => run_eval(metric, kind, point, background.as_deref(), mode, *json).map(|()| true),
        Command::Check {
            name,
            metrics,
            samples,
            seed,
            tol,
            mode,
        } => run_check_cmd(name, metrics, *samples, *seed, *tol, mode),
        Command::Suite { dims, seed, mode } => run_suite_cmd(dims, *seed, mode),
        Command::Builtins { name } => run_builtins(name.as_deref()).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
