//! Named residual checks and the aggregate suite.
//!
//! Each check samples points uniformly from the intersection of the declared
//! sample regions (rejecting points excluded by any domain guard), evaluates
//! a residual identity at every point through two independent code paths,
//! and reports the largest normalized residual. All randomness derives from
//! one seed through the fixed generator in [`crate::rng`], so identical
//! invocations produce byte-identical reports.
//!
//! Point sweeps are data-parallel: residuals at different points share no
//! state. With the `parallel` feature the sweep runs on a rayon pool;
//! aggregation folds the per-point results in sample order either way, so
//! parallel and sequential runs agree bit for bit.

use crate::catalog;
use crate::chart::Point;
use crate::connection::{self, ResidualSample, CONDITION_WARN_THRESHOLD};
use crate::curvature::{self, RiemannFn};
use crate::diff::{DiffMode, ExprField};
use crate::error::{Error, Result};
use crate::expr;
use crate::metric::MetricField;
use crate::report::{ResidualReport, SuiteReport, REPORT_SCHEMA};
use crate::rng::XorShiftRng;
use crate::tensor::TensorShape;

/// Default residual tolerances, per check and differentiation mode.
///
/// Dual-mode residuals are pure floating-point error; the bounds leave
/// headroom over observed values. Finite-difference bounds track the
/// truncation/roundoff balance of the central stencils: first-derivative
/// checks stay near 1e-10, single-level second derivatives near 1e-7, and
/// nested differencing (the Ricci identity's left side) near 1e-5, so the
/// curvature-class FD bound is 1e-3 with margin.
pub mod tolerances {
    pub const THEOREM1_DUAL: f64 = 1e-8;
    pub const THEOREM1_FD: f64 = 1e-4;
    pub const THEOREM2_DUAL: f64 = 1e-7;
    pub const THEOREM2_FD: f64 = 1e-3;
    pub const COCYCLE_GAMMA_DUAL: f64 = 1e-9;
    pub const COCYCLE_GAMMA_FD: f64 = 1e-4;
    pub const COCYCLE_RIEMANN_DUAL: f64 = 1e-7;
    pub const COCYCLE_RIEMANN_FD: f64 = 1e-3;
    pub const FLATNESS_DUAL: f64 = 1e-7;
    pub const FLATNESS_FD: f64 = 1e-3;
    pub const RICCI_IDENTITY_DUAL: f64 = 1e-7;
    pub const RICCI_IDENTITY_FD: f64 = 1e-3;
    pub const COMPATIBILITY_DUAL: f64 = 1e-10;
    pub const COMPATIBILITY_FD: f64 = 1e-4;
}

/// Probe fields per theorem1 / ricci-identity run.
pub const PROBE_FIELDS: usize = 5;
/// Total degree of random probe polynomials.
pub const PROBE_DEGREE: usize = 2;
/// Sample points per check in the aggregate suite.
pub const SUITE_SAMPLES: usize = 20;

const LABEL_POINTS: u64 = 0x706F_696E_7473;
const LABEL_PROBES: u64 = 0x7072_6F62_6573;
const LABEL_SUITE: u64 = 0x73_7569_7465;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// `v^a_;b(m) = v^a_;b(g) + Γ^a_cb(g,m) v^c` on random probe vectors.
    Theorem1,
    /// `R(δ,m) = R(δ,g) + R(g,m)`.
    Theorem2,
    /// `Γ(m,g) + Γ(g,h) + Γ(h,m) = 0`.
    CocycleGamma,
    /// `R(m,g) + R(g,h) + R(h,m) = 0`.
    CocycleRiemann,
    /// `R(δ,g) + R(g,m) = 0` (m flat), sampled.
    Flatness,
    /// `V_{i;jk}(m) − V_{i;kj}(m) = V_l R^l_ijk(δ,m)` on random probes.
    RicciIdentity,
    /// `m_{ab;c}(m) = 0`.
    Compatibility,
}

pub const ALL_CHECKS: [CheckKind; 7] = [
    CheckKind::Theorem1,
    CheckKind::Theorem2,
    CheckKind::CocycleGamma,
    CheckKind::CocycleRiemann,
    CheckKind::Flatness,
    CheckKind::RicciIdentity,
    CheckKind::Compatibility,
];

impl CheckKind {
    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::Theorem1 => "theorem1",
            CheckKind::Theorem2 => "theorem2",
            CheckKind::CocycleGamma => "cocycle-gamma",
            CheckKind::CocycleRiemann => "cocycle-riemann",
            CheckKind::Flatness => "flatness",
            CheckKind::RicciIdentity => "ricci-identity",
            CheckKind::Compatibility => "compatibility",
        }
    }

    pub fn from_name(name: &str) -> Result<CheckKind> {
        ALL_CHECKS
            .iter()
            .copied()
            .find(|k| k.name() == name)
            .ok_or_else(|| {
                Error::config(format!(
                    "unknown check `{name}`; expected one of: {}",
                    ALL_CHECKS
                        .iter()
                        .map(|k| k.name())
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
            })
    }

    /// How many metric arguments the check consumes.
    pub fn metric_count(&self) -> usize {
        match self {
            CheckKind::Theorem1 | CheckKind::Theorem2 | CheckKind::Flatness => 2,
            CheckKind::CocycleGamma | CheckKind::CocycleRiemann => 3,
            CheckKind::RicciIdentity | CheckKind::Compatibility => 1,
        }
    }

    pub fn default_tolerance(&self, mode: DiffMode) -> f64 {
        use tolerances::*;
        match (self, mode) {
            (CheckKind::Theorem1, DiffMode::Dual) => THEOREM1_DUAL,
            (CheckKind::Theorem1, DiffMode::CentralFd) => THEOREM1_FD,
            (CheckKind::Theorem2, DiffMode::Dual) => THEOREM2_DUAL,
            (CheckKind::Theorem2, DiffMode::CentralFd) => THEOREM2_FD,
            (CheckKind::CocycleGamma, DiffMode::Dual) => COCYCLE_GAMMA_DUAL,
            (CheckKind::CocycleGamma, DiffMode::CentralFd) => COCYCLE_GAMMA_FD,
            (CheckKind::CocycleRiemann, DiffMode::Dual) => COCYCLE_RIEMANN_DUAL,
            (CheckKind::CocycleRiemann, DiffMode::CentralFd) => COCYCLE_RIEMANN_FD,
            (CheckKind::Flatness, DiffMode::Dual) => FLATNESS_DUAL,
            (CheckKind::Flatness, DiffMode::CentralFd) => FLATNESS_FD,
            (CheckKind::RicciIdentity, DiffMode::Dual) => RICCI_IDENTITY_DUAL,
            (CheckKind::RicciIdentity, DiffMode::CentralFd) => RICCI_IDENTITY_FD,
            (CheckKind::Compatibility, DiffMode::Dual) => COMPATIBILITY_DUAL,
            (CheckKind::Compatibility, DiffMode::CentralFd) => COMPATIBILITY_FD,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub samples: usize,
    pub seed: u64,
    /// `None` selects the per-check default for the mode.
    pub tolerance: Option<f64>,
    pub mode: DiffMode,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            samples: 50,
            seed: 1,
            tolerance: None,
            mode: DiffMode::Dual,
        }
    }
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// Per-axis intersection of the metrics' declared sample regions.
pub fn intersect_regions(metrics: &[MetricField]) -> Result<Vec<[f64; 2]>> {
    let n = metrics[0].dimension();
    let mut region = metrics[0].sample_region().to_vec();
    for m in &metrics[1..] {
        for axis in 0..n {
            region[axis][0] = region[axis][0].max(m.sample_region()[axis][0]);
            region[axis][1] = region[axis][1].min(m.sample_region()[axis][1]);
            if region[axis][0] > region[axis][1] {
                return Err(Error::EmptyRegion);
            }
        }
    }
    Ok(region)
}

/// Draw `count` points uniformly from the region intersection, rejecting
/// points excluded by any metric's domain guard.
pub fn sample_points(
    metrics: &[MetricField],
    count: usize,
    rng: &mut XorShiftRng,
) -> Result<Vec<Point>> {
    let region = intersect_regions(metrics)?;
    let mut points = Vec::with_capacity(count);
    let mut attempts = 0usize;
    let max_attempts = 200 * count + 200;
    while points.len() < count {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::EmptyRegion);
        }
        let coords: Vec<f64> = region.iter().map(|[lo, hi]| rng.range(*lo, *hi)).collect();
        let point = Point::new(coords)?;
        if metrics.iter().all(|m| m.chart().guard_ok(&point).is_ok()) {
            points.push(point);
        }
    }
    Ok(points)
}

fn make_probes(metric: &MetricField, shape: TensorShape, seed: u64) -> Result<Vec<ExprField>> {
    let mut rng = XorShiftRng::substream(seed, LABEL_PROBES);
    let names: Vec<&str> = metric
        .chart()
        .coordinate_names()
        .iter()
        .map(|s| s.as_str())
        .collect();
    let mut probes = Vec::with_capacity(PROBE_FIELDS);
    for _ in 0..PROBE_FIELDS {
        let components = (0..shape.len())
            .map(|_| {
                let source = catalog::random_polynomial_source(&names, PROBE_DEGREE, &mut rng);
                expr::parse(&source, metric.chart())
            })
            .collect::<Result<Vec<_>>>()?;
        probes.push(ExprField::new(metric.chart().clone(), shape, components)?);
    }
    Ok(probes)
}

// ---------------------------------------------------------------------------
// Point sweeps (parallel / sequential)
// ---------------------------------------------------------------------------

/// Sequential sweep; always available.
pub fn map_points_serial<T, F>(points: &[Point], f: F) -> Result<Vec<T>>
where
    F: Fn(&Point) -> Result<T> + Sync,
    T: Send,
{
    points.iter().map(&f).collect()
}

/// Rayon-parallel sweep. Per-point work is pure, and the caller folds the
/// returned vector in index order, so results match the sequential path
/// byte for byte.
#[cfg(feature = "parallel")]
pub fn map_points_parallel<T, F>(points: &[Point], f: F) -> Result<Vec<T>>
where
    F: Fn(&Point) -> Result<T> + Sync,
    T: Send,
{
    use rayon::prelude::*;
    let results: Vec<Result<T>> = points.par_iter().map(&f).collect();
    // first error in sample order, independent of scheduling
    results.into_iter().collect()
}

pub(crate) fn map_points<T, F>(points: &[Point], f: F) -> Result<Vec<T>>
where
    F: Fn(&Point) -> Result<T> + Sync,
    T: Send,
{
    #[cfg(feature = "parallel")]
    {
        map_points_parallel(points, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_points_serial(points, f)
    }
}

/// Worst (largest normalized) residual across the probe fields at one point.
fn worst_probe_sample<F>(probes: &[ExprField], eval: F) -> Result<ResidualSample>
where
    F: Fn(&ExprField) -> Result<ResidualSample>,
{
    let mut worst = ResidualSample {
        raw: 0.0,
        scale: 0.0,
    };
    let mut have = false;
    for probe in probes {
        let s = eval(probe)?;
        if !have || s.normalized() > worst.normalized() {
            worst = s;
            have = true;
        }
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// Check execution
// ---------------------------------------------------------------------------

/// Run a named check over seeded sample points.
pub fn run_check(
    kind: CheckKind,
    metrics: &[MetricField],
    config: &CheckConfig,
) -> Result<ResidualReport> {
    run_check_impl(kind, metrics, config, curvature::riemann_relative)
}

/// Same as [`run_check`] but with an injectable Riemann assembly; used by
/// the falsifiability tests together with the sign-flipped fixture.
#[doc(hidden)]
pub fn run_check_with_riemann(
    kind: CheckKind,
    metrics: &[MetricField],
    config: &CheckConfig,
    riemann: RiemannFn,
) -> Result<ResidualReport> {
    run_check_impl(kind, metrics, config, riemann)
}

fn run_check_impl(
    kind: CheckKind,
    metrics: &[MetricField],
    config: &CheckConfig,
    riemann: RiemannFn,
) -> Result<ResidualReport> {
    if metrics.len() != kind.metric_count() {
        return Err(Error::config(format!(
            "check `{}` needs {} metric(s), got {}",
            kind.name(),
            kind.metric_count(),
            metrics.len()
        )));
    }
    if config.samples == 0 {
        return Err(Error::config("sample count must be positive"));
    }
    for m in &metrics[1..] {
        metrics[0].chart().compatible(m.chart())?;
    }

    let mut point_rng = XorShiftRng::substream(config.seed, LABEL_POINTS);
    let points = sample_points(metrics, config.samples, &mut point_rng)?;
    let mode = config.mode;

    // near-degenerate metrics make every residual ill-conditioned; say so
    for m in metrics {
        if let Ok((_, cond)) = connection::inverse_with_condition(m, &points[0]) {
            if cond > CONDITION_WARN_THRESHOLD {
                eprintln!(
                    "warning: metric `{}` has condition estimate {cond:.2e} at {}",
                    m.name(),
                    points[0]
                );
            }
        }
    }

    let samples: Vec<ResidualSample> = match kind {
        CheckKind::Theorem1 => {
            let (g, m) = (&metrics[0], &metrics[1]);
            let shape = TensorShape::new(1, 0, g.dimension())?;
            let probes = make_probes(g, shape, config.seed)?;
            map_points(&points, |p| {
                worst_probe_sample(&probes, |v| connection::theorem1_sample(g, m, v, p, mode))
            })?
        }
        CheckKind::Theorem2 => {
            let (g, m) = (&metrics[0], &metrics[1]);
            map_points(&points, |p| {
                curvature::theorem2_sample_with(riemann, g, m, p, mode)
            })?
        }
        CheckKind::CocycleGamma => {
            let (m, g, h) = (&metrics[0], &metrics[1], &metrics[2]);
            map_points(&points, |p| {
                connection::cocycle_gamma_sample(m, g, h, p, mode)
            })?
        }
        CheckKind::CocycleRiemann => {
            let (m, g, h) = (&metrics[0], &metrics[1], &metrics[2]);
            map_points(&points, |p| {
                curvature::cocycle_riemann_sample_with(riemann, m, g, h, p, mode)
            })?
        }
        CheckKind::Flatness => {
            let (g, m) = (&metrics[0], &metrics[1]);
            map_points(&points, |p| {
                curvature::flatness_sample_with(riemann, g, m, p, mode)
            })?
        }
        CheckKind::RicciIdentity => {
            let m = &metrics[0];
            let shape = TensorShape::new(0, 1, m.dimension())?;
            let probes = make_probes(m, shape, config.seed)?;
            map_points(&points, |p| {
                worst_probe_sample(&probes, |v| curvature::ricci_identity_sample(m, v, p, mode))
            })?
        }
        CheckKind::Compatibility => {
            let m = &metrics[0];
            map_points(&points, |p| connection::compatibility_sample(m, p, mode))?
        }
    };

    let tolerance = config
        .tolerance
        .unwrap_or_else(|| kind.default_tolerance(mode));
    let metric_names: Vec<String> = metrics.iter().map(|m| m.name().to_string()).collect();
    Ok(ResidualReport::from_samples(
        kind.name(),
        &metric_names,
        mode,
        config.seed,
        &samples,
        &points,
        tolerance,
    ))
}

// ---------------------------------------------------------------------------
// Aggregate suite
// ---------------------------------------------------------------------------

fn suite_metrics(dim: usize, seed: u64) -> Result<Vec<MetricField>> {
    let mut metrics = Vec::new();
    match dim {
        2 => {
            for name in [
                "euclidean2",
                "polar_flat",
                "sphere_unit",
                "poincare_half",
                "conformal2",
            ] {
                metrics.push(MetricField::from_manifest(&catalog::builtin(name)?)?);
            }
        }
        3 => {
            metrics.push(MetricField::from_manifest(&catalog::builtin(
                "euclidean3",
            )?)?);
        }
        other => {
            return Err(Error::config(format!(
                "suite supports dimensions 2 and 3, got {other}"
            )))
        }
    }
    let mut seeder = XorShiftRng::substream(seed, LABEL_SUITE ^ dim as u64);
    for _ in 0..3 {
        let manifest = catalog::random_metric(dim, seeder.next_u64(), 2)?;
        metrics.push(MetricField::from_manifest(&manifest)?);
    }
    Ok(metrics)
}

fn suite_plan(dim: usize, seed: u64) -> Result<Vec<(CheckKind, Vec<MetricField>)>> {
    let pool = suite_metrics(dim, seed)?;
    let pick = |indices: &[usize]| -> Vec<MetricField> {
        indices.iter().map(|&i| pool[i].clone()).collect()
    };
    let mut plan: Vec<(CheckKind, Vec<MetricField>)> = Vec::new();
    for i in 0..pool.len() {
        plan.push((CheckKind::Compatibility, pick(&[i])));
    }
    type PlanIndices = (
        Vec<[usize; 2]>,
        Vec<Vec<usize>>,
        Vec<[usize; 2]>,
        Vec<usize>,
    );
    let (pairs, triples, flats, riccis): PlanIndices = if dim == 2 {
        (
            // pool: 0 euclidean2, 1 polar, 2 sphere, 3 poincare, 4 conformal2,
            //       5..8 random
            vec![[1, 2], [3, 4], [0, 2], [5, 6], [6, 7]],
            vec![vec![1, 2, 3], vec![0, 5, 6], vec![5, 6, 7]],
            // flatness wants a flat second argument
            vec![[2, 1], [5, 0]],
            vec![2, 3, 5],
        )
    } else {
        (
            // pool: 0 euclidean3, 1..4 random
            vec![[0, 1], [1, 2], [2, 3]],
            vec![vec![0, 1, 2], vec![1, 2, 3]],
            vec![[1, 0]],
            vec![1, 2],
        )
    };
    for pair in &pairs {
        plan.push((CheckKind::Theorem1, pick(pair)));
    }
    for pair in &pairs {
        plan.push((CheckKind::Theorem2, pick(pair)));
    }
    for triple in &triples {
        plan.push((CheckKind::CocycleGamma, pick(triple)));
    }
    for triple in &triples {
        plan.push((CheckKind::CocycleRiemann, pick(triple)));
    }
    for pair in &flats {
        plan.push((CheckKind::Flatness, pick(pair)));
    }
    for &i in &riccis {
        plan.push((CheckKind::RicciIdentity, pick(&[i])));
    }
    Ok(plan)
}

/// Run every check over the catalog builtins and seeded random metrics.
pub fn run_suite(dims: &[usize], seed: u64, mode: DiffMode) -> Result<SuiteReport> {
    if dims.is_empty() {
        return Err(Error::config("suite needs at least one dimension"));
    }
    let mut seen = Vec::new();
    for &dim in dims {
        if seen.contains(&dim) {
            return Err(Error::config(format!("duplicate dimension {dim}")));
        }
        seen.push(dim);
    }
    let mut checks = Vec::new();
    for &dim in dims {
        for (kind, metrics) in suite_plan(dim, seed)? {
            let config = CheckConfig {
                samples: SUITE_SAMPLES,
                seed,
                tolerance: None,
                mode,
            };
            checks.push(run_check(kind, &metrics, &config)?);
        }
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    Ok(SuiteReport {
        schema: REPORT_SCHEMA,
        seed,
        mode: mode.as_str().to_string(),
        dims: dims.to_vec(),
        checks_total: checks.len(),
        checks_failed: failed,
        passed: failed == 0,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn builtin_field(name: &str) -> MetricField {
        MetricField::from_manifest(&catalog::builtin(name).unwrap()).unwrap()
    }

    #[test]
    fn region_intersection() {
        let polar = builtin_field("polar_flat");
        let sphere = builtin_field("sphere_unit");
        let region = intersect_regions(&[polar, sphere]).unwrap();
        assert_eq!(region, vec![[0.5, 2.5], [0.2, 3.0]]);
    }

    #[test]
    fn empty_intersection_is_an_error() {
        let mut a = catalog::builtin("euclidean2").unwrap();
        a.sample_region = vec![[0.0, 1.0], [0.0, 1.0]];
        let mut b = catalog::builtin("euclidean2").unwrap();
        b.sample_region = vec![[2.0, 3.0], [0.0, 1.0]];
        let fields = [
            MetricField::from_manifest(&a).unwrap(),
            MetricField::from_manifest(&b).unwrap(),
        ];
        assert!(matches!(
            intersect_regions(&fields),
            Err(Error::EmptyRegion)
        ));
    }

    #[test]
    fn sampled_points_respect_guards() {
        let polar = builtin_field("polar_flat");
        let mut rng = XorShiftRng::new(5);
        let pts = sample_points(std::slice::from_ref(&polar), 40, &mut rng).unwrap();
        assert_eq!(pts.len(), 40);
        for p in &pts {
            assert!(p.coord(0) >= 0.5 && p.coord(0) <= 2.5);
            polar.chart().guard_ok(p).unwrap();
        }
    }

    #[test]
    fn theorem2_check_passes_for_polar_sphere() {
        let metrics = [builtin_field("polar_flat"), builtin_field("sphere_unit")];
        let config = CheckConfig {
            samples: 20,
            seed: 7,
            ..CheckConfig::default()
        };
        let report = run_check(CheckKind::Theorem2, &metrics, &config).unwrap();
        assert!(report.passed, "max residual {}", report.max_residual);
        assert_eq!(report.samples, 20);
        assert_eq!(report.check_name, "theorem2");
    }

    #[test]
    fn cocycle_gamma_on_identical_euclidean_triple_is_exactly_zero() {
        let metrics = [
            builtin_field("euclidean2"),
            builtin_field("euclidean2"),
            builtin_field("euclidean2"),
        ];
        let report = run_check(CheckKind::CocycleGamma, &metrics, &CheckConfig::default()).unwrap();
        assert!(report.passed);
        assert_eq!(report.max_residual, 0.0);
        assert_eq!(report.mean_residual, 0.0);
    }

    #[test]
    fn wrong_metric_count_is_config_error() {
        let metrics = [builtin_field("euclidean2")];
        assert!(matches!(
            run_check(CheckKind::Theorem2, &metrics, &CheckConfig::default()),
            Err(Error::Config { .. })
        ));
    }

    #[test]
    fn unknown_check_name_rejected() {
        assert!(CheckKind::from_name("theorem3").is_err());
        assert_eq!(
            CheckKind::from_name("cocycle-riemann").unwrap(),
            CheckKind::CocycleRiemann
        );
    }

    #[test]
    fn reports_are_deterministic() {
        let metrics = [builtin_field("sphere_unit"), builtin_field("polar_flat")];
        let config = CheckConfig {
            samples: 10,
            seed: 123,
            ..CheckConfig::default()
        };
        let a = run_check(CheckKind::Flatness, &metrics, &config).unwrap();
        let b = run_check(CheckKind::Flatness, &metrics, &config).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn parallel_and_serial_sweeps_agree() {
        let polar = builtin_field("polar_flat");
        let mut rng = XorShiftRng::new(3);
        let pts = sample_points(std::slice::from_ref(&polar), 16, &mut rng).unwrap();
        let f = |p: &Point| curvature::scalar_curvature(&polar, p, DiffMode::Dual);
        let serial = map_points_serial(&pts, f).unwrap();
        #[cfg(feature = "parallel")]
        {
            let parallel = map_points_parallel(&pts, f).unwrap();
            for (a, b) in serial.iter().zip(&parallel) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
        assert_eq!(serial.len(), 16);
    }

    #[test]
    fn suite_runs_clean_on_dimension_two() {
        let report = run_suite(&[2], 11, DiffMode::Dual).unwrap();
        assert!(
            report.passed,
            "{} of {} checks failed",
            report.checks_failed, report.checks_total
        );
        assert!(report.checks_total > 20);
    }

    #[test]
    fn suite_rejects_bad_dimensions() {
        assert!(run_suite(&[], 1, DiffMode::Dual).is_err());
        assert!(run_suite(&[2, 2], 1, DiffMode::Dual).is_err());
        assert!(run_suite(&[4], 1, DiffMode::Dual).is_err());
    }
}
