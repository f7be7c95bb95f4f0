//! Curvature relative to a background metric.
//!
//! With all `Γ` carrying the pair `(g, m)` and `;` the g-covariant
//! derivative, the relative Riemann tensor is
//!
//! ```text
//! R^l_ijk(g, m) = Γ^l_ik;j − Γ^l_ij;k + Γ^l_js Γ^s_ik − Γ^l_ks Γ^s_ij
//! ```
//!
//! For `g = δ` this is the classic coordinate formula, and the tensors
//! satisfy the decomposition `R(δ, m) = R(δ, g) + R(g, m)` as well as the
//! three-metric cycle `R(m,g) + R(g,h) + R(h,m) = 0`. The derivative term
//! `Γ^l_ik;j` is obtained by evaluating the whole `Γ(g, m)` assembly on
//! first-order duals (built from second-order jets of both metrics) and then
//! applying the usual per-slot `Γ(δ, g)` corrections for a (1,2) tensor.

use crate::chart::Point;
use crate::connection::{
    self, classic_gamma, covariant_derivative, i3, metric_arrays_jet1, relative_gamma, spd_inverse,
    CovariantDerivativeField, ResidualSample,
};
use crate::diff::{self, DiffMode, TensorField};
use crate::dual::Jet1;
use crate::error::{Error, Result};
use crate::metric::MetricField;
use crate::report::ResidualReport;
use crate::tensor::{TensorComponents, TensorShape};

/// Riemann components `R^l_ijk` at one point, shape (1,3), antisymmetric in
/// the last two slots.
#[derive(Debug, Clone)]
pub struct RiemannComponents {
    pub values: TensorComponents,
    pub base_point: Point,
}

/// Pluggable Riemann assembly, so the falsifiability tests can swap in the
/// sign-flipped fixture.
pub type RiemannFn = fn(&MetricField, &MetricField, &Point, DiffMode) -> Result<RiemannComponents>;

impl RiemannComponents {
    pub fn get(&self, l: usize, i: usize, j: usize, k: usize) -> f64 {
        self.values.get(&[l, i, j, k])
    }
}

/// Core assembly: combine dual-valued `Γ(g,m)` (values + first derivatives)
/// with the background symbols `Γ(δ,g)`.
///
/// `flip_quadratic` negates the `Γ^l_js Γ^s_ik` term. That variant is wrong
/// on purpose; it exists so the check suites can demonstrate that they fail
/// on broken curvature code.
fn assemble_riemann(n: usize, gamma: &[Jet1], bg: &[f64], flip_quadratic: bool) -> Vec<f64> {
    let mut out = vec![0.0; n * n * n * n];
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    // Γ^l_ik;j = ∂_j Γ^l_ik + Γ^l_sj Γ^s_ik − Γ^s_ij Γ^l_sk − Γ^s_kj Γ^l_is
                    let mut cov_j = gamma[i3(n, l, i, k)].d[j];
                    let mut cov_k = gamma[i3(n, l, i, j)].d[k];
                    for s in 0..n {
                        cov_j += bg[i3(n, l, s, j)] * gamma[i3(n, s, i, k)].v
                            - bg[i3(n, s, i, j)] * gamma[i3(n, l, s, k)].v
                            - bg[i3(n, s, k, j)] * gamma[i3(n, l, i, s)].v;
                        cov_k += bg[i3(n, l, s, k)] * gamma[i3(n, s, i, j)].v
                            - bg[i3(n, s, i, k)] * gamma[i3(n, l, s, j)].v
                            - bg[i3(n, s, j, k)] * gamma[i3(n, l, i, s)].v;
                    }
                    let mut quad_a = 0.0;
                    let mut quad_b = 0.0;
                    for s in 0..n {
                        quad_a += gamma[i3(n, l, j, s)].v * gamma[i3(n, s, i, k)].v;
                        quad_b += gamma[i3(n, l, k, s)].v * gamma[i3(n, s, i, j)].v;
                    }
                    if flip_quadratic {
                        quad_a = -quad_a;
                    }
                    out[((l * n + i) * n + j) * n + k] = (cov_j - cov_k) + (quad_a - quad_b);
                }
            }
        }
    }
    out
}

fn riemann_impl(
    g: &MetricField,
    m: &MetricField,
    point: &Point,
    mode: DiffMode,
    flip_quadratic: bool,
) -> Result<RiemannComponents> {
    g.chart().compatible(m.chart())?;
    g.chart().guard_ok(point)?;
    m.chart().guard_ok(point)?;
    let n = m.dimension();

    let g_jet = diff::jet(g, point, 2, mode)?;
    let (g1, dg1) = metric_arrays_jet1(&g_jet, n)?;
    let (inv_g, _) = spd_inverse(n, &g1).ok_or_else(|| Error::NotPositiveDefinite {
        metric: g.name().to_string(),
        point: point.to_string(),
    })?;
    let bg = classic_gamma(n, &inv_g, &dg1);

    let m_jet = diff::jet(m, point, 2, mode)?;
    let (m1, dm1) = metric_arrays_jet1(&m_jet, n)?;
    let (inv_m, _) = spd_inverse(n, &m1).ok_or_else(|| Error::NotPositiveDefinite {
        metric: m.name().to_string(),
        point: point.to_string(),
    })?;
    let gamma = relative_gamma(n, &m1, &dm1, &inv_m, &bg);

    let bg_values: Vec<f64> = bg.iter().map(|j| j.v).collect();
    let values = assemble_riemann(n, &gamma, &bg_values, flip_quadratic);
    Ok(RiemannComponents {
        values: TensorComponents::new(TensorShape::new(1, 3, n)?, values).map_err(|_| {
            Error::NonFinite {
                context: format!(
                    "relative Riemann tensor ({}, {}) at {point}",
                    g.name(),
                    m.name()
                ),
            }
        })?,
        base_point: point.clone(),
    })
}

/// Relative Riemann tensor `R^l_ijk(g, m)`.
pub fn riemann_relative(
    g: &MetricField,
    m: &MetricField,
    point: &Point,
    mode: DiffMode,
) -> Result<RiemannComponents> {
    riemann_impl(g, m, point, mode, false)
}

/// Deliberately broken Riemann assembly (one quadratic term sign-flipped).
///
/// Exists to prove the residual suites are falsifiable; never use it for
/// actual geometry.
#[doc(hidden)]
pub fn riemann_relative_sign_flipped(
    g: &MetricField,
    m: &MetricField,
    point: &Point,
    mode: DiffMode,
) -> Result<RiemannComponents> {
    riemann_impl(g, m, point, mode, true)
}

/// Classic curvature of `g` in its chart: `R^l_ijk(δ, g)`.
pub fn riemann_classic(
    g: &MetricField,
    point: &Point,
    mode: DiffMode,
) -> Result<RiemannComponents> {
    let delta = MetricField::euclidean(g.chart());
    riemann_relative(&delta, g, point, mode)
}

/// Relative Ricci tensor: contraction `R^l_ilk(g, m)` of the upper slot
/// with the first derivative-like lower slot (`j`).
pub fn ricci(
    g: &MetricField,
    m: &MetricField,
    point: &Point,
    mode: DiffMode,
) -> Result<TensorComponents> {
    let riemann = riemann_relative(g, m, point, mode)?;
    riemann.values.contract(0, 1)
}

/// Scalar curvature of `m`: `m^{ik} R_ik` with `R_ik` the Ricci tensor of
/// `R(δ, m)`.
pub fn scalar_curvature(m: &MetricField, point: &Point, mode: DiffMode) -> Result<f64> {
    let delta = MetricField::euclidean(m.chart());
    let ric = ricci(&delta, m, point, mode)?;
    let inv = connection::inverse_metric(m, point)?;
    let full = inv.tensor_product(&ric)?; // (2,2): m^{ab} R_cd
    let once = full.contract(0, 0)?; // Σ_a m^{ab} R_ad
    let scalar = once.contract(0, 0)?; // Σ_b of the diagonal
    Ok(scalar.data()[0])
}

pub(crate) fn ricci_identity_sample(
    m: &MetricField,
    v: &dyn TensorField,
    point: &Point,
    mode: DiffMode,
) -> Result<ResidualSample> {
    if v.shape() != TensorShape::new(0, 1, m.dimension())? {
        return Err(Error::shape(
            "Ricci-identity probe must be a covector field",
        ));
    }
    // left side: V_{i;jk} − V_{i;kj} via two nested covariant derivatives
    let first = CovariantDerivativeField::new(m, v, mode)?;
    let second = covariant_derivative(m, &first, point, mode)?; // (0,3): [i][j][k]
    let lhs = second.antisymmetrize_pair(1, 2)?;

    // right side: V_l R^l_ijk(δ, m), contracted by hand
    let n = m.dimension();
    let riemann = riemann_classic(m, point, mode)?;
    let values = v.components(point)?;
    let mut rhs = TensorComponents::zeros(TensorShape::new(0, 3, n)?);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += values.data()[l] * riemann.get(l, i, j, k);
                }
                rhs.set(&[i, j, k], s);
            }
        }
    }

    let residual = lhs.sub(&rhs)?;
    Ok(ResidualSample {
        raw: residual.max_abs(),
        scale: second.max_abs().max(rhs.max_abs()),
    })
}

/// Max-abs residual of the Ricci identity
/// `V_{i;jk}(m) − V_{i;kj}(m) = V_l R^l_ijk(δ, m)`, with the left side from
/// nested covariant derivatives and the right side from the curvature
/// assembly — independent code paths.
pub fn ricci_identity_residual(
    m: &MetricField,
    v: &dyn TensorField,
    point: &Point,
    mode: DiffMode,
) -> Result<f64> {
    Ok(ricci_identity_sample(m, v, point, mode)?.raw)
}

pub(crate) fn cocycle_riemann_sample_with(
    riemann: RiemannFn,
    m: &MetricField,
    g: &MetricField,
    h: &MetricField,
    point: &Point,
    mode: DiffMode,
) -> Result<ResidualSample> {
    let a = riemann(m, g, point, mode)?.values;
    let b = riemann(g, h, point, mode)?.values;
    let c = riemann(h, m, point, mode)?.values;
    let sum = a.add(&b)?.add(&c)?;
    Ok(ResidualSample {
        raw: sum.max_abs(),
        scale: a.max_abs().max(b.max_abs()).max(c.max_abs()),
    })
}

/// Max-abs of the three-metric cycle `R(m,g) + R(g,h) + R(h,m)`.
pub fn cocycle_riemann(
    m: &MetricField,
    g: &MetricField,
    h: &MetricField,
    point: &Point,
    mode: DiffMode,
) -> Result<f64> {
    Ok(cocycle_riemann_sample_with(riemann_relative, m, g, h, point, mode)?.raw)
}

pub(crate) fn theorem2_sample_with(
    riemann: RiemannFn,
    g: &MetricField,
    m: &MetricField,
    point: &Point,
    mode: DiffMode,
) -> Result<ResidualSample> {
    let delta = MetricField::euclidean(g.chart());
    let full = riemann(&delta, m, point, mode)?.values;
    let background = riemann(&delta, g, point, mode)?.values;
    let relative = riemann(g, m, point, mode)?.values;
    let residual = full.sub(&background)?.sub(&relative)?;
    Ok(ResidualSample {
        raw: residual.max_abs(),
        scale: full
            .max_abs()
            .max(background.max_abs())
            .max(relative.max_abs()),
    })
}

pub(crate) fn flatness_sample_with(
    riemann: RiemannFn,
    g: &MetricField,
    m: &MetricField,
    point: &Point,
    mode: DiffMode,
) -> Result<ResidualSample> {
    let delta = MetricField::euclidean(g.chart());
    let background = riemann(&delta, g, point, mode)?.values;
    let relative = riemann(g, m, point, mode)?.values;
    let sum = background.add(&relative)?;
    Ok(ResidualSample {
        raw: sum.max_abs(),
        scale: background.max_abs().max(relative.max_abs()),
    })
}

pub(crate) fn flatness_sample(
    g: &MetricField,
    m: &MetricField,
    point: &Point,
    mode: DiffMode,
) -> Result<ResidualSample> {
    flatness_sample_with(riemann_relative, g, m, point, mode)
}

/// Sampled flatness criterion: `m` is flat iff `R(δ,g) + R(g,m)` vanishes.
///
/// This checks the residual on the given sample points only — it is a
/// necessary condition reported at finitely many points, not a proof of
/// global flatness. Residuals are normalized by `1 + |largest term|`.
pub fn flatness_check(
    g: &MetricField,
    m: &MetricField,
    sample_points: &[Point],
    tol: f64,
    mode: DiffMode,
) -> Result<ResidualReport> {
    if sample_points.is_empty() {
        return Err(Error::config(
            "flatness check needs at least one sample point",
        ));
    }
    let samples = sample_points
        .iter()
        .map(|p| flatness_sample(g, m, p, mode))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport::from_samples(
        "flatness",
        &[g.name().to_string(), m.name().to_string()],
        mode,
        0,
        &samples,
        sample_points,
        tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::ChartSpec;
    use crate::diff::ExprField;
    use crate::expr;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

    fn metric(name: &str, coords: &[&str], guard: Option<&str>, upper: &[&str]) -> MetricField {
        let mut chart = ChartSpec::from_names(coords).unwrap();
        if let Some(g) = guard {
            chart = chart.with_guard_source(g).unwrap();
        }
        let exprs = upper
            .iter()
            .map(|s| expr::parse(s, &chart).unwrap())
            .collect();
        let n = coords.len();
        MetricField::new(name, chart, exprs, vec![[0.5, 2.5]; n]).unwrap()
    }

    fn polar() -> MetricField {
        metric("polar_flat", &["r", "theta"], Some("r"), &["1", "0", "r^2"])
    }

    fn sphere() -> MetricField {
        metric(
            "sphere_unit",
            &["theta", "phi"],
            Some("sin(theta)"),
            &["1", "0", "sin(theta)^2"],
        )
    }

    fn poincare() -> MetricField {
        metric(
            "poincare_half",
            &["x", "y"],
            Some("y"),
            &["1/y^2", "0", "1/y^2"],
        )
    }

    #[test]
    fn flat_polar_metric_has_zero_curvature() {
        let m = polar();
        let p = Point::new(vec![2.0, 0.7]).unwrap();
        let r = riemann_classic(&m, &p, DiffMode::Dual).unwrap();
        assert!(r.values.max_abs() < 1e-9, "max {}", r.values.max_abs());
    }

    #[test]
    fn sphere_curvature_component() {
        // R^θ_φθφ = sin²θ
        let m = sphere();
        for theta in [FRAC_PI_3, FRAC_PI_4, 1.9] {
            let p = Point::new(vec![theta, 2.0]).unwrap();
            let r = riemann_classic(&m, &p, DiffMode::Dual).unwrap();
            let expected = theta.sin().powi(2);
            assert!(
                (r.get(0, 1, 0, 1) - expected).abs() < 1e-12,
                "theta={theta}: {} vs {expected}",
                r.get(0, 1, 0, 1)
            );
        }
    }

    #[test]
    fn poincare_curvature_component() {
        // R^x_yxy = −1/y²; at y = 2: −0.25
        let m = poincare();
        let p = Point::new(vec![0.3, 2.0]).unwrap();
        let r = riemann_classic(&m, &p, DiffMode::Dual).unwrap();
        assert!((r.get(0, 1, 0, 1) + 0.25).abs() < 1e-13);
    }

    #[test]
    fn riemann_of_metric_with_itself_vanishes() {
        let m = sphere();
        let p = Point::new(vec![1.1, 0.4]).unwrap();
        let r = riemann_relative(&m, &m, &p, DiffMode::Dual).unwrap();
        assert!(r.values.max_abs() < 1e-13);
    }

    #[test]
    fn antisymmetry_in_last_two_slots_is_exact() {
        let g = polar();
        let m = sphere();
        let p = Point::new(vec![1.2, 0.9]).unwrap();
        let r = riemann_relative(&g, &m, &p, DiffMode::Dual).unwrap();
        for l in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        assert_eq!(r.get(l, i, j, k), -r.get(l, i, k, j));
                    }
                }
            }
        }
    }

    #[test]
    fn theorem2_decomposition_for_polar_and_sphere() {
        let g = polar();
        let m = sphere();
        let p = Point::new(vec![1.3, 0.7]).unwrap();
        let s = theorem2_sample_with(riemann_relative, &g, &m, &p, DiffMode::Dual).unwrap();
        assert!(
            s.normalized() < 1e-7,
            "normalized residual {}",
            s.normalized()
        );
    }

    #[test]
    fn ricci_of_unit_sphere_equals_metric() {
        let m = sphere();
        let delta = MetricField::euclidean(m.chart());
        let p = Point::new(vec![FRAC_PI_3, 1.5]).unwrap();
        let ric = ricci(&delta, &m, &p, DiffMode::Dual).unwrap();
        let mat = m.value_matrix(&p).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert!(
                    (ric.get(&[a, b]) - mat[a * 2 + b]).abs() < 1e-12,
                    "Ric[{a}][{b}]"
                );
            }
        }
    }

    #[test]
    fn ricci_of_metric_with_itself_vanishes() {
        let m = poincare();
        let p = Point::new(vec![0.1, 1.4]).unwrap();
        let ric = ricci(&m, &m, &p, DiffMode::Dual).unwrap();
        assert!(ric.max_abs() < 1e-13);
    }

    #[test]
    fn scalar_curvatures_of_model_surfaces() {
        let p = Point::new(vec![FRAC_PI_3, 1.0]).unwrap();
        let s = scalar_curvature(&sphere(), &p, DiffMode::Dual).unwrap();
        assert!((s - 2.0).abs() < 1e-6, "sphere scalar {s}");

        let p = Point::new(vec![0.4, 1.7]).unwrap();
        let s = scalar_curvature(&poincare(), &p, DiffMode::Dual).unwrap();
        assert!((s + 2.0).abs() < 1e-6, "poincare scalar {s}");

        let p = Point::new(vec![1.5, 2.2]).unwrap();
        let s = scalar_curvature(&polar(), &p, DiffMode::Dual).unwrap();
        assert!(s.abs() < 1e-8, "flat scalar {s}");
    }

    #[test]
    fn ricci_identity_on_flat_metric() {
        let chart = ChartSpec::from_names(&["x", "y"]).unwrap();
        let delta = MetricField::euclidean(&chart);
        let v = ExprField::from_sources(
            chart.clone(),
            TensorShape::new(0, 1, 2).unwrap(),
            &["x^2 - y", "x*y"],
        )
        .unwrap();
        let p = Point::new(vec![0.4, -0.3]).unwrap();
        let r = ricci_identity_residual(&delta, &v, &p, DiffMode::Dual).unwrap();
        assert!(r < 1e-10, "residual {r}");
    }

    #[test]
    fn ricci_identity_on_sphere() {
        let m = sphere();
        let v = ExprField::from_sources(
            m.chart().clone(),
            TensorShape::new(0, 1, 2).unwrap(),
            &["1", "0"],
        )
        .unwrap();
        let p = Point::new(vec![FRAC_PI_4, 0.8]).unwrap();
        let r = ricci_identity_residual(&m, &v, &p, DiffMode::Dual).unwrap();
        assert!(r < 1e-8, "residual {r}");
    }

    #[test]
    fn riemann_cocycle_closes() {
        let p = Point::new(vec![1.2, 0.9]).unwrap();
        let (a, b, c) = (polar(), sphere(), poincare());
        let r = cocycle_riemann(&a, &b, &c, &p, DiffMode::Dual).unwrap();
        assert!(r < 1e-7, "cocycle residual {r}");
        let r2 = cocycle_riemann(&b, &c, &a, &p, DiffMode::Dual).unwrap();
        assert!((r - r2).abs() <= 1e-12 * (1.0 + r));
    }

    #[test]
    fn flatness_check_accepts_flat_subject() {
        let g = sphere();
        let m = polar();
        let points: Vec<Point> = [(0.9, 1.0), (1.4, 2.0), (2.1, 0.5)]
            .iter()
            .map(|&(a, b)| Point::new(vec![a, b]).unwrap())
            .collect();
        let report = flatness_check(&g, &m, &points, 1e-7, DiffMode::Dual).unwrap();
        assert!(report.passed, "max residual {}", report.max_residual);
    }

    #[test]
    fn flatness_check_rejects_curved_subject() {
        let g = polar();
        let m = sphere();
        let points: Vec<Point> = [(0.9, 1.0), (1.4, 2.0), (FRAC_PI_3, 0.5)]
            .iter()
            .map(|&(a, b)| Point::new(vec![a, b]).unwrap())
            .collect();
        let report = flatness_check(&g, &m, &points, 1e-7, DiffMode::Dual).unwrap();
        assert!(!report.passed);
        assert!(
            report.max_residual >= 0.1,
            "max residual {}",
            report.max_residual
        );
    }

    #[test]
    fn flatness_check_of_identity_pair_is_exactly_zero() {
        let chart = ChartSpec::from_names(&["x", "y"]).unwrap();
        let delta = MetricField::euclidean(&chart);
        let points = vec![Point::new(vec![0.2, -0.7]).unwrap()];
        let report = flatness_check(&delta, &delta, &points, 1e-12, DiffMode::Dual).unwrap();
        assert!(report.passed);
        assert_eq!(report.max_residual, 0.0);
    }

    #[test]
    fn sign_flip_fixture_breaks_theorem2() {
        let g = polar();
        let m = sphere();
        let p = Point::new(vec![1.3, 0.7]).unwrap();
        let delta = MetricField::euclidean(g.chart());
        let full = riemann_relative_sign_flipped(&delta, &m, &p, DiffMode::Dual)
            .unwrap()
            .values;
        let background = riemann_relative_sign_flipped(&delta, &g, &p, DiffMode::Dual)
            .unwrap()
            .values;
        let relative = riemann_relative_sign_flipped(&g, &m, &p, DiffMode::Dual)
            .unwrap()
            .values;
        let residual = full.sub(&background).unwrap().sub(&relative).unwrap();
        assert!(
            residual.max_abs() > 1e-3,
            "mutant survived: {}",
            residual.max_abs()
        );
    }

    #[test]
    fn fd_mode_agrees_with_dual_mode() {
        let g = polar();
        let m = sphere();
        let p = Point::new(vec![1.3, 0.7]).unwrap();
        let dual = riemann_relative(&g, &m, &p, DiffMode::Dual).unwrap().values;
        let fd = riemann_relative(&g, &m, &p, DiffMode::CentralFd)
            .unwrap()
            .values;
        let diff = dual.sub(&fd).unwrap().max_abs();
        assert!(
            diff < 1e-5 * (1.0 + dual.max_abs()),
            "dual vs fd diff {diff}"
        );
    }
}
