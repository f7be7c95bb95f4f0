//! Connections relative to a background metric.
//!
//! For metrics `g` (background) and `m` (subject) on a shared chart, the
//! relative Christoffel tensor is
//!
//! ```text
//! Γ^a_bc(g, m) = ½ m^{an} (m_{nb;c} + m_{nc;b} − m_{bc;n})
//! ```
//!
//! where `;` is the covariant derivative of the Levi-Civita connection of
//! `g`. With `g = δ` (the chart-induced Euclidean metric) the covariant
//! derivatives reduce to partial derivatives and `Γ(δ, m)` are the classic
//! Christoffel symbols of `m`. The relative tensor measures the difference
//! between the connections of `m` and `g`:
//!
//! ```text
//! v^a_;b(m) = v^a_;b(g) + Γ^a_cb(g, m) v^c
//! ```
//!
//! Everything here computes `Γ(g, m)` from g-covariant derivatives of `m`
//! directly — not as a difference of Christoffel symbols — so the identity
//! above and the three-metric cycle `Γ(m,g) + Γ(g,h) + Γ(h,m) = 0` are
//! nontrivial cross-checks between independent code paths.
//!
//! Assembly routines are generic over the scalar type: with plain `f64`
//! they produce values, with first-order duals they additionally carry
//! exact first derivatives of everything they compute, which is how the
//! curvature module obtains `∂Γ`.

use crate::chart::Point;
use crate::diff::{self, DiffMode, FieldJet, TensorField};
use crate::dual::{DualNum, Jet1};
use crate::error::{Error, Result};
use crate::metric::MetricField;
use crate::tensor::{TensorComponents, TensorShape, MAX_RANK};

/// Warn (via the harness) when the metric's estimated condition number
/// exceeds this.
pub const CONDITION_WARN_THRESHOLD: f64 = 1e8;

#[inline]
pub(crate) fn i2(n: usize, a: usize, b: usize) -> usize {
    a * n + b
}

#[inline]
pub(crate) fn i3(n: usize, a: usize, b: usize, c: usize) -> usize {
    (a * n + b) * n + c
}

/// Christoffel components `Γ^a_bc` at one point, shape (1,2), symmetric in
/// the two lower slots.
#[derive(Debug, Clone)]
pub struct ChristoffelComponents {
    pub values: TensorComponents,
    pub base_point: Point,
}

impl ChristoffelComponents {
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.values.get(&[a, b, c])
    }
}

// ---------------------------------------------------------------------------
// Generic assembly
// ---------------------------------------------------------------------------

/// Cholesky-based inverse of a symmetric positive-definite matrix, generic
/// over the scalar. Returns the inverse and a cheap condition estimate
/// `(max Lᵢᵢ / min Lᵢᵢ)²`; `None` when a pivot is non-positive.
pub(crate) fn spd_inverse<T: DualNum>(n: usize, a: &[T]) -> Option<(Vec<T>, f64)> {
    // factor A = L Lᵀ
    let mut l = vec![T::constant(0.0); n * n];
    let mut pivot_max = f64::MIN;
    let mut pivot_min = f64::MAX;
    for j in 0..n {
        let mut d = a[i2(n, j, j)];
        for k in 0..j {
            d = d - l[i2(n, j, k)] * l[i2(n, j, k)];
        }
        let dv = d.value();
        if !(dv.is_finite() && dv > 0.0) {
            return None;
        }
        pivot_max = pivot_max.max(dv);
        pivot_min = pivot_min.min(dv);
        let ljj = d.sqrt();
        l[i2(n, j, j)] = ljj;
        for i in (j + 1)..n {
            let mut s = a[i2(n, i, j)];
            for k in 0..j {
                s = s - l[i2(n, i, k)] * l[i2(n, j, k)];
            }
            l[i2(n, i, j)] = s / ljj;
        }
    }
    // invert column by column: L y = e_j, then Lᵀ x = y
    let mut inv = vec![T::constant(0.0); n * n];
    for col in 0..n {
        let mut y = vec![T::constant(0.0); n];
        for i in 0..n {
            let mut s = T::constant(if i == col { 1.0 } else { 0.0 });
            for k in 0..i {
                s = s - l[i2(n, i, k)] * y[k];
            }
            y[i] = s / l[i2(n, i, i)];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s = s - l[i2(n, k, i)] * inv[i2(n, k, col)];
            }
            inv[i2(n, i, col)] = s / l[i2(n, i, i)];
        }
    }
    Some((inv, (pivot_max / pivot_min).powi(2)))
}

/// Classic Christoffel symbols `Γ^a_bc(δ, g) = ½ g^{at}(∂_c g_tb + ∂_b g_tc − ∂_t g_bc)`.
///
/// `dg[i3(a,b,c)] = ∂_c g_ab`. Output indexed `[i3(a,b,c)]`, computed for
/// `b ≤ c` and mirrored so lower-slot symmetry is bitwise exact.
pub(crate) fn classic_gamma<T: DualNum>(n: usize, inv_g: &[T], dg: &[T]) -> Vec<T> {
    let half = T::constant(0.5);
    let mut gamma = vec![T::constant(0.0); n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in b..n {
                let mut s = T::constant(0.0);
                for t in 0..n {
                    let combo = dg[i3(n, t, b, c)] + dg[i3(n, t, c, b)] - dg[i3(n, b, c, t)];
                    s = s + inv_g[i2(n, a, t)] * combo;
                }
                let value = half * s;
                gamma[i3(n, a, b, c)] = value;
                gamma[i3(n, a, c, b)] = value;
            }
        }
    }
    gamma
}

/// Relative Christoffel tensor from g-covariant derivatives of `m`.
///
/// `bg` holds the classic Christoffel symbols of the background `g`;
/// `m`, `dm`, `inv_m` describe the subject metric. Lower-slot symmetry is
/// enforced by mirroring, as in [`classic_gamma`].
pub(crate) fn relative_gamma<T: DualNum>(
    n: usize,
    m: &[T],
    dm: &[T],
    inv_m: &[T],
    bg: &[T],
) -> Vec<T> {
    // m_{ab;c} = ∂_c m_ab − Γ^s_ac m_sb − Γ^s_bc m_as
    let mut cov = vec![T::constant(0.0); n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut s = dm[i3(n, a, b, c)];
                for t in 0..n {
                    s = s - bg[i3(n, t, a, c)] * m[i2(n, t, b)];
                    s = s - bg[i3(n, t, b, c)] * m[i2(n, a, t)];
                }
                cov[i3(n, a, b, c)] = s;
            }
        }
    }
    let half = T::constant(0.5);
    let mut gamma = vec![T::constant(0.0); n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in b..n {
                let mut s = T::constant(0.0);
                for t in 0..n {
                    let combo = cov[i3(n, t, b, c)] + cov[i3(n, t, c, b)] - cov[i3(n, b, c, t)];
                    s = s + inv_m[i2(n, a, t)] * combo;
                }
                let value = half * s;
                gamma[i3(n, a, b, c)] = value;
                gamma[i3(n, a, c, b)] = value;
            }
        }
    }
    gamma
}

/// One covariant-derivative slot appended to a (p,q) tensor:
/// `∂_e T + Γ·T` per contravariant slot `− Γ·T` per covariant slot.
///
/// `t` is indexed by the tensor shape, `dt[flat*n + e] = ∂_e t[flat]`, and
/// `bg[i3(u,l,e)] = Γ^u_le` of the connection being applied.
pub(crate) fn covariant_derivative_values<T: DualNum>(
    shape: TensorShape,
    t: &[T],
    dt: &[T],
    bg: &[T],
) -> Vec<T> {
    let n = shape.dimension();
    let p = shape.contravariant_rank();
    let q = shape.covariant_rank();
    let rank = p + q;
    let mut out = vec![T::constant(0.0); shape.len() * n];
    let mut idx = [0usize; MAX_RANK];
    let mut alt = [0usize; MAX_RANK];
    for flat in 0..shape.len() {
        shape.unravel(flat, &mut idx);
        for e in 0..n {
            let mut acc = dt[flat * n + e];
            for slot in 0..rank {
                alt[..rank].copy_from_slice(&idx[..rank]);
                let own = idx[slot];
                if slot < p {
                    for s in 0..n {
                        alt[slot] = s;
                        acc = acc + bg[i3(n, own, s, e)] * t[shape.linear(&alt[..rank])];
                    }
                } else {
                    for s in 0..n {
                        alt[slot] = s;
                        acc = acc - bg[i3(n, s, own, e)] * t[shape.linear(&alt[..rank])];
                    }
                }
            }
            out[flat * n + e] = acc;
        }
    }
    out
}

/// View a metric's order-1 jet as flat value/partial arrays.
pub(crate) fn metric_arrays(jet: &FieldJet) -> (&[f64], &[f64]) {
    (jet.components.data(), jet.partials.data())
}

/// Lift a metric's order-2 jet into first-order dual scalars: values carry
/// gradients, partials carry Hessian rows.
pub(crate) fn metric_arrays_jet1(jet: &FieldJet, n: usize) -> Result<(Vec<Jet1>, Vec<Jet1>)> {
    let second = jet
        .second_partials
        .as_ref()
        .ok_or_else(|| Error::Unsupported {
            message: "order-2 jet required".into(),
        })?;
    let values = jet.components.data();
    let partials = jet.partials.data();
    let hess = second.data();
    let mut m = Vec::with_capacity(n * n);
    for flat in 0..n * n {
        let mut d = [0.0; crate::chart::MAX_DIM];
        d[..n].copy_from_slice(&partials[flat * n..flat * n + n]);
        m.push(Jet1::new(values[flat], d));
    }
    let mut dm = Vec::with_capacity(n * n * n);
    for flat in 0..n * n {
        for e in 0..n {
            let mut d = [0.0; crate::chart::MAX_DIM];
            d[..n].copy_from_slice(&hess[(flat * n + e) * n..(flat * n + e) * n + n]);
            dm.push(Jet1::new(partials[flat * n + e], d));
        }
    }
    Ok((m, dm))
}

fn not_pd(metric: &MetricField, point: &Point) -> Error {
    Error::NotPositiveDefinite {
        metric: metric.name().to_string(),
        point: point.to_string(),
    }
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

/// Inverse metric `m^{ab}` at a point, shape (2,0).
pub fn inverse_metric(m: &MetricField, point: &Point) -> Result<TensorComponents> {
    Ok(inverse_with_condition(m, point)?.0)
}

/// Inverse plus the condition estimate from the Cholesky pivots.
pub fn inverse_with_condition(m: &MetricField, point: &Point) -> Result<(TensorComponents, f64)> {
    m.chart().guard_ok(point)?;
    let n = m.dimension();
    let mat = m.value_matrix(point)?;
    let (inv, cond) = spd_inverse(n, &mat).ok_or_else(|| not_pd(m, point))?;
    Ok((
        TensorComponents::new(TensorShape::new(2, 0, n)?, inv)?,
        cond,
    ))
}

/// Classic Christoffel symbols of `g` in its chart, `Γ^a_bc(δ, g)`,
/// computed directly from partial derivatives of `g`.
pub fn christoffel_classic(
    g: &MetricField,
    point: &Point,
    mode: DiffMode,
) -> Result<ChristoffelComponents> {
    let n = g.dimension();
    let jet = diff::jet(g, point, 1, mode)?;
    let (values, partials) = metric_arrays(&jet);
    let (inv, _) = spd_inverse(n, values).ok_or_else(|| not_pd(g, point))?;
    let gamma = classic_gamma(n, &inv, partials);
    Ok(ChristoffelComponents {
        values: TensorComponents::new(TensorShape::new(1, 2, n)?, gamma).map_err(|_| {
            Error::NonFinite {
                context: format!("Christoffel symbols of `{}` at {point}", g.name()),
            }
        })?,
        base_point: point.clone(),
    })
}

/// Relative Christoffel tensor `Γ^a_bc(g, m)`: the connection of `m`
/// written through covariant derivatives taken with `g`'s connection.
pub fn christoffel_relative(
    g: &MetricField,
    m: &MetricField,
    point: &Point,
    mode: DiffMode,
) -> Result<ChristoffelComponents> {
    g.chart().compatible(m.chart())?;
    g.chart().guard_ok(point)?;
    m.chart().guard_ok(point)?;
    let n = m.dimension();

    let g_jet = diff::jet(g, point, 1, mode)?;
    let (g_values, g_partials) = metric_arrays(&g_jet);
    let (inv_g, _) = spd_inverse(n, g_values).ok_or_else(|| not_pd(g, point))?;
    let bg = classic_gamma(n, &inv_g, g_partials);

    let m_jet = diff::jet(m, point, 1, mode)?;
    let (m_values, m_partials) = metric_arrays(&m_jet);
    let (inv_m, _) = spd_inverse(n, m_values).ok_or_else(|| not_pd(m, point))?;
    let gamma = relative_gamma(n, m_values, m_partials, &inv_m, &bg);

    Ok(ChristoffelComponents {
        values: TensorComponents::new(TensorShape::new(1, 2, n)?, gamma).map_err(|_| {
            Error::NonFinite {
                context: format!(
                    "relative Christoffel tensor ({}, {}) at {point}",
                    g.name(),
                    m.name()
                ),
            }
        })?,
        base_point: point.clone(),
    })
}

/// Covariant derivative of an arbitrary tensor field with respect to `g`'s
/// Levi-Civita connection. Appends the derivative slot last:
/// `(∇T)^{a..}_{b.. e} = ∂_e T^{a..}_{b..} + Γ^{a}_{se} T^{s..}_{b..} − Γ^{s}_{be} T^{a..}_{s..} − …`
pub fn covariant_derivative(
    g: &MetricField,
    field: &dyn TensorField,
    point: &Point,
    mode: DiffMode,
) -> Result<TensorComponents> {
    g.chart().compatible(field.chart())?;
    g.chart().guard_ok(point)?;
    let n = g.dimension();

    let g_jet = diff::jet(g, point, 1, mode)?;
    let (g_values, g_partials) = metric_arrays(&g_jet);
    let (inv_g, _) = spd_inverse(n, g_values).ok_or_else(|| not_pd(g, point))?;
    let bg = classic_gamma(n, &inv_g, g_partials);

    let t_jet = diff::jet(field, point, 1, mode)?;
    let values = covariant_derivative_values(
        field.shape(),
        t_jet.components.data(),
        t_jet.partials.data(),
        &bg,
    );
    TensorComponents::new(field.shape().with_extra_covariant()?, values)
}

/// A covariant derivative, viewed again as a tensor field so it can be
/// differentiated a second time. Exact first derivatives come from running
/// the whole assembly on first-order duals; plain evaluation works anywhere,
/// which is what the finite-difference path uses.
pub struct CovariantDerivativeField<'a> {
    metric: &'a MetricField,
    inner: &'a dyn TensorField,
    mode: DiffMode,
    shape: TensorShape,
}

impl<'a> CovariantDerivativeField<'a> {
    pub fn new(
        metric: &'a MetricField,
        inner: &'a dyn TensorField,
        mode: DiffMode,
    ) -> Result<Self> {
        metric.chart().compatible(inner.chart())?;
        Ok(CovariantDerivativeField {
            metric,
            inner,
            mode,
            shape: inner.shape().with_extra_covariant()?,
        })
    }
}

impl TensorField for CovariantDerivativeField<'_> {
    fn chart(&self) -> &crate::chart::ChartSpec {
        self.metric.chart()
    }

    fn shape(&self) -> TensorShape {
        self.shape
    }

    fn components(&self, point: &Point) -> Result<TensorComponents> {
        covariant_derivative(self.metric, self.inner, point, self.mode)
    }

    fn jet1_exact(&self, point: &Point) -> Result<FieldJet> {
        let n = self.metric.dimension();

        let g_jet = diff::jet(self.metric, point, 2, DiffMode::Dual)?;
        let (g1, dg1) = metric_arrays_jet1(&g_jet, n)?;
        let (inv_g, _) = spd_inverse(n, &g1).ok_or_else(|| not_pd(self.metric, point))?;
        let bg = classic_gamma(n, &inv_g, &dg1);

        let t_jet = diff::jet(self.inner, point, 2, DiffMode::Dual)?;
        let inner_shape = self.inner.shape();
        let (t1, dt1) = field_arrays_jet1(&t_jet, inner_shape.len(), n)?;
        let cov = covariant_derivative_values(inner_shape, &t1, &dt1, &bg);

        split_jet1(self.shape, &cov, n)
    }
}

/// Lift any field's order-2 jet to first-order dual arrays.
pub(crate) fn field_arrays_jet1(
    jet: &FieldJet,
    len: usize,
    n: usize,
) -> Result<(Vec<Jet1>, Vec<Jet1>)> {
    let second = jet
        .second_partials
        .as_ref()
        .ok_or_else(|| Error::Unsupported {
            message: "order-2 jet required".into(),
        })?;
    let values = jet.components.data();
    let partials = jet.partials.data();
    let hess = second.data();
    let mut t = Vec::with_capacity(len);
    for flat in 0..len {
        let mut d = [0.0; crate::chart::MAX_DIM];
        d[..n].copy_from_slice(&partials[flat * n..flat * n + n]);
        t.push(Jet1::new(values[flat], d));
    }
    let mut dt = Vec::with_capacity(len * n);
    for flat in 0..len {
        for e in 0..n {
            let mut d = [0.0; crate::chart::MAX_DIM];
            d[..n].copy_from_slice(&hess[(flat * n + e) * n..(flat * n + e) * n + n]);
            dt.push(Jet1::new(partials[flat * n + e], d));
        }
    }
    Ok((t, dt))
}

/// Split dual-valued components into a value tensor plus a partials tensor.
pub(crate) fn split_jet1(shape: TensorShape, data: &[Jet1], n: usize) -> Result<FieldJet> {
    let mut values = Vec::with_capacity(data.len());
    let mut partials = Vec::with_capacity(data.len() * n);
    for jet in data {
        values.push(jet.v);
    }
    for jet in data {
        for e in 0..n {
            partials.push(jet.d[e]);
        }
    }
    Ok(FieldJet {
        components: TensorComponents::new(shape, values)?,
        partials: TensorComponents::new(shape.with_extra_covariant()?, partials)?,
        second_partials: None,
    })
}

// ---------------------------------------------------------------------------
// Residual-style operations
// ---------------------------------------------------------------------------

/// A raw residual together with the magnitude of the largest term entering
/// the identity; tolerances scale with `1 + scale`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ResidualSample {
    pub raw: f64,
    pub scale: f64,
}

impl ResidualSample {
    pub fn normalized(&self) -> f64 {
        self.raw / (1.0 + self.scale)
    }
}

pub(crate) fn theorem1_sample(
    g: &MetricField,
    m: &MetricField,
    v: &dyn TensorField,
    point: &Point,
    mode: DiffMode,
) -> Result<ResidualSample> {
    let lhs = covariant_derivative(m, v, point, mode)?;
    let rhs_cov = covariant_derivative(g, v, point, mode)?;
    let gamma = christoffel_relative(g, m, point, mode)?;
    let values = v.components(point)?;
    // Γ^a_cb v^c: pair the product's v-slot with Γ's first lower slot
    let correction = gamma.values.tensor_product(&values)?.contract(1, 0)?;
    let rhs = rhs_cov.add(&correction)?;
    let residual = lhs.sub(&rhs)?;
    Ok(ResidualSample {
        raw: residual.max_abs(),
        scale: lhs
            .max_abs()
            .max(rhs_cov.max_abs())
            .max(correction.max_abs()),
    })
}

/// Max-abs residual of `v^a_;b(m) − v^a_;b(g) − Γ^a_cb(g,m) v^c`; the two
/// sides are computed through independent code paths.
pub fn theorem1_residual(
    g: &MetricField,
    m: &MetricField,
    v: &dyn TensorField,
    point: &Point,
    mode: DiffMode,
) -> Result<f64> {
    Ok(theorem1_sample(g, m, v, point, mode)?.raw)
}

pub(crate) fn cocycle_gamma_sample(
    m: &MetricField,
    g: &MetricField,
    h: &MetricField,
    point: &Point,
    mode: DiffMode,
) -> Result<ResidualSample> {
    let a = christoffel_relative(m, g, point, mode)?.values;
    let b = christoffel_relative(g, h, point, mode)?.values;
    let c = christoffel_relative(h, m, point, mode)?.values;
    let sum = a.add(&b)?.add(&c)?;
    Ok(ResidualSample {
        raw: sum.max_abs(),
        scale: a.max_abs().max(b.max_abs()).max(c.max_abs()),
    })
}

/// Max-abs of the three-metric cycle `Γ(m,g) + Γ(g,h) + Γ(h,m)`.
pub fn cocycle_gamma(
    m: &MetricField,
    g: &MetricField,
    h: &MetricField,
    point: &Point,
    mode: DiffMode,
) -> Result<f64> {
    Ok(cocycle_gamma_sample(m, g, h, point, mode)?.raw)
}

pub(crate) fn compatibility_sample(
    m: &MetricField,
    point: &Point,
    mode: DiffMode,
) -> Result<ResidualSample> {
    let jet = diff::jet(m, point, 1, mode)?;
    let cov = covariant_derivative(m, m, point, mode)?;
    // the two cancelling pieces: ∂m and the Γ-correction terms
    let corrections = jet.partials.sub(&cov)?;
    Ok(ResidualSample {
        raw: cov.max_abs(),
        scale: jet.partials.max_abs().max(corrections.max_abs()),
    })
}
