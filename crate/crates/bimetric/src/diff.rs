//! Uniform derivative access for tensor fields.
//!
//! Fields expose their values everywhere; this module turns them into jets
//! (values plus first and optionally second partial derivatives) in one of
//! two modes:
//!
//! * [`DiffMode::Dual`] — exact forward-mode differentiation. Expression-
//!   backed fields propagate dual numbers through every node.
//! * [`DiffMode::CentralFd`] — central finite differences. Needs only point
//!   evaluations, so it works for any field and serves as an independent
//!   cross-check of the dual path.
//!
//! FD steps follow the usual balance between truncation and roundoff:
//! `h = ε^(1/3)·max(1,|xᵢ|)` for first derivatives and
//! `h = ε^(1/4)·max(1,|xᵢ|)` for second derivatives, with ε the f64 machine
//! epsilon. The stencil never switches to one-sided differences: a stencil
//! point outside the guarded domain is an error.

use crate::chart::{ChartSpec, Point};
use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::tensor::{TensorComponents, TensorShape};

/// ε^(1/3) and ε^(1/4) for ε = 2⁻⁵². Hardcoded so the stencil is identical
/// on every platform (ε^(1/4) is exactly 2⁻¹³).
const STEP_FIRST: f64 = 6.055454452393343e-6;
const STEP_SECOND: f64 = 1.220703125e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffMode {
    /// Exact forward-mode dual numbers.
    Dual,
    /// Central finite-difference stencils.
    CentralFd,
}

impl DiffMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiffMode::Dual => "dual",
            DiffMode::CentralFd => "fd",
        }
    }
}

impl std::str::FromStr for DiffMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<DiffMode> {
        match s {
            "dual" => Ok(DiffMode::Dual),
            "fd" => Ok(DiffMode::CentralFd),
            other => Err(Error::config(format!(
                "unknown differentiation mode `{other}` (expected `dual` or `fd`)"
            ))),
        }
    }
}

impl std::fmt::Display for DiffMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Values and partial derivatives of a tensor field at one point.
///
/// `partials` appends one covariant (derivative) slot to the field's shape;
/// `second_partials`, when present, appends two. Derivative slots come last.
#[derive(Debug, Clone)]
pub struct FieldJet {
    pub components: TensorComponents,
    pub partials: TensorComponents,
    pub second_partials: Option<TensorComponents>,
}

/// A tensor field over a chart: a map from points to component values,
/// differentiable at least once.
pub trait TensorField {
    fn chart(&self) -> &ChartSpec;
    fn shape(&self) -> TensorShape;
    fn components(&self, point: &Point) -> Result<TensorComponents>;

    /// Exact first-order jet via dual numbers.
    fn jet1_exact(&self, point: &Point) -> Result<FieldJet>;

    /// Exact second-order jet. Only expression-backed fields support this;
    /// derived fields (e.g. covariant derivatives of other fields) do not.
    fn jet2_exact(&self, _point: &Point) -> Result<FieldJet> {
        Err(Error::Unsupported {
            message: "second-order dual jet is not available for this field".into(),
        })
    }
}

/// Compute a jet of `field` at `point` to the requested order.
pub fn jet(field: &dyn TensorField, point: &Point, order: u8, mode: DiffMode) -> Result<FieldJet> {
    if order != 1 && order != 2 {
        return Err(Error::config(format!(
            "jet order must be 1 or 2, got {order}"
        )));
    }
    field.chart().guard_ok(point)?;
    match mode {
        DiffMode::Dual => {
            if order == 1 {
                field.jet1_exact(point)
            } else {
                field.jet2_exact(point)
            }
        }
        DiffMode::CentralFd => fd_jet(field, point, order),
    }
}

fn stencil_point(field: &dyn TensorField, point: &Point, axis: usize, delta: f64) -> Result<Point> {
    let shifted = point.shifted(axis, delta);
    field
        .chart()
        .guard_ok(&shifted)
        .map_err(|_| Error::SingularPoint {
            point: shifted.to_string(),
            reason: "finite-difference stencil point violates the domain guard".into(),
        })?;
    Ok(shifted)
}

fn fd_jet(field: &dyn TensorField, point: &Point, order: u8) -> Result<FieldJet> {
    let n = field.chart().dimension();
    let shape = field.shape();
    let len = shape.len();
    let components = field.components(point)?;

    // Steps per derivative order; made exactly representable around x.
    let exact_step = |axis: usize, base: f64| {
        let x = point.coord(axis);
        let nominal = base * x.abs().max(1.0);
        (x + nominal) - x
    };
    let steps1: Vec<f64> = (0..n).map(|e| exact_step(e, STEP_FIRST)).collect();
    let steps2: Vec<f64> = (0..n).map(|e| exact_step(e, STEP_SECOND)).collect();

    let partials_shape = shape.with_extra_covariant()?;
    let mut partials = vec![0.0; partials_shape.len()];
    for e in 0..n {
        let h = steps1[e];
        let plus = field.components(&stencil_point(field, point, e, h)?)?;
        let minus = field.components(&stencil_point(field, point, e, -h)?)?;
        for flat in 0..len {
            partials[flat * n + e] = (plus.data()[flat] - minus.data()[flat]) / (2.0 * h);
        }
    }
    let partials = TensorComponents::new(partials_shape, partials)?;

    if order == 1 {
        return Ok(FieldJet {
            components,
            partials,
            second_partials: None,
        });
    }

    // Second derivatives: diagonal from the 3-point stencil, mixed from the
    // 4-point cross; computed for i ≤ j and mirrored.
    let second_shape = partials_shape.with_extra_covariant()?;
    let mut second = vec![0.0; second_shape.len()];
    for i in 0..n {
        let hi = steps2[i];
        let plus = field.components(&stencil_point(field, point, i, hi)?)?;
        let minus = field.components(&stencil_point(field, point, i, -hi)?)?;
        for flat in 0..len {
            let d2 = (plus.data()[flat] - 2.0 * components.data()[flat] + minus.data()[flat])
                / (hi * hi);
            second[(flat * n + i) * n + i] = d2;
        }
        for j in (i + 1)..n {
            let hj = steps2[j];
            let pp = field.components(&stencil_point2(field, point, i, hi, j, hj)?)?;
            let pm = field.components(&stencil_point2(field, point, i, hi, j, -hj)?)?;
            let mp = field.components(&stencil_point2(field, point, i, -hi, j, hj)?)?;
            let mm = field.components(&stencil_point2(field, point, i, -hi, j, -hj)?)?;
            for flat in 0..len {
                let d2 = (pp.data()[flat] - pm.data()[flat] - mp.data()[flat] + mm.data()[flat])
                    / (4.0 * hi * hj);
                second[(flat * n + i) * n + j] = d2;
                second[(flat * n + j) * n + i] = d2;
            }
        }
    }
    let second = TensorComponents::new(second_shape, second)?;

    Ok(FieldJet {
        components,
        partials,
        second_partials: Some(second),
    })
}

fn stencil_point2(
    field: &dyn TensorField,
    point: &Point,
    i: usize,
    di: f64,
    j: usize,
    dj: f64,
) -> Result<Point> {
    let once = stencil_point(field, point, i, di)?;
    stencil_point(field, &once, j, dj)
}

/// A tensor field whose components are parsed expressions.
#[derive(Debug, Clone)]
pub struct ExprField {
    chart: ChartSpec,
    shape: TensorShape,
    components: Vec<Expr>,
}

impl ExprField {
    pub fn new(chart: ChartSpec, shape: TensorShape, components: Vec<Expr>) -> Result<Self> {
        if chart.dimension() != shape.dimension() {
            return Err(Error::shape(format!(
                "chart dimension {} does not match shape dimension {}",
                chart.dimension(),
                shape.dimension()
            )));
        }
        if components.len() != shape.len() {
            return Err(Error::shape(format!(
                "expected {} component expressions, got {}",
                shape.len(),
                components.len()
            )));
        }
        Ok(ExprField {
            chart,
            shape,
            components,
        })
    }

    pub fn from_sources(chart: ChartSpec, shape: TensorShape, sources: &[&str]) -> Result<Self> {
        let components = sources
            .iter()
            .map(|s| expr::parse(s, &chart))
            .collect::<Result<Vec<_>>>()?;
        ExprField::new(chart, shape, components)
    }

    pub fn component(&self, flat: usize) -> &Expr {
        &self.components[flat]
    }
}

impl TensorField for ExprField {
    fn chart(&self) -> &ChartSpec {
        &self.chart
    }

    fn shape(&self) -> TensorShape {
        self.shape
    }

    fn components(&self, point: &Point) -> Result<TensorComponents> {
        let data = self
            .components
            .iter()
            .map(|e| expr::eval(e, point.coords()))
            .collect::<Result<Vec<_>>>()?;
        TensorComponents::new(self.shape, data)
    }

    fn jet1_exact(&self, point: &Point) -> Result<FieldJet> {
        let n = self.chart.dimension();
        let len = self.shape.len();
        let mut values = vec![0.0; len];
        let partials_shape = self.shape.with_extra_covariant()?;
        let mut partials = vec![0.0; partials_shape.len()];
        for (flat, e) in self.components.iter().enumerate() {
            let jet = expr::eval_jet1(e, point.coords())?;
            values[flat] = jet.v;
            for k in 0..n {
                partials[flat * n + k] = jet.d[k];
            }
        }
        Ok(FieldJet {
            components: TensorComponents::new(self.shape, values)?,
            partials: TensorComponents::new(partials_shape, partials)?,
            second_partials: None,
        })
    }

    fn jet2_exact(&self, point: &Point) -> Result<FieldJet> {
        let n = self.chart.dimension();
        let len = self.shape.len();
        let mut values = vec![0.0; len];
        let partials_shape = self.shape.with_extra_covariant()?;
        let second_shape = partials_shape.with_extra_covariant()?;
        let mut partials = vec![0.0; partials_shape.len()];
        let mut second = vec![0.0; second_shape.len()];
        for (flat, e) in self.components.iter().enumerate() {
            let jet = expr::eval_jet2(e, point.coords())?;
            values[flat] = jet.v;
            for i in 0..n {
                partials[flat * n + i] = jet.d[i];
                for j in 0..n {
                    second[(flat * n + i) * n + j] = jet.h[i][j];
                }
            }
        }
        Ok(FieldJet {
            components: TensorComponents::new(self.shape, values)?,
            partials: TensorComponents::new(partials_shape, partials)?,
            second_partials: Some(TensorComponents::new(second_shape, second)?),
        })
    }
}
