//! Metric fields: symmetric positive-definite (0,2) tensor fields.

use crate::chart::{ChartSpec, Point};
use crate::diff::{FieldJet, TensorField};
use crate::error::{Error, Result};
use crate::expr::{self, BinaryOp, Expr};
use crate::manifest::MetricManifest;
use crate::tensor::{TensorComponents, TensorShape};

/// Index into the packed upper triangle (`a ≤ b`, row-major).
fn tri(n: usize, a: usize, b: usize) -> usize {
    debug_assert!(a <= b && b < n);
    a * (2 * n - a + 1) / 2 + (b - a)
}

/// A symmetric positive-definite (0,2) tensor field given by expressions.
///
/// Components are stored as the upper triangle, so symmetry holds by
/// construction (bit for bit). Positive-definiteness is enforced wherever
/// the metric is actually evaluated, via the Cholesky factorization used to
/// invert it.
#[derive(Debug, Clone)]
pub struct MetricField {
    name: String,
    chart: ChartSpec,
    upper: Vec<Expr>,
    sample_region: Vec<[f64; 2]>,
}

impl MetricField {
    pub fn new(
        name: impl Into<String>,
        chart: ChartSpec,
        upper: Vec<Expr>,
        sample_region: Vec<[f64; 2]>,
    ) -> Result<Self> {
        let n = chart.dimension();
        if upper.len() != n * (n + 1) / 2 {
            return Err(Error::shape(format!(
                "expected {} upper-triangle components for dimension {n}, got {}",
                n * (n + 1) / 2,
                upper.len()
            )));
        }
        if sample_region.len() != n {
            return Err(Error::shape(format!(
                "expected {n} sample intervals, got {}",
                sample_region.len()
            )));
        }
        Ok(MetricField {
            name: name.into(),
            chart,
            upper,
            sample_region,
        })
    }

    pub fn from_manifest(manifest: &MetricManifest) -> Result<Self> {
        let chart = manifest.validate()?;
        let n = manifest.dimension;
        let mut upper = Vec::with_capacity(n * (n + 1) / 2);
        for a in 0..n {
            for b in a..n {
                upper.push(expr::parse(&manifest.components[a][b], &chart)?);
            }
        }
        MetricField::new(
            manifest.name.clone(),
            chart,
            upper,
            manifest.sample_region.clone(),
        )
    }

    /// The chart-induced Euclidean metric: identity components on `chart`.
    pub fn euclidean(chart: &ChartSpec) -> Self {
        let n = chart.dimension();
        let mut upper = Vec::with_capacity(n * (n + 1) / 2);
        for a in 0..n {
            for b in a..n {
                upper.push(Expr::constant(if a == b { 1.0 } else { 0.0 }));
            }
        }
        MetricField {
            name: "euclidean".into(),
            chart: chart.clone(),
            upper,
            sample_region: vec![[-1.0, 1.0]; n],
        }
    }

    /// The same metric scaled by a positive constant.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::config(format!(
                "metric scale factor must be positive and finite, got {factor}"
            )));
        }
        let upper = self
            .upper
            .iter()
            .map(|e| Expr::binary(BinaryOp::Mul, Expr::constant(factor), e.clone()))
            .collect();
        Ok(MetricField {
            name: format!("{}*{}", factor, self.name),
            chart: self.chart.clone(),
            upper,
            sample_region: self.sample_region.clone(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn chart(&self) -> &ChartSpec {
        &self.chart
    }

    pub fn dimension(&self) -> usize {
        self.chart.dimension()
    }

    pub fn sample_region(&self) -> &[[f64; 2]] {
        &self.sample_region
    }

    pub fn component(&self, a: usize, b: usize) -> &Expr {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        &self.upper[tri(self.dimension(), lo, hi)]
    }

    /// Full n×n value matrix at a point (row-major).
    pub fn value_matrix(&self, point: &Point) -> Result<Vec<f64>> {
        let n = self.dimension();
        let mut mat = vec![0.0; n * n];
        for a in 0..n {
            for b in a..n {
                let v = expr::eval(&self.upper[tri(n, a, b)], point.coords())?;
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        context: format!("metric `{}` at {point}", self.name),
                    });
                }
                mat[a * n + b] = v;
                mat[b * n + a] = v;
            }
        }
        Ok(mat)
    }
}

impl TensorField for MetricField {
    fn chart(&self) -> &ChartSpec {
        &self.chart
    }

    fn shape(&self) -> TensorShape {
        TensorShape::new(0, 2, self.dimension()).expect("(0,2) is always a valid shape")
    }

    fn components(&self, point: &Point) -> Result<TensorComponents> {
        TensorComponents::new(self.shape(), self.value_matrix(point)?)
    }

    fn jet1_exact(&self, point: &Point) -> Result<FieldJet> {
        let n = self.dimension();
        let shape = self.shape();
        let pshape = shape.with_extra_covariant()?;
        let mut values = vec![0.0; shape.len()];
        let mut partials = vec![0.0; pshape.len()];
        for a in 0..n {
            for b in a..n {
                let jet = expr::eval_jet1(&self.upper[tri(n, a, b)], point.coords())?;
                values[a * n + b] = jet.v;
                values[b * n + a] = jet.v;
                for e in 0..n {
                    partials[(a * n + b) * n + e] = jet.d[e];
                    partials[(b * n + a) * n + e] = jet.d[e];
                }
            }
        }
        Ok(FieldJet {
            components: TensorComponents::new(shape, values)?,
            partials: TensorComponents::new(pshape, partials)?,
            second_partials: None,
        })
    }

    fn jet2_exact(&self, point: &Point) -> Result<FieldJet> {
        let n = self.dimension();
        let shape = self.shape();
        let pshape = shape.with_extra_covariant()?;
        let sshape = pshape.with_extra_covariant()?;
        let mut values = vec![0.0; shape.len()];
        let mut partials = vec![0.0; pshape.len()];
        let mut second = vec![0.0; sshape.len()];
        for a in 0..n {
            for b in a..n {
                let jet = expr::eval_jet2(&self.upper[tri(n, a, b)], point.coords())?;
                for flat in [a * n + b, b * n + a] {
                    values[flat] = jet.v;
                    for e in 0..n {
                        partials[flat * n + e] = jet.d[e];
                        for f in 0..n {
                            second[(flat * n + e) * n + f] = jet.h[e][f];
                        }
                    }
                }
            }
        }
        Ok(FieldJet {
            components: TensorComponents::new(shape, values)?,
            partials: TensorComponents::new(pshape, partials)?,
            second_partials: Some(TensorComponents::new(sshape, second)?),
        })
    }
}
