//! Coordinate charts and points.

use crate::error::{Error, Result};
use crate::expr::{self, Expr};

/// Largest supported chart dimension. Keeps rank-4 tensors small (8^4
/// components) and lets the dual-number types use fixed-size lanes.
pub const MAX_DIM: usize = 8;

/// Smallest supported chart dimension.
pub const MIN_DIM: usize = 2;

/// A coordinate chart: named coordinates plus an optional domain guard.
///
/// The guard is a scalar expression over the coordinates; a point belongs to
/// the chart's domain iff the guard evaluates to a finite value strictly
/// greater than zero. Singular loci are excluded by choosing a guard that
/// vanishes there (`r` for a polar chart, `sin(theta)` for a sphere chart).
#[derive(Debug, Clone)]
pub struct ChartSpec {
    names: Vec<String>,
    guard: Option<Expr>,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl ChartSpec {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let n = names.len();
        if !(MIN_DIM..=MAX_DIM).contains(&n) {
            return Err(Error::Unsupported {
                message: format!(
                    "chart dimension {n} outside supported range {MIN_DIM}..={MAX_DIM}"
                ),
            });
        }
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(Error::Manifest {
                    message: format!("coordinate name `{name}` is not an identifier"),
                });
            }
            if expr::is_function_name(name) {
                return Err(Error::Manifest {
                    message: format!("coordinate name `{name}` collides with a function name"),
                });
            }
            if names[..i].contains(name) {
                return Err(Error::Manifest {
                    message: format!("duplicate coordinate name `{name}`"),
                });
            }
        }
        Ok(ChartSpec { names, guard: None })
    }

    pub fn from_names(names: &[&str]) -> Result<Self> {
        ChartSpec::new(names.iter().map(|s| s.to_string()).collect())
    }

    /// Attach a domain guard given as expression source.
    pub fn with_guard_source(mut self, source: &str) -> Result<Self> {
        let guard = expr::parse(source, &self)?;
        self.guard = Some(guard);
        Ok(self)
    }

    pub fn with_guard(mut self, guard: Expr) -> Self {
        self.guard = Some(guard);
        self
    }

    pub fn dimension(&self) -> usize {
        self.names.len()
    }

    pub fn coordinate_names(&self) -> &[String] {
        &self.names
    }

    pub fn coordinate_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn guard(&self) -> Option<&Expr> {
        self.guard.as_ref()
    }

    /// Check that `point` lies in the guarded domain.
    pub fn guard_ok(&self, point: &Point) -> Result<()> {
        if point.dim() != self.dimension() {
            return Err(Error::ChartMismatch {
                message: format!(
                    "point has {} coordinates, chart has {}",
                    point.dim(),
                    self.dimension()
                ),
            });
        }
        if let Some(guard) = &self.guard {
            let v = match expr::eval(guard, point.coords()) {
                Ok(v) => v,
                Err(_) => {
                    return Err(Error::SingularPoint {
                        point: point.to_string(),
                        reason: "domain guard failed to evaluate".into(),
                    })
                }
            };
            let admissible = v.is_finite() && v > 0.0;
            if !admissible {
                return Err(Error::SingularPoint {
                    point: point.to_string(),
                    reason: format!("domain guard evaluated to {v} (must be > 0)"),
                });
            }
        }
        Ok(())
    }

    /// Two charts are compatible when they have the same dimension.
    ///
    /// Coordinate names are labels owned by each manifest; supplying two
    /// metrics to an operation asserts that their charts describe the same
    /// domain, coordinate by coordinate. Both guards still apply.
    pub fn compatible(&self, other: &ChartSpec) -> Result<()> {
        if self.dimension() != other.dimension() {
            return Err(Error::ChartMismatch {
                message: format!(
                    "dimensions differ: {} vs {}",
                    self.dimension(),
                    other.dimension()
                ),
            });
        }
        Ok(())
    }
}

/// A point of a chart, in coordinate order.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(Error::shape(format!(
                "point must have 1..={MAX_DIM} coordinates, got {}",
                coords.len()
            )));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::shape(format!("non-finite coordinate {bad}")));
        }
        Ok(Point { coords })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Point::new(coords.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.coords[i]
    }

    /// Copy with coordinate `axis` shifted by `delta` (for stencils).
    pub(crate) fn shifted(&self, axis: usize, delta: f64) -> Point {
        let mut coords = self.coords.clone();
        coords[axis] += delta;
        Point { coords }
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
