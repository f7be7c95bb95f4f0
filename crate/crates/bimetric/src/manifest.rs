//! JSON metric manifests.
//!
//! A manifest declares a metric as expression strings over named chart
//! coordinates, plus the sample region used by the check suites:
//!
//! ```json
//! {
//!   "schema": 1,
//!   "name": "polar_flat",
//!   "dimension": 2,
//!   "coordinates": ["r", "theta"],
//!   "components": [["1", "0"], ["0", "r^2"]],
//!   "domain_guard": "r",
//!   "sample_region": [[0.5, 2.5], [0.2, 3.0]]
//! }
//! ```
//!
//! `components` is the full symmetric matrix; symmetry is validated
//! structurally (the parsed trees of `[i][j]` and `[j][i]` must be equal).
//! `domain_guard` is optional; a point is admissible iff the guard evaluates
//! to a value strictly greater than zero.

use crate::chart::{ChartSpec, MAX_DIM, MIN_DIM};
use crate::error::{Error, Result};
use crate::expr;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const MANIFEST_SCHEMA: u32 = 1;

fn default_schema() -> u32 {
    MANIFEST_SCHEMA
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricManifest {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub name: String,
    pub dimension: usize,
    pub coordinates: Vec<String>,
    /// Full n×n matrix of expression strings, symmetric.
    pub components: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_guard: Option<String>,
    /// Closed intervals `[lo, hi]` per coordinate delimiting the region the
    /// check suites sample from; the metric must be positive-definite there.
    pub sample_region: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl MetricManifest {
    /// Build from the upper triangle (row-major, `a ≤ b`); the lower
    /// triangle is mirrored.
    pub fn from_upper_triangle(
        name: &str,
        coordinates: &[&str],
        upper: &[String],
        domain_guard: Option<&str>,
        sample_region: &[[f64; 2]],
        notes: Option<&str>,
    ) -> Result<MetricManifest> {
        let n = coordinates.len();
        if upper.len() != n * (n + 1) / 2 {
            return Err(Error::manifest(format!(
                "expected {} upper-triangle entries for dimension {n}, got {}",
                n * (n + 1) / 2,
                upper.len()
            )));
        }
        let mut components = vec![vec![String::new(); n]; n];
        let mut k = 0;
        for a in 0..n {
            for b in a..n {
                components[a][b] = upper[k].clone();
                components[b][a] = upper[k].clone();
                k += 1;
            }
        }
        let manifest = MetricManifest {
            schema: MANIFEST_SCHEMA,
            name: name.to_string(),
            dimension: n,
            coordinates: coordinates.iter().map(|s| s.to_string()).collect(),
            components,
            domain_guard: domain_guard.map(|s| s.to_string()),
            sample_region: sample_region.to_vec(),
            notes: notes.map(|s| s.to_string()),
        };
        manifest.validate()?;
        Ok(manifest)
    }

    /// Schema checks: coordinate names, matrix shape, parseability of every
    /// expression, structural symmetry, and a sane sample region.
    pub fn validate(&self) -> Result<ChartSpec> {
        if self.schema != MANIFEST_SCHEMA {
            return Err(Error::manifest(format!(
                "unsupported schema version {} (expected {MANIFEST_SCHEMA})",
                self.schema
            )));
        }
        if self.name.trim().is_empty() {
            return Err(Error::manifest("metric name must be non-empty"));
        }
        let n = self.dimension;
        if !(MIN_DIM..=MAX_DIM).contains(&n) {
            return Err(Error::manifest(format!(
                "dimension {n} outside supported range {MIN_DIM}..={MAX_DIM}"
            )));
        }
        if self.coordinates.len() != n {
            return Err(Error::manifest(format!(
                "dimension is {n} but {} coordinates are given",
                self.coordinates.len()
            )));
        }
        let chart = ChartSpec::new(self.coordinates.clone())?;
        if self.components.len() != n || self.components.iter().any(|row| row.len() != n) {
            return Err(Error::manifest(format!(
                "components must form a {n}x{n} matrix"
            )));
        }
        let mut parsed = vec![Vec::with_capacity(n); n];
        for (a, row) in self.components.iter().enumerate() {
            for (b, source) in row.iter().enumerate() {
                let e = expr::parse(source, &chart).map_err(|err| {
                    Error::manifest(format!("component [{a}][{b}] `{source}`: {err}"))
                })?;
                parsed[a].push(e);
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if parsed[a][b] != parsed[b][a] {
                    return Err(Error::manifest(format!(
                        "components [{a}][{b}] and [{b}][{a}] are not symmetric"
                    )));
                }
            }
        }
        let chart = match &self.domain_guard {
            Some(src) => chart
                .with_guard_source(src)
                .map_err(|err| Error::manifest(format!("domain_guard `{src}`: {err}")))?,
            None => chart,
        };
        if self.sample_region.len() != n {
            return Err(Error::manifest(format!(
                "sample_region must have {n} intervals, got {}",
                self.sample_region.len()
            )));
        }
        for (axis, lohi) in self.sample_region.iter().enumerate() {
            if !(lohi[0].is_finite() && lohi[1].is_finite()) || lohi[0] > lohi[1] {
                return Err(Error::manifest(format!(
                    "sample_region[{axis}] = [{}, {}] is not a valid interval",
                    lohi[0], lohi[1]
                )));
            }
        }
        Ok(chart)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<MetricManifest> {
        let manifest: MetricManifest =
            serde_json::from_str(text).map_err(|e| Error::manifest(e.to_string()))?;
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn from_path(path: &Path) -> Result<MetricManifest> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::manifest(format!("cannot read `{}`: {e}", path.display())))?;
        MetricManifest::from_json(&text).map_err(|e| match e {
            Error::Manifest { message } => {
                Error::manifest(format!("{}: {message}", path.display()))
            }
            other => other,
        })
    }
}
