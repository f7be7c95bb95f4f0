//! Tensor calculus for pairs of Riemannian metrics on a shared chart.
//!
//! Given a background metric `g` and a subject metric `m` on the same
//! coordinate chart, this crate computes the relative Christoffel tensor
//! `Γ(g, m)` and the relative Riemann tensor `R(g, m)` — objects that
//! express the connection and curvature of `m` using only covariant
//! derivatives taken with `g`. Setting `g` to the chart-induced Euclidean
//! metric `δ` recovers the classic coordinate formulas.
//!
//! The interesting identities these tensors satisfy are wired up as seeded,
//! tolerance-checked residual suites (see [`checks`]):
//!
//! * decomposition of covariant derivatives: `v_;(m) = v_;(g) + Γ(g,m)·v`
//! * curvature decomposition: `R(δ,m) = R(δ,g) + R(g,m)`
//! * three-metric cycles for `Γ` and `R`
//! * the Ricci identity and metric compatibility
//! * a sampled bimetric flatness criterion
//!
//! Metrics are declared as JSON manifests of closed-form expressions
//! ([`manifest`]); derivatives are exact (forward-mode dual numbers) with a
//! central finite-difference mode retained as an independent cross-check
//! ([`diff`]). Point sweeps run in parallel under the `parallel` feature
//! (default) with bit-identical results either way.

// index-explicit loops mirror the tensor index notation throughout
#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod chart;
pub mod checks;
pub mod connection;
pub mod curvature;
pub mod diff;
mod dual;
pub mod error;
pub mod expr;
pub mod manifest;
pub mod metric;
pub mod report;
pub mod rng;
pub mod tensor;

pub use chart::{ChartSpec, Point, MAX_DIM, MIN_DIM};
pub use checks::{run_check, run_suite, CheckConfig, CheckKind};
pub use connection::{
    christoffel_classic, christoffel_relative, cocycle_gamma, covariant_derivative, inverse_metric,
    theorem1_residual, ChristoffelComponents, CovariantDerivativeField,
};
pub use curvature::{
    cocycle_riemann, flatness_check, ricci, ricci_identity_residual, riemann_classic,
    riemann_relative, scalar_curvature, RiemannComponents,
};
pub use diff::{jet, DiffMode, ExprField, FieldJet, TensorField};
pub use dual::Dual2;
pub use error::{Error, Result};
pub use expr::{eval, eval_dual2, parse, pretty, Expr};
pub use manifest::MetricManifest;
pub use metric::MetricField;
pub use report::{ResidualReport, SuiteReport};
pub use tensor::{TensorComponents, TensorShape};
