//! Rendering of evaluated tensors: one component per line with coordinate
//! names substituted, or a JSON object. Components print in row-major index
//! order with contravariant slots first.

use crate::EvalResult;
use bimetric::{DiffMode, MetricField, Point, TensorComponents};
use serde_json::json;

fn names(metric: &MetricField) -> Vec<&str> {
    metric
        .chart()
        .coordinate_names()
        .iter()
        .map(|s| s.as_str())
        .collect()
}

fn push_components(
    out: &mut String,
    t: &TensorComponents,
    names: &[&str],
    upper_slots: usize,
    label: &str,
) {
    let n = t.shape().dimension();
    let rank = t.shape().rank();
    let mut idx = [0usize; 4];
    for flat in 0..t.shape().len() {
        t.shape().unravel(flat, &mut idx);
        out.push_str(label);
        if upper_slots > 0 {
            out.push('^');
            out.push('{');
            for (k, &i) in idx[..upper_slots].iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push_str(names[i]);
            }
            out.push('}');
        }
        if rank > upper_slots {
            out.push('_');
            out.push('{');
            for (k, &i) in idx[upper_slots..rank].iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push_str(names[i]);
            }
            out.push('}');
        }
        out.push_str(&format!(" = {}\n", t.data()[flat]));
        let _ = n;
    }
}

pub(crate) fn eval_text(metric: &MetricField, point: &Point, result: &EvalResult) -> String {
    let names = names(metric);
    let mut out = String::new();
    out.push_str(&format!("# {} at {}\n", metric.name(), point));
    match result {
        EvalResult::Christoffel(c) => push_components(&mut out, &c.values, &names, 1, "Gamma"),
        EvalResult::Riemann(r) => push_components(&mut out, &r.values, &names, 1, "R"),
        EvalResult::Ricci(t) => push_components(&mut out, t, &names, 0, "Ric"),
        EvalResult::Scalar(s) => out.push_str(&format!("scalar_curvature = {s}\n")),
    }
    out
}

pub(crate) fn eval_json(
    metric: &MetricField,
    background: Option<&str>,
    kind: &str,
    mode: DiffMode,
    point: &Point,
    result: &EvalResult,
) -> String {
    let (shape, components): (_, Vec<f64>) = match result {
        EvalResult::Christoffel(c) => (Some(c.values.shape()), c.values.data().to_vec()),
        EvalResult::Riemann(r) => (Some(r.values.shape()), r.values.data().to_vec()),
        EvalResult::Ricci(t) => (Some(t.shape()), t.data().to_vec()),
        EvalResult::Scalar(s) => (None, vec![*s]),
    };
    let shape_json = match shape {
        Some(s) => json!({
            "contravariant": s.contravariant_rank(),
            "covariant": s.covariant_rank(),
            "dimension": s.dimension(),
        }),
        None => json!({
            "contravariant": 0,
            "covariant": 0,
            "dimension": metric.dimension(),
        }),
    };
    let value = json!({
        "schema": 1,
        "metric": metric.name(),
        "background": background,
        "kind": kind,
        "mode": mode.as_str(),
        "point": point.coords(),
        "shape": shape_json,
        "components": components,
    });
    serde_json::to_string_pretty(&value).expect("eval output serialization cannot fail")
}
