//! Built-in metrics with known closed-form geometry, plus a seeded generator
//! of random smooth SPD metric fields for the property suites.

use crate::error::{Error, Result};
use crate::manifest::MetricManifest;
use crate::metric::MetricField;
use crate::rng::XorShiftRng;
use std::path::Path;

/// Names served by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &[
    "euclidean2",
    "euclidean3",
    "polar_flat",
    "sphere_unit",
    "poincare_half",
    "conformal2",
];

/// Look up a built-in metric manifest by name.
pub fn builtin(name: &str) -> Result<MetricManifest> {
    match name {
        "euclidean2" => MetricManifest::from_upper_triangle(
            "euclidean2",
            &["x", "y"],
            &["1".into(), "0".into(), "1".into()],
            None,
            &[[-1.0, 1.0], [-1.0, 1.0]],
            Some("chart-induced Euclidean metric of the plane"),
        ),
        "euclidean3" => MetricManifest::from_upper_triangle(
            "euclidean3",
            &["x", "y", "z"],
            &[
                "1".into(),
                "0".into(),
                "0".into(),
                "1".into(),
                "0".into(),
                "1".into(),
            ],
            None,
            &[[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]],
            Some("chart-induced Euclidean metric of 3-space"),
        ),
        "polar_flat" => MetricManifest::from_upper_triangle(
            "polar_flat",
            &["r", "theta"],
            &["1".into(), "0".into(), "r^2".into()],
            Some("r"),
            &[[0.5, 2.5], [0.2, 3.0]],
            Some("the flat plane in polar coordinates; singular locus r = 0"),
        ),
        "sphere_unit" => MetricManifest::from_upper_triangle(
            "sphere_unit",
            &["theta", "phi"],
            &["1".into(), "0".into(), "sin(theta)^2".into()],
            Some("sin(theta)"),
            &[[0.4, 2.7], [0.1, 6.1]],
            Some("round unit sphere; scalar curvature 2; poles excluded"),
        ),
        "poincare_half" => MetricManifest::from_upper_triangle(
            "poincare_half",
            &["x", "y"],
            &["1/y^2".into(), "0".into(), "1/y^2".into()],
            Some("y"),
            &[[-2.0, 2.0], [0.5, 3.0]],
            Some("hyperbolic upper half-plane; scalar curvature -2"),
        ),
        "conformal2" => MetricManifest::from_upper_triangle(
            "conformal2",
            &["x", "y"],
            &[
                "exp(0.4*sin(x)*cos(y))".into(),
                "0".into(),
                "exp(0.4*sin(x)*cos(y))".into(),
            ],
            None,
            &[[-1.5, 1.5], [-1.5, 1.5]],
            Some("conformally flat: exp(2*phi)*identity with phi = 0.2*sin(x)*cos(y)"),
        ),
        _ => Err(Error::UnknownBuiltin {
            name: name.to_string(),
        }),
    }
}

/// Resolve a metric argument: an existing manifest file path, otherwise a
/// builtin name.
pub fn load_metric(arg: &str) -> Result<MetricField> {
    let path = Path::new(arg);
    if path.exists() {
        return MetricField::from_manifest(&MetricManifest::from_path(path)?);
    }
    match builtin(arg) {
        Ok(manifest) => MetricField::from_manifest(&manifest),
        Err(Error::UnknownBuiltin { name }) => Err(Error::config(format!(
            "`{name}` is neither an existing manifest file nor a builtin metric"
        ))),
        Err(other) => Err(other),
    }
}

fn coordinate_names(dim: usize) -> &'static [&'static str] {
    match dim {
        2 => &["x", "y"],
        _ => &["x", "y", "z"],
    }
}

/// Enumerate all exponent tuples of total degree ≤ `max_degree`, in
/// lexicographic order. The generator draws one coefficient per tuple in
/// exactly this order, which fixes the random stream layout.
fn monomials(dim: usize, max_degree: usize) -> Vec<Vec<usize>> {
    fn rec(dim: usize, budget: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == dim {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            rec(dim, budget - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, max_degree, &mut Vec::new(), &mut out);
    out
}

fn format_coefficient(c: f64) -> String {
    if c < 0.0 {
        format!("({c:?})")
    } else {
        format!("{c:?}")
    }
}

/// Random polynomial of total degree ≤ `max_degree` with coefficients drawn
/// uniformly from [−0.5, 0.5], rendered as expression source.
pub(crate) fn random_polynomial_source(
    names: &[&str],
    max_degree: usize,
    rng: &mut XorShiftRng,
) -> String {
    let dim = names.len();
    let mut terms = Vec::new();
    for exponents in monomials(dim, max_degree) {
        let c = rng.range(-0.5, 0.5);
        let mut term = format_coefficient(c);
        for (axis, &e) in exponents.iter().enumerate() {
            match e {
                0 => {}
                1 => {
                    term.push('*');
                    term.push_str(names[axis]);
                }
                _ => {
                    term.push('*');
                    term.push_str(names[axis]);
                    term.push_str(&format!("^{e}"));
                }
            }
        }
        terms.push(term);
    }
    terms.join(" + ")
}

/// Deterministic random SPD metric: `m = Bᵀ·B + 0.1·I`, where the entries of
/// `B` are random polynomials of total degree ≤ `roughness` in the chart
/// coordinates with coefficients in [−0.5, 0.5].
///
/// Positive-definiteness holds by construction everywhere (eigenvalues of
/// `BᵀB` are nonnegative), with smallest eigenvalue at least 0.1; the
/// declared sample box is `[−1, 1]^dim`. Output depends only on
/// `(dim, seed, roughness)`.
pub fn random_metric(dim: usize, seed: u64, roughness: usize) -> Result<MetricManifest> {
    if dim != 2 && dim != 3 {
        return Err(Error::config(format!(
            "random metrics support dimensions 2 and 3, got {dim}"
        )));
    }
    if roughness > 3 {
        return Err(Error::config(format!(
            "roughness must be at most 3, got {roughness}"
        )));
    }
    let names = coordinate_names(dim);
    let label = 0x6D65_7472_6963_0000_u64 | (dim as u64) << 8 | roughness as u64;
    let mut rng = XorShiftRng::substream(seed, label);

    // B drawn row-major: k = 0..dim rows, a = 0..dim columns
    let mut b = vec![vec![String::new(); dim]; dim];
    for row in b.iter_mut() {
        for entry in row.iter_mut() {
            *entry = random_polynomial_source(names, roughness, &mut rng);
        }
    }

    let mut upper = Vec::with_capacity(dim * (dim + 1) / 2);
    for a in 0..dim {
        for c in a..dim {
            let mut products: Vec<String> = (0..dim)
                .map(|k| format!("({})*({})", b[k][a], b[k][c]))
                .collect();
            if a == c {
                products.push("0.1".into());
            }
            upper.push(products.join(" + "));
        }
    }

    MetricManifest::from_upper_triangle(
        &format!("random{dim}d_s{seed}_r{roughness}"),
        names,
        &upper,
        None,
        &vec![[-1.0, 1.0]; dim],
        Some("generated: B^T*B + 0.1*I with random polynomial B"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Point;
    use crate::connection::inverse_metric;
    use crate::curvature::riemann_classic;
    use crate::diff::DiffMode;
    use crate::metric::MetricField;

    /// Jacobi eigenvalue iteration for small symmetric matrices; test oracle
    /// independent of the Cholesky-based production path.
    fn symmetric_eigenvalues(n: usize, mat: &[f64]) -> Vec<f64> {
        let mut a = mat.to_vec();
        for _ in 0..60 {
            let mut off = 0.0;
            let (mut p, mut q) = (0, 1);
            for i in 0..n {
                for j in (i + 1)..n {
                    if a[i * n + j].abs() > off {
                        off = a[i * n + j].abs();
                        p = i;
                        q = j;
                    }
                }
            }
            if off < 1e-14 {
                break;
            }
            let apq = a[p * n + q];
            let theta = 0.5 * (a[q * n + q] - a[p * n + p]) / apq;
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            for k in 0..n {
                let akp = a[k * n + p];
                let akq = a[k * n + q];
                a[k * n + p] = c * akp - s * akq;
                a[k * n + q] = s * akp + c * akq;
            }
            for k in 0..n {
                let apk = a[p * n + k];
                let aqk = a[q * n + k];
                a[p * n + k] = c * apk - s * aqk;
                a[q * n + k] = s * apk + c * aqk;
            }
        }
        (0..n).map(|i| a[i * n + i]).collect()
    }

    #[test]
    fn euclidean2_has_identity_components() {
        let m = MetricField::from_manifest(&builtin("euclidean2").unwrap()).unwrap();
        let p = Point::new(vec![0.3, -0.7]).unwrap();
        assert_eq!(m.value_matrix(&p).unwrap(), vec![1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn sphere_at_equator_is_identity() {
        let m = MetricField::from_manifest(&builtin("sphere_unit").unwrap()).unwrap();
        let p = Point::new(vec![std::f64::consts::FRAC_PI_2, 1.0]).unwrap();
        let mat = m.value_matrix(&p).unwrap();
        assert!((mat[0] - 1.0).abs() < 1e-15);
        assert!((mat[3] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unknown_builtin_is_an_error() {
        assert!(matches!(
            builtin("unknown"),
            Err(Error::UnknownBuiltin { .. })
        ));
    }

    #[test]
    fn every_builtin_is_spd_on_its_sample_grid() {
        for name in BUILTIN_NAMES {
            let manifest = builtin(name).unwrap();
            let m = MetricField::from_manifest(&manifest).unwrap();
            let n = manifest.dimension;
            let steps = 10usize;
            let mut grid_index = vec![0usize; n];
            loop {
                let coords: Vec<f64> = (0..n)
                    .map(|axis| {
                        let [lo, hi] = manifest.sample_region[axis];
                        lo + (hi - lo) * (grid_index[axis] as f64 + 0.5) / steps as f64
                    })
                    .collect();
                let p = Point::new(coords).unwrap();
                m.chart()
                    .guard_ok(&p)
                    .unwrap_or_else(|e| panic!("{name}: sample region point outside guard: {e}"));
                inverse_metric(&m, &p).unwrap_or_else(|e| panic!("{name}: not SPD at {p}: {e}"));
                // odometer over the grid
                let mut axis = 0;
                loop {
                    grid_index[axis] += 1;
                    if grid_index[axis] < steps {
                        break;
                    }
                    grid_index[axis] = 0;
                    axis += 1;
                    if axis == n {
                        break;
                    }
                }
                if axis == n {
                    break;
                }
            }
        }
    }

    #[test]
    fn random_metric_is_deterministic() {
        let a = random_metric(2, 42, 2).unwrap();
        let b = random_metric(2, 42, 2).unwrap();
        assert_eq!(a, b);
        let c = random_metric(2, 43, 2).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn random_metric_round_trips_through_manifest_json() {
        for (dim, seed, roughness) in [(2, 1, 0), (2, 7, 3), (3, 5, 2)] {
            let m = random_metric(dim, seed, roughness).unwrap();
            let back = MetricManifest::from_json(&m.to_json()).unwrap();
            assert_eq!(m, back);
            MetricField::from_manifest(&back).unwrap();
        }
    }

    #[test]
    fn random_metric_rejects_bad_parameters() {
        assert!(random_metric(4, 1, 1).is_err());
        assert!(random_metric(2, 1, 4).is_err());
    }

    #[test]
    fn eigenvalue_floor_holds_at_random_points() {
        let mut rng = XorShiftRng::new(99);
        for (dim, seed) in [(2usize, 11u64), (3, 12)] {
            let m = MetricField::from_manifest(&random_metric(dim, seed, 2).unwrap()).unwrap();
            for _ in 0..50 {
                let coords: Vec<f64> = (0..dim).map(|_| rng.range(-1.0, 1.0)).collect();
                let p = Point::new(coords).unwrap();
                let mat = m.value_matrix(&p).unwrap();
                let eigs = symmetric_eigenvalues(dim, &mat);
                for e in eigs {
                    assert!(e >= 0.1 - 1e-12, "eigenvalue {e} below floor at {p}");
                }
            }
        }
    }

    #[test]
    fn roughness_zero_metric_is_flat() {
        let m = MetricField::from_manifest(&random_metric(2, 3, 0).unwrap()).unwrap();
        let p = Point::new(vec![0.2, -0.6]).unwrap();
        let r = riemann_classic(&m, &p, DiffMode::Dual).unwrap();
        assert!(r.values.max_abs() < 1e-9);
    }

    #[test]
    fn monomial_order_is_stable() {
        let ms = monomials(2, 2);
        assert_eq!(
            ms,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 1],
                vec![2, 0],
            ]
        );
    }
}
